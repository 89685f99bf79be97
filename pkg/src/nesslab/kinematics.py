"""Momentum-lattice geometry and Galilean boost bookkeeping.

Units are hbar = 1 throughout. The particle mass is carried explicitly; the
Girardeau pipeline uses m = 1/2, so a single particle of wave number k has
energy k**2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

GIRARDEAU_MASS = 0.5
TIE_RULE = "sign-of-v-then-smaller-magnitude"

# relative slack when snapping v/spacing onto an integer
_SNAP = 1e-12


@dataclass(frozen=True)
class SystemGeometry:
    """N particles on a ring of length L.

    ``rho`` is derived, so it equals ``N / L`` exactly.
    """

    L: float
    N: int
    mass: float = GIRARDEAU_MASS
    require_odd: bool = False

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"box length must be positive, got L={self.L}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"particle number must be a positive integer, got N={self.N}")
        if self.require_odd and self.N % 2 == 0:
            raise ValueError(f"Girardeau geometries need odd N, got N={self.N}")
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")

    @property
    def rho(self) -> float:
        return self.N / self.L

    @property
    def lattice(self) -> "MomentumLattice":
        return MomentumLattice(self.L)

    @property
    def spacing(self) -> float:
        return 2 * math.pi / self.L


def girardeau_geometry(N: int, L: float) -> SystemGeometry:
    return SystemGeometry(L=L, N=N, mass=GIRARDEAU_MASS, require_odd=True)


def thermodynamic_geometry(rho: float, L: float) -> SystemGeometry:
    """Girardeau geometry of length L whose density is as close to rho as odd N allows.

    N is the odd integer nearest to rho*L (ties go to the smaller one), so
    the realised density differs from rho by at most 1/L.
    """
    if not rho > 0:
        raise ValueError(f"density must be positive, got {rho}")
    x = rho * L
    lo = 2 * math.floor((x - 1) / 2) + 1
    hi = lo + 2
    N = lo if (x - lo) <= (hi - x) else hi
    return girardeau_geometry(max(N, 1), L)


@dataclass(frozen=True)
class MomentumLattice:
    """The wave numbers 2*pi*n/L, n integer."""

    L: float

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"box length must be positive, got L={self.L}")

    @property
    def spacing(self) -> float:
        return 2 * math.pi / self.L

    def point(self, n: int) -> float:
        return n * self.spacing

    def points(self, n_max: int) -> np.ndarray:
        return np.arange(-n_max, n_max + 1) * self.spacing

    def index_of(self, k: float) -> int:
        """Integer index of a lattice point; raises if k is off the lattice."""
        x = k / self.spacing
        n = round(x)
        if abs(x - n) > _SNAP * max(1.0, abs(x)):
            raise ValueError(f"{k} is not a point of the lattice with spacing {self.spacing}")
        return int(n)

    def contains(self, k: float) -> bool:
        try:
            self.index_of(k)
        except ValueError:
            return False
        return True


@dataclass(frozen=True)
class BoostSpec:
    v_target: float
    v_lattice: float
    index: int
    tie_rule: str = field(default=TIE_RULE)

    @property
    def moved(self) -> bool:
        return self.v_lattice != self.v_target


def _prescribe_component(v: float, spacing: float) -> int:
    x = abs(v) / spacing
    n = math.floor(x)
    # accept v sitting on a lattice point up to rounding
    if x - n > 1 - _SNAP * max(1.0, x):
        n += 1
    return int(n) if v >= 0 else -int(n)


def prescription(v: float, lattice: MomentumLattice) -> BoostSpec:
    """Replace ``v`` by the nearest lattice point of magnitude at most ``|v|``.

    In one dimension the admissible points lie in ``[-|v|, |v|]`` and the
    nearest one to ``v`` is unique: the largest multiple of the spacing on
    the side of ``v``. The tie rule is recorded for reproducibility; ties
    only become possible per component in higher dimensions.
    """
    n = _prescribe_component(float(v), lattice.spacing)
    return BoostSpec(v_target=float(v), v_lattice=n * lattice.spacing, index=n)


def prescription_vector(v, lattice: MomentumLattice) -> np.ndarray:
    """Component-wise prescription for d > 1 velocities."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    return np.array([_prescribe_component(c, lattice.spacing) for c in v]) * lattice.spacing


def boost_energy_shift(N: int, v: float, m: float = 1.0) -> float:
    """Energy N*m*v**2/2 imparted by boosting N particles to velocity v."""
    if N < 1:
        raise ValueError("N must be at least 1")
    return N * m * v * v / 2


def boosted_floor(N: int, v: float, m: float = 1.0) -> float:
    """Continuum bottom -N*m*v**2/2 of the boosted Hamiltonian spectrum."""
    if N < 1:
        raise ValueError("N must be at least 1")
    return -N * m * v * v / 2
