"""Free-fermion spectrum of the Girardeau (hard-core boson) gas on a ring.

Eigenstates are labelled by N distinct integer indices n_i with wave numbers
k_i = 2*pi*n_i/L. With m = 1/2 the energy is sum(k_i**2) and the momentum is
sum(k_i). Energies are kept as integers in units of spacing**2 and momenta
as integers in units of the spacing, so boosted spectra at lattice
velocities are compared exactly; floats appear only on output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .kinematics import MomentumLattice, SystemGeometry, thermodynamic_geometry

CONVENTIONS = ("m-half", "m-one")


def energy_scale(convention: str) -> float:
    """Factor multiplying sum(k**2) in the excitation energy.

    ``m-half`` is the canonical single-particle energy k**2. ``m-one`` uses
    k**2/2, the unit-mass form of the same formulas.
    """
    if convention == "m-half":
        return 1.0
    if convention == "m-one":
        return 0.5
    raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


@dataclass(frozen=True)
class FermiConfig:
    occupied: tuple[int, ...]
    geometry: SystemGeometry

    def __post_init__(self):
        occ = tuple(sorted(int(n) for n in self.occupied))
        if len(set(occ)) != len(occ):
            raise ValueError(f"occupied indices must be distinct: {self.occupied}")
        if len(occ) != self.geometry.N:
            raise ValueError(f"expected {self.geometry.N} indices, got {len(occ)}")
        object.__setattr__(self, "occupied", occ)

    @property
    def energy_units(self) -> int:
        return sum(n * n for n in self.occupied)

    @property
    def momentum_units(self) -> int:
        return sum(self.occupied)

    def label(self) -> str:
        return ";".join(str(n) for n in self.occupied)


@dataclass(frozen=True)
class SpectrumPoint:
    """Boosted excitation energy ``lam`` and total momentum ``k``.

    ``lam_units`` is the exact value of ``lam / spacing**2`` when the velocity
    sits on the lattice (an integer in the m-half convention), else None.
    """

    lam: float
    k: float
    lam_units: float | None = None
    config: FermiConfig | None = None


def fermi_index(geometry: SystemGeometry) -> int:
    if geometry.N % 2 == 0:
        raise ValueError(f"ground Fermi sea needs odd N, got N={geometry.N}")
    return (geometry.N - 1) // 2


def ground_config(geometry: SystemGeometry) -> FermiConfig:
    a = fermi_index(geometry)
    return FermiConfig(tuple(range(-a, a + 1)), geometry)


def fermi_momentum(geometry: SystemGeometry) -> float:
    """Finite-size Fermi momentum pi*(N-1)/L."""
    fermi_index(geometry)
    return math.pi * (geometry.N - 1) / geometry.L


def ground_energy_units(geometry: SystemGeometry) -> int:
    """sum of n**2 over the ground sea, i.e. N(N**2-1)/12."""
    N = geometry.N
    fermi_index(geometry)
    return N * (N * N - 1) // 12


def energy(config: FermiConfig, convention: str = "m-half") -> float:
    s = config.geometry.spacing
    return energy_scale(convention) * config.energy_units * s * s


def momentum(config: FermiConfig) -> float:
    return config.momentum_units * config.geometry.spacing


def velocity_index(v: float, geometry: SystemGeometry) -> int:
    """Lattice index of ``v``; raises ValueError when v is not a lattice point."""
    return MomentumLattice(geometry.L).index_of(v)


def boosted_units(config: FermiConfig, nv: int, e0_units: int, scale: float = 1.0) -> float:
    """(E - E0)*scale + v*P in units of spacing**2 for the lattice velocity nv*spacing."""
    d_e = config.energy_units - e0_units
    if scale == 1.0:
        return d_e + nv * config.momentum_units
    return scale * d_e + nv * config.momentum_units


def boosted_point(config: FermiConfig, v: float, convention: str = "m-half") -> SpectrumPoint:
    """Spectrum point of H~ + v P for the eigenstate ``config``.

    The energy is measured from the ground sea, so the ground configuration
    gives ``lam = 0`` for every v.
    """
    geo = config.geometry
    s = geo.spacing
    scale = energy_scale(convention)
    e0 = ground_energy_units(geo)
    k = config.momentum_units * s
    try:
        nv = velocity_index(v, geo)
    except ValueError:
        lam = scale * (config.energy_units - e0) * s * s + v * k
        return SpectrumPoint(lam=lam, k=k, lam_units=None, config=config)
    units = boosted_units(config, nv, e0, scale)
    return SpectrumPoint(lam=units * s * s, k=k, lam_units=units, config=config)


@dataclass(frozen=True)
class UmklappLadder:
    r: int
    moves: tuple[tuple[int, int], ...]
    e_total: float
    config: FermiConfig
    e_units: float | None = None

    @property
    def momentum_change(self) -> float:
        return momentum(self.config)


def umklapp_ladder(r: int, v: float, geometry: SystemGeometry, convention: str = "m-half") -> UmklappLadder:
    """Apply r successive umklapp moves across the Fermi sea.

    Move i takes the particle at index a-(i-1) to -a-i, with a = (N-1)/2.
    Each move carries momentum -N*spacing = -2*k_F - 2*pi/L and, in the
    m-half convention, costs N*(2i-1) units of spacing**2; after r moves the
    sea is rigidly shifted by -r. For v < 0 the mirror-image ladder is used
    so that the excitation momentum always opposes v.
    """
    a = fermi_index(geometry)
    N = geometry.N
    if r < 0:
        raise ValueError("number of umklapp moves must be non-negative")
    if r > N:
        raise ValueError(f"at most N={N} umklapp moves fit in the sea, asked for r={r}")
    sign = -1 if v < 0 else 1
    occ = set(range(-a, a + 1))
    moves = []
    for i in range(1, r + 1):
        src, dst = sign * (a - (i - 1)), sign * (-a - i)
        if src not in occ or dst in occ:
            raise ValueError(f"move {i} ({src} -> {dst}) is not a particle-hole move")
        occ.remove(src)
        occ.add(dst)
        moves.append((src, dst))
    config = FermiConfig(tuple(occ), geometry)
    point = boosted_point(config, v, convention)
    return UmklappLadder(r=r, moves=tuple(moves), e_total=point.lam, config=config, e_units=point.lam_units)


def umklapp_counts(v: float, geometry: SystemGeometry) -> tuple[int, int]:
    """Ladder lengths ([L v / 2 pi], [L v / 4 pi]) for |v|.

    The first is the naive count from the boost index; the second is
    the exact minimiser of the m-half ladder energy N*(r**2 - nv*r).
    """
    x = abs(v) * geometry.L / (2 * math.pi)
    nv = round(x) if abs(x - round(x)) < 1e-9 else math.floor(x)
    return int(nv), int(nv) // 2


@dataclass(frozen=True)
class NessLimitPoints:
    values: tuple[float, ...]
    rho: float
    v: float
    in_window: bool

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


def ness_limit_points(rho: float, v: float, j_max: int) -> NessLimitPoints:
    """lambda_j = -2*pi*rho*v*j for j = 1..j_max.

    ``in_window`` is False when v falls outside 0 < |v| < 2*pi*rho; values
    are still returned but carry no certification.
    """
    if j_max < 1:
        raise ValueError("j_max must be at least 1")
    k_f = math.pi * rho
    vals = tuple(-2 * k_f * v * j for j in range(1, j_max + 1))
    return NessLimitPoints(vals, rho, v, 0 < abs(v) < 2 * math.pi * rho)


def ladder_sequence(rho: float, v: float, j: int, M_values, convention: str = "m-half"):
    """Umklapp energies e_total(r=j) on rings L = 2*pi*M at density ~rho.

    Returns a list of (M, L, N, e_total). N is the odd integer nearest to
    rho*L, so v must be a multiple of 1/M for every M; a non-lattice v is a
    ValueError rather than being prescribed silently.
    """
    rows = []
    for M in M_values:
        L = 2 * math.pi * M
        geo = thermodynamic_geometry(rho, L)
        velocity_index(v, geo)
        lad = umklapp_ladder(j, v, geo, convention)
        rows.append((int(M), L, geo.N, lad.e_total))
    return rows

