"""Exhaustive and windowed enumeration of free-fermion configurations.

``bruteforce_min`` is the independent oracle: it scans every N-subset of
[-W, W] with no physics beyond additivity of energy and momentum.
``enumerate_window`` is the production path for the metastability window
and prunes on energy and momentum bounds instead.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .girardeau import (
    FermiConfig,
    SpectrumPoint,
    energy_scale,
    fermi_index,
    ground_energy_units,
    velocity_index,
)
from .kinematics import SystemGeometry

DEFAULT_BUDGET = 50_000_000

# relative slack on the float cutoffs once they are expressed in lattice units
_CUTOFF_SLACK = 1e-12


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would visit more configurations than allowed."""

    def __init__(self, needed, budget):
        super().__init__(f"enumeration needs {needed} configurations, budget is {budget}")
        self.needed = needed
        self.budget = budget


class EmptyWindowError(ValueError):
    pass


def global_window(geometry: SystemGeometry, v: float) -> int:
    """Smallest W for which ``bruteforce_min`` is guaranteed to hit the global minimum.

    The single-particle cost n**2 + nv*n is a parabola centred at -nv/2, and
    the optimum fills the N cheapest indices, which all lie within
    |nv|/2 + (N-1)/2 of the origin. The bound used here, |nv| + (N-1)/2, is
    the looser ceil(|v| L / 2 pi) + (N-1)/2.
    """
    x = abs(v) * geometry.L / (2 * math.pi)
    nx = round(x)
    c = nx if abs(x - nx) < 1e-9 else math.ceil(x)
    return int(c) + fermi_index(geometry)


def bruteforce_min(geometry: SystemGeometry, v: float, W: int, budget: int = DEFAULT_BUDGET) -> float:
    """Exact minimum of (E - E0) + v*P over all N-subsets of [-W, W].

    Only lattice velocities are accepted; the scan runs in integer units of
    spacing**2 so the returned value is exact up to the final scaling.
    """
    units, _ = bruteforce_argmin(geometry, v, W, budget)
    s = geometry.spacing
    return units * s * s


def bruteforce_argmin(geometry: SystemGeometry, v: float, W: int, budget: int = DEFAULT_BUDGET):
    N = geometry.N
    a = fermi_index(geometry)
    if W < a:
        raise ValueError(f"window W={W} cannot hold the ground sea (needs W >= {a})")
    nv = velocity_index(v, geometry)
    count = math.comb(2 * W + 1, N)
    if count > budget:
        raise BudgetExceeded(count, budget)
    e0 = ground_energy_units(geometry)
    best = None
    best_cfg = None
    for comb in itertools.combinations(range(-W, W + 1), N):
        val = sum(n * n + nv * n for n in comb)
        if best is None or val < best:
            best, best_cfg = val, comb
    return best - e0, FermiConfig(best_cfg, geometry)


def bruteforce_configs(geometry: SystemGeometry, W: int, budget: int = DEFAULT_BUDGET):
    """Every N-subset of [-W, W] as a FermiConfig (oracle side of cross-checks)."""
    count = math.comb(2 * W + 1, geometry.N)
    if count > budget:
        raise BudgetExceeded(count, budget)
    for comb in itertools.combinations(range(-W, W + 1), geometry.N):
        yield FermiConfig(comb, geometry)


@dataclass(frozen=True)
class MetastabilityWindow:
    """Energy cutoff ``c`` on E - E0 and momentum cutoff ``d`` on |P|."""

    c: float
    d: float

    def __post_init__(self):
        if not (self.c > 0 and self.d > 0):
            raise ValueError(f"window cutoffs must be positive, got c={self.c}, d={self.d}")
        if not (math.isfinite(self.c) and math.isfinite(self.d)):
            raise ValueError("window cutoffs must be finite")

    @classmethod
    def default(cls, rho: float) -> "MetastabilityWindow":
        return cls(c=2 * (math.pi * rho) ** 2, d=math.pi * rho)


def _window_units(geometry: SystemGeometry, window: MetastabilityWindow, convention: str):
    s = geometry.spacing
    scale = energy_scale(convention)
    c_units = window.c / (scale * s * s) * (1 + _CUTOFF_SLACK)
    d_units = window.d / s * (1 + _CUTOFF_SLACK)
    return c_units, d_units


def enumerate_window(
    geometry: SystemGeometry,
    window: MetastabilityWindow,
    budget: int = DEFAULT_BUDGET,
    convention: str = "m-half",
) -> list[SpectrumPoint]:
    """All eigenstates with E - E0 <= c and |P| <= d, as v = 0 spectrum points.

    A state holding an index with k**2 > E0 + c already exceeds the cutoff,
    so single-particle indices are restricted to |n| <= sqrt(E0 + c)/spacing.
    Within that range a depth-first search over increasing index sets is
    pruned with the cheapest possible completion in energy and the extreme
    completions in momentum. Results are sorted by (lam, k, indices).
    """
    N = geometry.N
    s = geometry.spacing
    scale = energy_scale(convention)
    e0 = ground_energy_units(geometry)
    c_units, d_units = _window_units(geometry, window, convention)
    e_cap = e0 + c_units
    n_max = math.isqrt(math.floor(e_cap))
    pool = list(range(-n_max, n_max + 1))
    npool = len(pool)
    if npool < N:
        raise EmptyWindowError("window excludes the ground configuration")

    # cheapest completions of size r from pool[pos:], in energy and momentum
    inf = math.inf
    min_sq = [[inf] * (N + 1) for _ in range(npool + 1)]
    min_p = [[inf] * (N + 1) for _ in range(npool + 1)]
    max_p = [[-inf] * (N + 1) for _ in range(npool + 1)]
    for pos in range(npool, -1, -1):
        suffix = pool[pos:]
        sq = sorted(n * n for n in suffix)
        for r in range(0, min(N, len(suffix)) + 1):
            min_sq[pos][r] = sum(sq[:r])
            min_p[pos][r] = sum(suffix[:r])
            max_p[pos][r] = sum(suffix[len(suffix) - r:]) if r else 0

    found: list[tuple[int, int, tuple[int, ...]]] = []
    visited = 0
    chosen: list[int] = []

    def dfs(pos, esum, psum):
        nonlocal visited
        visited += 1
        if visited > budget:
            raise BudgetExceeded(visited, budget)
        r = N - len(chosen)
        if r == 0:
            if abs(psum) <= d_units:
                found.append((esum - e0, psum, tuple(chosen)))
            return
        for i in range(pos, npool - r + 1):
            n = pool[i]
            e_new = esum + n * n
            rest = r - 1
            if e_new + min_sq[i + 1][rest] > e_cap:
                continue
            p_new = psum + n
            if p_new + min_p[i + 1][rest] > d_units or p_new + max_p[i + 1][rest] < -d_units:
                continue
            chosen.append(n)
            dfs(i + 1, e_new, p_new)
            chosen.pop()

    dfs(0, 0, 0)
    found.sort()
    points = []
    for d_e, p, occ in found:
        lam_units = scale * d_e if scale != 1.0 else d_e
        points.append(SpectrumPoint(lam=lam_units * s * s, k=p * s, lam_units=lam_units, config=FermiConfig(occ, geometry)))
    return points


def boost_points(points, v: float, geometry: SystemGeometry) -> list[SpectrumPoint]:
    """Shift v = 0 spectrum points to the boosted dynamics H~ + v P."""
    s = geometry.spacing
    nv = velocity_index(v, geometry)
    out = []
    for p in points:
        units = p.lam_units + nv * p.config.momentum_units
        out.append(SpectrumPoint(lam=units * s * s, k=p.k, lam_units=units, config=p.config))
    return out


@dataclass(frozen=True)
class MetastabilityResult:
    all_nonneg: bool
    min_lambda: float
    nontrivial: bool
    n_points: int
    v: float
    argmin: FermiConfig | None = None


def metastability_check(
    geometry: SystemGeometry,
    v: float,
    window: MetastabilityWindow,
    tol: float = 1e-12,
    budget: int = DEFAULT_BUDGET,
    convention: str = "m-half",
    points=None,
) -> MetastabilityResult:
    """Sign of the boosted spectrum restricted to the window.

    ``points`` may carry a precomputed ``enumerate_window`` result so that a
    velocity sweep enumerates the window once.
    """
    if points is None:
        points = enumerate_window(geometry, window, budget, convention)
    if not points:
        raise EmptyWindowError(f"no eigenstates in window c={window.c}, d={window.d}")
    boosted = boost_points(points, v, geometry)
    low = min(boosted, key=lambda p: (p.lam_units, p.k))
    nontrivial = any(p.lam_units > 0 for p in boosted)
    return MetastabilityResult(
        all_nonneg=low.lam >= -tol,
        min_lambda=low.lam,
        nontrivial=nontrivial,
        n_points=len(boosted),
        v=v,
        argmin=low.config,
    )


def window_critical_velocity(points) -> float:
    """min over window states with P != 0 of (E - E0)/|P|.

    The boosted window spectrum is non-negative exactly for |v| up to this
    value (inf when the window holds no state with momentum).
    """
    ratios = [p.lam / abs(p.k) for p in points if p.config.momentum_units != 0]
    return min(ratios) if ratios else math.inf
