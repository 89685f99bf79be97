"""Self-consistent Schafroth-pair condensate in a cylinder with an axial field.

The one-particle ground state in the k = 0 angular sector feels the
potential alpha(rho)**2 with alpha = e a(rho) / hbar, where a is the
theta-component of the vector potential. Its density drives the London
current, which in turn fixes a through

    a'' + a'/rho - a/rho**2 = mu0 (e**2/m) n(rho) a,    0 < rho < R,

with a(0) = 0 and B_z(R) = B_ext. Outside the sample B_z = B_ext, and a is
continued as B_ext*rho/2 plus the curl-free term that carries the flux
deficit of the interior.

Discretisation: uniform radial grid, second-order finite differences. The
eigenproblem uses the symmetric finite-volume form of -(1/rho)(rho phi')',
whose origin cell reproduces the even-extension stencil 4(phi_0-phi_1)/h**2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import constants
from scipy.linalg import eigh_tridiagonal, solve_banded
from scipy.special import i0e


@dataclass(frozen=True)
class PhysicalUnits:
    hbar: float = 1.0
    e: float = 1.0
    m: float = 1.0
    mu0: float = 1.0
    mode: str = "dimensionless"

    def __post_init__(self):
        for name in ("hbar", "e", "m", "mu0"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.mode not in ("dimensionless", "SI"):
            raise ValueError(f"unknown units mode {self.mode!r}")

    @classmethod
    def dimensionless(cls) -> "PhysicalUnits":
        return cls()

    @classmethod
    def si(cls) -> "PhysicalUnits":
        """Electron pairs: charge 2e, mass 2 m_e, in MKS units."""
        return cls(hbar=constants.hbar, e=2 * constants.e, m=2 * constants.m_e, mu0=constants.mu_0, mode="SI")

    @classmethod
    def from_mode(cls, mode: str) -> "PhysicalUnits":
        if mode == "dimensionless":
            return cls.dimensionless()
        if mode == "SI":
            return cls.si()
        raise ValueError(f"unknown units mode {mode!r}")


def london_length(n0: float, units: PhysicalUnits = PhysicalUnits()) -> float:
    """lambda_L = sqrt(m / (mu0 e**2 n0))."""
    return math.sqrt(units.m / (units.mu0 * units.e**2 * n0))


def london_profile(rho, R: float, lam: float, B_ext: float):
    """B_ext * I0(rho/lam) / I0(R/lam), evaluated without overflow."""
    rho = np.asarray(rho, dtype=float)
    return B_ext * np.exp((rho - R) / lam) * i0e(rho / lam) / i0e(R / lam)


@dataclass(frozen=True)
class CylinderGeometry:
    """Radial grid 0 = rho_0 < ... < rho_n = R_max with R on node ``nodes``.

    ``nodes`` counts intervals in [0, R]; the spacing is h = R / nodes.
    ``height`` only enters through the normalisation of the condensate.
    """

    R: float
    R_max: float
    nodes: int
    height: float = 1.0

    def __post_init__(self):
        if not (self.R > 0 and self.height > 0):
            raise ValueError("R and height must be positive")
        if self.nodes < 2:
            raise ValueError("need at least 2 intervals in [0, R]")
        if self.R_max < 2 * self.R * (1 - 1e-12):
            raise ValueError(f"R_max={self.R_max} must be at least 2R={2 * self.R}")
        n = self.R_max / self.h
        if abs(n - round(n)) > 1e-8 * n:
            raise ValueError("R_max must be a whole number of grid spacings")

    @property
    def h(self) -> float:
        return self.R / self.nodes

    @property
    def n_total(self) -> int:
        return int(round(self.R_max / self.h))

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.n_total + 1) * self.h

    @property
    def R_index(self) -> int:
        return self.nodes

    @classmethod
    def disk(cls, R_max: float, intervals: int, height: float = 1.0) -> "CylinderGeometry":
        """Benchmark geometry with R = R_max / 2 and ``intervals`` cells in [0, R_max]."""
        if intervals % 2:
            raise ValueError("intervals must be even so that R = R_max/2 is a node")
        return cls(R=R_max / 2, R_max=R_max, nodes=intervals // 2, height=height)

    def scaled(self, factor: float) -> "CylinderGeometry":
        return replace(self, R=self.R * factor, R_max=self.R_max * factor)


@dataclass(frozen=True)
class FieldProfile:
    rho: np.ndarray
    a: np.ndarray
    B_z: np.ndarray
    B_ext: float
    R_index: int

    @property
    def R(self) -> float:
        return float(self.rho[self.R_index])

    def interior(self) -> slice:
        return slice(0, self.R_index + 1)

    def mixed(self, other: "FieldProfile", mix: float) -> "FieldProfile":
        # a, B_z and the exterior continuation are all linear in the interior a
        return FieldProfile(
            rho=self.rho,
            a=(1 - mix) * self.a + mix * other.a,
            B_z=(1 - mix) * self.B_z + mix * other.B_z,
            B_ext=other.B_ext,
            R_index=self.R_index,
        )


def _exterior(geometry: CylinderGeometry, a_in: np.ndarray, B_in: np.ndarray, B_ext: float) -> FieldProfile:
    rho = geometry.grid
    M = geometry.R_index
    R = geometry.R
    a = np.empty_like(rho)
    B = np.empty_like(rho)
    a[: M + 1] = a_in
    B[: M + 1] = B_in
    out = rho[M + 1 :]
    a[M + 1 :] = B_ext * out / 2 + (a_in[M] - B_ext * R / 2) * R / out
    B[M + 1 :] = B_ext
    return FieldProfile(rho=rho, a=a, B_z=B, B_ext=float(B_ext), R_index=M)


def uniform_profile(B_ext: float, geometry: CylinderGeometry) -> FieldProfile:
    """Field left untouched by the sample: a = B rho / 2 everywhere."""
    rho = geometry.grid
    return FieldProfile(rho=rho, a=B_ext * rho / 2, B_z=np.full_like(rho, float(B_ext)), B_ext=float(B_ext), R_index=geometry.R_index)


def effective_alpha(profile: FieldProfile, units: PhysicalUnits = PhysicalUnits()) -> np.ndarray:
    return units.e / units.hbar * profile.a


class EigensolverError(RuntimeError):
    pass


def _fv_operator(n: int, h: float, potential: np.ndarray, origin: bool):
    """Symmetrised tridiagonal (diag, offdiag) of -(1/rho)(rho phi')' + potential.

    Unknowns are nodes 0..n-1 when ``origin`` (regular at rho = 0), else
    nodes 1..n-1 with phi_0 = 0. phi_n = 0 (Dirichlet) in both cases.
    """
    idx = np.arange(n)
    vol = idx * h * h
    vol[0] = h * h / 8
    c_right = idx + 0.5          # rho_{i+1/2} / h
    c_left = np.maximum(idx - 0.5, 0.0)
    diag_k = c_left + c_right
    off_k = -c_right[:-1]
    if not origin:
        vol, diag_k, off_k = vol[1:], diag_k[1:], off_k[1:]
        potential = potential[1:]
    d = diag_k / vol + potential
    e = off_k / np.sqrt(vol[:-1] * vol[1:])
    return d, e, vol


def _lowest(d, e):
    try:
        w, v = eigh_tridiagonal(d, e, select="i", select_range=(0, 0))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise EigensolverError(f"tridiagonal eigensolve failed: {exc}") from exc
    if w.size != 1 or not np.isfinite(w[0]):
        raise EigensolverError(f"eigensolve returned {w}")
    return float(w[0]), v[:, 0]


def radial_ground_state(alpha, geometry: CylinderGeometry, units: PhysicalUnits = PhysicalUnits()):
    """Lowest eigenpair of -phi'' - phi'/rho + alpha**2 phi = (2m/hbar**2) E phi.

    phi'(0) = 0 and phi(R_max) = 0. Returns (E0, phi0) with phi0 on the full
    grid, non-negative, and normalised so that
    2*pi*height * integral |phi0|**2 rho drho = 1.
    """
    alpha = np.asarray(alpha, dtype=float)
    n = geometry.n_total
    if alpha.shape != (n + 1,):
        raise ValueError(f"alpha must live on the {n + 1}-node grid")
    h = geometry.h
    d, e, vol = _fv_operator(n, h, alpha[:n] ** 2, origin=True)
    lam, psi = _lowest(d, e)
    phi = np.zeros(n + 1)
    phi[:n] = psi / np.sqrt(vol)
    if phi[np.argmax(np.abs(phi))] < 0:
        phi = -phi
    phi = np.clip(phi, 0.0, None)
    norm = 2 * math.pi * geometry.height * np.sum(vol * phi[:n] ** 2)
    phi /= math.sqrt(norm)
    return units.hbar**2 * lam / (2 * units.m), phi


def sector_ground_energy(alpha, geometry: CylinderGeometry, k: int, units: PhysicalUnits = PhysicalUnits()) -> float:
    """Lowest energy in angular sector k, potential (k + rho alpha)**2 / rho**2.

    Diagnostic for the k = 0 ground-state assumption; k = 0 delegates to
    ``radial_ground_state``.
    """
    if k == 0:
        return radial_ground_state(alpha, geometry, units)[0]
    alpha = np.asarray(alpha, dtype=float)
    n = geometry.n_total
    rho = geometry.grid
    pot = np.zeros(n)
    pot[1:] = (k + rho[1:n] * alpha[1:n]) ** 2 / rho[1:n] ** 2
    d, e, _ = _fv_operator(n, geometry.h, pot, origin=False)
    lam, _ = _lowest(d, e)
    return units.hbar**2 * lam / (2 * units.m)


def maxwell_update(n, B_ext: float, geometry: CylinderGeometry, units: PhysicalUnits = PhysicalUnits()) -> FieldProfile:
    """Vector potential sourced by the London current of density ``n``.

    ``n`` is read on the nodes of [0, R] (a full-grid array is sliced). The
    boundary condition at R is B_z(R) = B_ext, imposed with a ghost node; the
    origin node carries a(0) = 0 and B_z(0) from the odd series of a.
    """
    M = geometry.R_index
    h = geometry.h
    R = geometry.R
    n = np.asarray(n, dtype=float)[: M + 1]
    if n.shape != (M + 1,):
        raise ValueError(f"density must cover the {M + 1} nodes of [0, R]")
    if np.any(n < 0):
        raise ValueError("density must be non-negative")
    rho = np.arange(M + 1) * h
    kappa2 = units.mu0 * units.e**2 / units.m * n
    r = rho[1:]
    lo = 1 / h**2 - 1 / (2 * h * r)
    up = 1 / h**2 + 1 / (2 * h * r)
    main = -2 / h**2 - 1 / r**2 - kappa2[1:]
    rhs = np.zeros(M)
    lo_last = lo[-1] + up[-1]
    main[-1] -= up[-1] * 2 * h / R
    rhs[-1] = -up[-1] * 2 * h * B_ext
    ab = np.zeros((3, M))
    ab[0, 1:] = up[:-1]
    ab[1, :] = main
    ab[2, :-1] = lo[1:]
    ab[2, -2] = lo_last
    try:
        sol = solve_banded((1, 1), ab, rhs)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"Maxwell solve failed: {exc}") from exc
    a = np.concatenate([[0.0], sol])
    B = np.empty(M + 1)
    B[1:M] = (a[2:] - a[:-2]) / (2 * h) + a[1:M] / rho[1:M]
    B[0] = (8 * a[1] - a[2]) / (3 * h) if M >= 2 else 2 * a[1] / h
    B[M] = B_ext
    return _exterior(geometry, a, B, B_ext)


@dataclass(frozen=True)
class ScfConfig:
    tol: float = 1e-10
    mix: float = 1.0
    max_iter: int = 200

    def __post_init__(self):
        if not (0 < self.mix <= 1):
            raise ValueError(f"mix must lie in (0, 1], got {self.mix}")
        if not self.tol > 0 or self.max_iter < 1:
            raise ValueError("tol must be positive and max_iter at least 1")


@dataclass
class ScfState:
    phi0: np.ndarray
    E0: float
    n: np.ndarray
    iteration: int
    residual: float
    history: list[float] = field(default_factory=list)
    converged: bool = False


class ScfNotConverged(RuntimeError):
    def __init__(self, state: ScfState, profile: FieldProfile):
        super().__init__(
            f"SCF did not converge in {state.iteration} iterations (last residual {state.residual:.3e})"
        )
        self.state = state
        self.profile = profile
        self.history = list(state.history)


def scf_solve(
    B_ext: float,
    geometry: CylinderGeometry,
    units: PhysicalUnits = PhysicalUnits(),
    n_particles: float = 1.0,
    config: ScfConfig = ScfConfig(),
    initial: FieldProfile | None = None,
    frozen_density=None,
):
    """Alternate the radial eigensolve and the Maxwell step to a fixed point.

    a <- (1 - mix) a + mix a_new until sup |delta a| on [0, R] drops below
    ``tol``. The condensate density is n = n_particles * phi0**2 unless
    ``frozen_density`` is given. Raises ScfNotConverged, carrying the
    residual history, after ``max_iter`` iterations.
    """
    if not B_ext > 0:
        raise ValueError("applied field must be positive")
    profile = initial if initial is not None else uniform_profile(B_ext, geometry)
    inner = profile.interior()
    history: list[float] = []
    E0, phi = radial_ground_state(effective_alpha(profile, units), geometry, units)
    for it in range(1, config.max_iter + 1):
        if frozen_density is None:
            E0, phi = radial_ground_state(effective_alpha(profile, units), geometry, units)
            n = n_particles * phi**2
        else:
            n = np.asarray(frozen_density, dtype=float)
        new = maxwell_update(n, B_ext, geometry, units)
        mixed = profile.mixed(new, config.mix)
        res = float(np.max(np.abs(mixed.a[inner] - profile.a[inner])))
        history.append(res)
        profile = mixed
        state = ScfState(phi0=phi, E0=E0, n=n, iteration=it, residual=res, history=history)
        if res < config.tol:
            state.converged = True
            return state, profile
    raise ScfNotConverged(state, profile)


@dataclass(frozen=True)
class PenetrationFit:
    lam: float
    quality: float
    n_points: int
    decays: bool
    correction: str
    excluded: int = 0


def penetration_depth(profile: FieldProfile, fit_region=None, correction: str = "cylinder") -> PenetrationFit:
    """Decay length of B_z inward from the surface by a log-linear fit.

    ``fit_region`` is (rho_min, rho_max), default (R/2, R). With
    ``correction='cylinder'`` the fitted quantity is log(B_z sqrt(rho)),
    which removes the 1/sqrt(rho) factor of the London solution
    I0(rho/lambda) ~ exp(rho/lambda)/sqrt(2 pi rho/lambda); ``'planar'``
    fits log B_z directly. ``quality`` is the coefficient of determination.
    A profile that does not decay gives lam = inf and decays = False.
    """
    if correction not in ("cylinder", "planar"):
        raise ValueError(f"unknown correction {correction!r}")
    R = profile.R
    lo, hi = fit_region if fit_region is not None else (R / 2, R)
    rho = profile.rho
    sel = (rho >= lo) & (rho <= hi) & (rho > 0) & (rho <= R)
    B = profile.B_z[sel]
    r = rho[sel]
    pos = B > 0
    excluded = int(np.count_nonzero(~pos))
    if excluded:
        warnings.warn(f"{excluded} non-positive B_z samples excluded from the fit", RuntimeWarning, stacklevel=2)
    B, r = B[pos], r[pos]
    if B.size < 2:
        raise ValueError("fit region holds fewer than two usable samples")
    if (B.max() - B.min()) <= 1e-9 * B.max():
        return PenetrationFit(lam=math.inf, quality=1.0, n_points=int(B.size), decays=False, correction=correction, excluded=excluded)
    y = np.log(B)
    if correction == "cylinder":
        y = y + 0.5 * np.log(r)
    x = R - r
    slope, icpt = np.polyfit(x, y, 1)
    fit = slope * x + icpt
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    quality = 1.0 - float(np.sum((y - fit) ** 2)) / ss_tot if ss_tot > 0 else 1.0
    if slope >= 0:
        return PenetrationFit(lam=math.inf, quality=quality, n_points=int(B.size), decays=False, correction=correction, excluded=excluded)
    return PenetrationFit(lam=-1.0 / slope, quality=quality, n_points=int(B.size), decays=True, correction=correction, excluded=excluded)
