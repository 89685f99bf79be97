"""KMS boundary residuals and current expectations for finite quantum systems.

Everything is done in the eigenbasis of the relevant Hamiltonian, so the
continuation t -> t + i*beta of a two-point function is exact: in that basis
alpha_z(B)_{kl} = exp(i z (e_k - e_l)) B_{kl}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

HERMITIAN_TOL = 1e-12
COMMUTATOR_TOL = 1e-10


class PreconditionError(ValueError):
    """An input violates a stated precondition (hermiticity, time reversal)."""


def _check_hermitian(M, name, tol=HERMITIAN_TOL):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise PreconditionError(f"{name} must be a square matrix")
    scale = max(1.0, float(np.max(np.abs(M))) if M.size else 1.0)
    if np.max(np.abs(M - M.conj().T), initial=0.0) > tol * scale:
        raise PreconditionError(f"{name} is not Hermitian")
    return M


@dataclass
class FiniteQuantumSystem:
    H: np.ndarray
    P: np.ndarray | None = None
    observables: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.H = _check_hermitian(np.asarray(self.H, dtype=complex), "H")
        if self.P is None:
            self.P = np.zeros_like(self.H)
        self.P = _check_hermitian(np.asarray(self.P, dtype=complex), "P")
        if self.P.shape != self.H.shape:
            raise PreconditionError("H and P differ in shape")
        comm = self.H @ self.P - self.P @ self.H
        if np.max(np.abs(comm), initial=0.0) > COMMUTATOR_TOL:
            raise PreconditionError("H and P do not commute")

    @property
    def dim(self) -> int:
        return self.H.shape[0]

    def boosted(self, v: float) -> np.ndarray:
        return self.H + v * self.P


@dataclass(frozen=True)
class GibbsState:
    beta: float
    rho: np.ndarray
    H: np.ndarray


def gibbs(H, beta: float) -> GibbsState:
    """exp(-beta H)/Z from the spectral decomposition, shifted by min eig(H)."""
    H = _check_hermitian(np.asarray(H, dtype=complex), "H")
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    w, U = np.linalg.eigh(H)
    boltz = np.exp(-beta * (w - w[0]))
    boltz /= boltz.sum()
    rho = (U * boltz) @ U.conj().T
    return GibbsState(beta=float(beta), rho=rho, H=H)


@dataclass(frozen=True)
class KmsResidualReport:
    sup_residual: float
    grid: np.ndarray
    pair: tuple[str, str] = ("A", "B")


def _commute(X, Y) -> bool:
    scale = max(1.0, float(np.max(np.abs(X))), float(np.max(np.abs(Y))))
    return np.max(np.abs(X @ Y - Y @ X), initial=0.0) <= COMMUTATOR_TOL * scale


def kms_residual(state: GibbsState, H_dyn, A, B, t_grid, pair=("A", "B")) -> KmsResidualReport:
    """sup over t of |F(t + i beta) - omega(alpha_t(B) A)|.

    F(z) = omega(A alpha_z(B)) with alpha_z(B) = exp(i z H_dyn) B exp(-i z H_dyn).
    The residual vanishes for every pair when H_dyn generates the dynamics
    the state is KMS for.

    When H_dyn commutes with the Hamiltonian of the state, F(t + i beta) is
    evaluated as Tr(X A exp(-beta (K - k0)) alpha_t(B)) with
    X = exp(beta (K - k0)) rho = exp(-beta (H - K)) exp(beta (h0 - k0)) / Z,
    which keeps every factor bounded. Otherwise the plain spectral formula
    is used, whose rounding error grows like exp(beta * spread(H_dyn)).
    """
    H_dyn = _check_hermitian(np.asarray(H_dyn, dtype=complex), "H_dyn")
    beta = state.beta
    w, U = np.linalg.eigh(H_dyn)
    Ud = U.conj().T
    rho_e = Ud @ state.rho @ U
    A_e = Ud @ np.asarray(A, dtype=complex) @ U
    B_e = Ud @ np.asarray(B, dtype=complex) @ U
    gap = w[:, None] - w[None, :]
    t_grid = np.asarray(t_grid, dtype=float)
    if _commute(state.H, H_dyn):
        wh = np.linalg.eigvalsh(state.H)
        Z = np.sum(np.exp(-beta * (wh - wh[0])))
        wd, V = np.linalg.eigh(state.H - H_dyn)
        X = (V * np.exp(-beta * wd + beta * (wh[0] - w[0]))) @ V.conj().T / Z
        left = (Ud @ X @ U) @ A_e * np.exp(-beta * (w - w[0]))[None, :]

        def boundary(Bt):
            return np.trace(left @ Bt)
    else:
        damp = np.exp(-beta * gap)

        def boundary(Bt):
            return np.trace(rho_e @ A_e @ (Bt * damp))

    worst = 0.0
    for t in t_grid:
        Bt = B_e * np.exp(1j * t * gap)
        worst = max(worst, abs(boundary(Bt) - np.trace(rho_e @ Bt @ A_e)))
    return KmsResidualReport(sup_residual=float(worst), grid=t_grid, pair=tuple(pair))


def matrix_unit(dim: int, i: int, j: int) -> np.ndarray:
    E = np.zeros((dim, dim), dtype=complex)
    E[i, j] = 1.0
    return E


def ness_witness(H, P, v: float, beta: float, observable_basis=None, t_grid=(0.0, 0.7, 1.9)) -> float:
    """Largest KMS residual of Gibbs(H, beta) under the boosted dynamics H + vP.

    The default basis is all ordered pairs of matrix units; the witness is
    zero exactly when vP acts trivially on the Gibbs support.
    """
    system = FiniteQuantumSystem(H, P)
    state = gibbs(system.H, beta)
    H_dyn = system.boosted(v)
    dim = system.dim
    if observable_basis is None:
        units = [matrix_unit(dim, i, j) for i in range(dim) for j in range(dim)]
        pairs = itertools.product(units, repeat=2)
    else:
        pairs = itertools.product(observable_basis, repeat=2)
    return max(kms_residual(state, H_dyn, A, B, t_grid).sup_residual for A, B in pairs)


def ness_demo_pair():
    """4x4 commuting pair H = diag(0,1,1,2), P = diag(0,1,-1,0).

    P is non-scalar on the degenerate level E = 1, so any v != 0 changes
    the dynamics on the Gibbs support.
    """
    H = np.diag([0.0, 1.0, 1.0, 2.0]).astype(complex)
    P = np.diag([0.0, 1.0, -1.0, 0.0]).astype(complex)
    return H, P


def stationarity_defect(state: GibbsState, H_dyn, A, t_grid, dt: float = 1e-4) -> float:
    """max |d/dt omega(alpha_t(A))| by central differences on ``t_grid``."""
    H_dyn = _check_hermitian(np.asarray(H_dyn, dtype=complex), "H_dyn")
    w, U = np.linalg.eigh(H_dyn)
    Ud = U.conj().T
    rho_e = Ud @ state.rho @ U
    A_e = Ud @ np.asarray(A, dtype=complex) @ U
    gap = w[:, None] - w[None, :]

    def expect(t):
        return np.trace(rho_e @ (A_e * np.exp(1j * t * gap)))

    return float(max(abs(expect(t + dt) - expect(t - dt)) / (2 * dt) for t in t_grid))


def current_expectation(H, j, beta: float) -> float:
    """Tr(rho_beta j), no symmetry checks."""
    state = gibbs(H, beta)
    val = np.trace(state.rho @ np.asarray(j, dtype=complex))
    return float(val.real)


def time_reversal_violations(H, j, tol: float = HERMITIAN_TOL) -> list[str]:
    """Reasons why complex conjugation fails to be a time reversal for (H, j)."""
    H = np.asarray(H, dtype=complex)
    j = np.asarray(j, dtype=complex)
    out = []
    if np.max(np.abs(H.imag), initial=0.0) > tol:
        out.append("H is not real in the computational basis")
    if np.max(np.abs(j + j.conj()), initial=0.0) > tol:
        out.append("j is not odd under complex conjugation")
    if np.max(np.abs(j - j.conj().T), initial=0.0) > tol:
        out.append("j is not Hermitian")
    return out


def bloch_current(H, j, beta: float) -> float:
    """Tr(rho_beta j) for a time-reversal invariant H and an odd current j.

    Raises PreconditionError rather than computing when H is not real or j
    is not purely imaginary; use ``current_expectation`` for those cases.
    """
    bad = time_reversal_violations(H, j)
    if bad:
        raise PreconditionError("; ".join(bad))
    return current_expectation(H, j, beta)


def ring_hamiltonian(sites: int = 4, hopping: float = 1.0, flux: float = 0.0) -> np.ndarray:
    """Single-particle tight-binding ring, h = -t sum_x (e^{i phi}|x+1><x| + h.c.)."""
    h = np.zeros((sites, sites), dtype=complex)
    for x in range(sites):
        y = (x + 1) % sites
        h[y, x] += -hopping * np.exp(1j * flux)
        h[x, y] += -hopping * np.exp(-1j * flux)
    return h


def bond_current(sites: int = 4, bond: int = 0, hopping: float = 1.0, flux: float = 0.0) -> np.ndarray:
    """Current through bond (bond, bond+1): i t (e^{i phi} T - h.c.), T = |x+1><x|."""
    T = np.zeros((sites, sites), dtype=complex)
    T[(bond + 1) % sites, bond] = 1.0
    Tphi = hopping * np.exp(1j * flux) * T
    return 1j * (Tphi - Tphi.conj().T)
