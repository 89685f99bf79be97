"""Elementary-excitation curves, Landau critical velocity and sound speed."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .girardeau import CONVENTIONS, fermi_momentum
from .kinematics import SystemGeometry


def type1_dispersion(k, k_F: float, convention: str = "m-half"):
    """Particle excitation k_F -> k_F + |k| above the Fermi sea.

    ``m-one``: k**2/2 + k_F*|k|. ``m-half``: k**2 + 2*k_F*|k|, the energy
    difference (k_F + |k|)**2 - k_F**2 with single-particle energy k**2.
    """
    k = np.asarray(k, dtype=float)
    if convention == "m-one":
        out = k * k / 2 + k_F * np.abs(k)
    elif convention == "m-half":
        out = k * k + 2 * k_F * np.abs(k)
    else:
        raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")
    return out if out.ndim else float(out)


def type1_slope(k_F: float, convention: str = "m-half") -> float:
    """Limit of eps(k)/|k| as k -> 0 for the type-1 curve."""
    if convention == "m-one":
        return k_F
    if convention == "m-half":
        return 2 * k_F
    raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


def landau_velocity(k, eps, small_k_slope: float | None = None) -> float:
    """v_c = inf over the curve of eps(k)/|k|, including the k -> 0 limit.

    Samples with k == 0 are dropped; ``small_k_slope`` supplies the analytic
    lim eps/|k| at the origin, which a finite sample can only approach.
    """
    k = np.asarray(k, dtype=float).ravel()
    eps = np.asarray(eps, dtype=float).ravel()
    if k.shape != eps.shape:
        raise ValueError("k and eps must have the same shape")
    keep = k != 0
    if not keep.any() and small_k_slope is None:
        raise ValueError("empty dispersion curve")
    candidates = []
    if keep.any():
        candidates.append(float(np.min(eps[keep] / np.abs(k[keep]))))
    if small_k_slope is not None:
        candidates.append(float(small_k_slope))
    return min(candidates)


def type1_landau_velocity(k_F: float, convention: str = "m-half") -> float:
    # eps/|k| = |k| + 2 k_F (m-half) or |k|/2 + k_F (m-one): increasing in |k|
    return type1_slope(k_F, convention)


def ground_energy_coefficient(N: int, mass: float = 0.5) -> float:
    """C in E0(N, L) = C / L**2 for the odd-N Fermi sea.

    sum over the sea of (2 pi p / L)**2 is pi**2 N (N**2 - 1) / (3 L**2); the
    kinetic prefactor 1/(2m) is 1 for m = 1/2.
    """
    if N % 2 == 0:
        raise ValueError("odd N required")
    return math.pi**2 * N * (N * N - 1) / 3 / (2 * mass)


def pressure(C: float, L: float) -> float:
    """P = -dE0/dL for E0 = C/L**2."""
    return 2 * C / L**3


def stiffness(C: float, L: float) -> float:
    """-L dP/dL for E0 = C/L**2, i.e. 6 C / L**3."""
    return 6 * C / L**3


@dataclass(frozen=True)
class SoundReport:
    N: int
    L: float
    rho: float
    c_s_dispersion: float
    c_s_dispersion_finite: float
    c_s_thermo: float
    stiffness: float
    free_boson_stiffness: float
    free_boson_c_s: float


def sound_speed_and_compressibility(geometry: SystemGeometry) -> SoundReport:
    """Sound speed from the excitation slope and from the compressibility.

    The dispersion route uses the type-1 slope k_F/m, with k_F = pi*rho
    (``c_s_dispersion``) or the finite-size pi*(N-1)/L. The thermodynamic
    route is c_s = sqrt(-(L/(m rho)) dP/dL) evaluated on the closed-form
    E0(N, L). The free Bose comparison applies the same stiffness functional
    to E0 = N/L**2.
    """
    N, L, m = geometry.N, geometry.L, geometry.mass
    rho = geometry.rho
    C = ground_energy_coefficient(N, m)
    stiff = stiffness(C, L)
    free = stiffness(float(N), L)
    return SoundReport(
        N=N,
        L=L,
        rho=rho,
        c_s_dispersion=math.pi * rho / m,
        c_s_dispersion_finite=fermi_momentum(geometry) / m,
        c_s_thermo=math.sqrt(stiff / (m * rho)),
        stiffness=stiff,
        free_boson_stiffness=free,
        free_boson_c_s=math.sqrt(free / (m * rho)),
    )
