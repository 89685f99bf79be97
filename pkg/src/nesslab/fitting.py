"""Finite-size extrapolation in 1/L."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DegenerateFitError(ValueError):
    pass


@dataclass(frozen=True)
class Extrapolation:
    limit: float
    rate: float
    max_residual: float
    residuals: tuple[float, ...]


def extrapolate(L, values) -> Extrapolation:
    """Least-squares fit of ``value = limit + rate / L``.

    Needs at least three points with strictly increasing L.
    """
    L = np.asarray(L, dtype=float).ravel()
    y = np.asarray(values, dtype=float).ravel()
    if L.shape != y.shape:
        raise DegenerateFitError("L and values differ in length")
    if L.size < 3:
        raise DegenerateFitError(f"need at least 3 points, got {L.size}")
    if np.any(np.diff(L) <= 0):
        raise DegenerateFitError("L must be strictly increasing")
    if not (np.all(np.isfinite(L)) and np.all(np.isfinite(y))) or np.any(L <= 0):
        raise DegenerateFitError("non-finite or non-positive input")
    A = np.column_stack([np.ones_like(L), 1.0 / L])
    coef, _, rank, _ = np.linalg.lstsq(A, y, rcond=None)
    if rank < 2:
        raise DegenerateFitError("design matrix is rank deficient")
    res = y - A @ coef
    return Extrapolation(
        limit=float(coef[0]),
        rate=float(coef[1]),
        max_residual=float(np.max(np.abs(res))),
        residuals=tuple(float(r) for r in res),
    )
