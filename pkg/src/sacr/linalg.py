"""Dense symmetric solves and the discrete second-difference operator."""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

from .errors import GridTooShort, NotPositiveDefinite

PIVOT_RTOL = 1e-14
SYMMETRY_RTOL = 1e-12


def cholesky_factor(A: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor of a symmetric positive definite matrix.

    Raises NotPositiveDefinite when the factorization breaks down or a
    squared pivot falls below ``1e-14 * max(diag(A))``.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if A.size == 0:
        return np.zeros((0, 0))
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    scale = max(np.max(np.abs(A)), 1.0)
    if np.max(np.abs(A - A.T)) > SYMMETRY_RTOL * scale:
        raise ValueError("matrix is not symmetric")
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from None
    dmax = np.max(np.diag(A))
    if dmax <= 0 or np.min(np.diag(L)) ** 2 < PIVOT_RTOL * dmax:
        raise NotPositiveDefinite("pivot below threshold; regularize the matrix")
    return L


def cho_solve_factor(L: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve ``L L^T X = B`` given a lower factor."""
    Y = solve_triangular(L, B, lower=True, check_finite=False)
    return solve_triangular(L.T, Y, lower=False, check_finite=False)


def cholesky_solve(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve ``A X = B`` for symmetric positive definite ``A``.

    Parameters
    ----------
    A : (n, n) array
        Symmetric positive definite matrix.
    B : (n,) or (n, k) array
        Right-hand side(s).

    Returns
    -------
    ndarray with the shape of ``B``.
    """
    B = np.asarray(B, dtype=float)
    L = cholesky_factor(A)
    if B.shape[0] != L.shape[0]:
        raise ValueError(f"right-hand side has {B.shape[0]} rows, matrix has {L.shape[0]}")
    return cho_solve_factor(L, B)


def second_difference_operator(p: int) -> np.ndarray:
    """(p-2) x p matrix whose rows hold the stencil [1, -2, 1].

    No 1/dt^2 scaling and no boundary rows; the scale is absorbed by the
    penalty parameter.
    """
    if p < 3:
        raise GridTooShort(f"second differences need p >= 3, got {p}")
    L = np.zeros((p - 2, p))
    rows = np.arange(p - 2)
    L[rows, rows] = 1.0
    L[rows, rows + 1] = -2.0
    L[rows, rows + 2] = 1.0
    return L


def apply_second_difference(v: np.ndarray) -> np.ndarray:
    """Banded product ``L @ v`` without forming L (works along axis 0)."""
    v = np.asarray(v, dtype=float)
    if v.shape[0] < 3:
        raise GridTooShort(f"second differences need p >= 3, got {v.shape[0]}")
    return v[:-2] - 2.0 * v[1:-1] + v[2:]
