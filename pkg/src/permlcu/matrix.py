"""Dense matrices and the routes to a doubly stochastic matrix.

Matrices are plain 2-D ``float64`` numpy arrays. Three conversions are
provided: Sinkhorn diagonal scaling for strictly positive input, the 2N x 2N
embedding of a row-stochastic matrix, and normalisation of a circulant.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionError, DomainError, NonConvergenceError, StructureError

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITERS = 10_000

# documented slack between the sweep tolerance and the output check
SINKHORN_CHECK_FACTOR = 10.0


def as_matrix(M):
    A = np.asarray(M, dtype=np.float64)
    if A.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {A.shape}")
    return A


def _square(M):
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"matrix must be square, got {A.shape[0]}x{A.shape[1]}")
    return A


def sum_deviation(M):
    """Largest absolute gap between a row or column sum and 1."""
    A = _square(M)
    return float(max(np.abs(A.sum(axis=1) - 1.0).max(), np.abs(A.sum(axis=0) - 1.0).max()))


def is_doubly_stochastic(M, tol=1e-12):
    A = _square(M)
    if A.size == 0:
        return False
    if A.min() < -tol:
        return False
    return sum_deviation(A) <= tol


def is_row_stochastic(M, tol=1e-12):
    A = _square(M)
    return bool(A.min() >= -tol and np.abs(A.sum(axis=1) - 1.0).max() <= tol)


@dataclass(frozen=True)
class ScalingResult:
    d_left: np.ndarray
    d_right: np.ndarray
    scaled: np.ndarray
    iterations: int
    final_deviation: float


def sinkhorn_scale(A, tol=DEFAULT_TOL, max_iters=DEFAULT_MAX_ITERS, backend=None):
    """Scale a strictly positive matrix to ``diag(d_left) @ A @ diag(d_right)``.

    Each sweep normalises all rows, then all columns; the deviation is the
    max row/column-sum error measured after the sweep. A matrix that is
    already within ``tol`` returns after zero sweeps.
    """
    A = _square(A)
    if not np.all(A > 0):
        raise DomainError("sinkhorn_scale needs strictly positive entries")
    if tol <= 0 or max_iters < 1:
        raise DomainError("tol must be positive and max_iters >= 1")
    n = A.shape[0]
    M = A.copy()
    d_left = np.ones(n)
    d_right = np.ones(n)
    iterations, dev = kernels.sinkhorn_sweeps(M, d_left, d_right, tol, max_iters, backend=backend)
    if dev > tol:
        raise NonConvergenceError(
            f"Sinkhorn did not reach tol={tol:g} after {iterations} sweeps (deviation {dev:.3e})",
            deviation=dev,
            iterations=iterations,
        )
    return ScalingResult(d_left, d_right, M, iterations, dev)


def embed_row_stochastic(T):
    """Embed a row-stochastic ``T`` into a 2N x 2N doubly stochastic matrix.

    Block layout ``[[T/a, (1 - 1/a) I], [diag(s), T.T/a]]``. The scale ``a``
    is the maximum *column* sum of ``T``, with ``s_j = 1 - colsum_j / a``.
    Taking ``a`` as the maximum row sum (as the construction is sometimes
    stated) gives ``a = 1`` for every row-stochastic input and makes ``s``
    negative whenever a column sum exceeds one.

    Returns ``(S, alpha, s)``.
    """
    T = _square(T)
    if T.min() < 0:
        raise DomainError("row-stochastic embedding needs nonnegative entries")
    if np.abs(T.sum(axis=1) - 1.0).max() > 1e-12:
        raise DomainError("input is not row-stochastic (row sums must be 1 within 1e-12)")
    n = T.shape[0]
    colsum = T.sum(axis=0)
    alpha = float(colsum.max())
    s = np.clip(1.0 - colsum / alpha, 0.0, None)
    S = np.zeros((2 * n, 2 * n))
    S[:n, :n] = T / alpha
    S[:n, n:] = (1.0 - 1.0 / alpha) * np.eye(n)
    S[n:, :n] = np.diag(s)
    S[n:, n:] = T.T / alpha
    return S, alpha, s


def is_circulant(C, tol=0.0):
    C = _square(C)
    n = C.shape[0]
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return bool(np.abs(C - C[0][idx]).max() <= tol)


def circulant_scale(C):
    """Divide a nonnegative circulant by its first-row sum; returns ``(C / c, c)``."""
    C = _square(C)
    if not is_circulant(C):
        raise StructureError("matrix is not circulant (rows must be cyclic right-shifts of row 0)")
    if C.min() < 0:
        raise DomainError("circulant scaling needs nonnegative entries")
    c = float(C[0].sum())
    if c <= 0:
        raise DomainError("circulant first-row sum must be positive")
    return C / c, c
