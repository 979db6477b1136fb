"""Hot inner loops with a numba path and a pure-numpy fallback.

The backend is picked once at import time: numba when it imports cleanly and
``PERMLCU_DISABLE_NUMBA`` is unset (or ``0``), numpy otherwise. Every public
kernel also accepts ``backend=`` so tests and the benchmark can pin one side.

Kernels mutate their array arguments in place and return nothing unless noted.
"""

import os

import numpy as np

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAS_NUMBA = False


def _env_disabled():
    return os.environ.get("PERMLCU_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")


BACKEND = "numba" if HAS_NUMBA and not _env_disabled() else "numpy"


def _njit(fn):
    if not HAS_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# --- MCX / Ry row updates --------------------------------------------------
# Applying a gate G to every column of U is the row operation U <- G @ U.


def _mcx_loop(U, target, mask, value):
    bit = 1 << target
    dim = U.shape[0]
    ncol = U.shape[1]
    for i in range(dim):
        if (i & bit) == 0 and (i & mask) == value:
            j = i | bit
            for col in range(ncol):
                tmp = U[i, col]
                U[i, col] = U[j, col]
                U[j, col] = tmp


def _ry_loop(U, target, mask, value, c, s):
    bit = 1 << target
    dim = U.shape[0]
    ncol = U.shape[1]
    for i in range(dim):
        if (i & bit) == 0 and (i & mask) == value:
            j = i | bit
            for col in range(ncol):
                a = U[i, col]
                b = U[j, col]
                U[i, col] = c * a - s * b
                U[j, col] = s * a + c * b


def _pair_rows(dim, target, mask, value):
    idx = np.arange(dim)
    bit = 1 << target
    lo = idx[((idx & bit) == 0) & ((idx & mask) == value)]
    return lo, lo | bit


def _mcx_numpy(U, target, mask, value):
    lo, hi = _pair_rows(U.shape[0], target, mask, value)
    U[np.concatenate((lo, hi))] = U[np.concatenate((hi, lo))]


def _ry_numpy(U, target, mask, value, c, s):
    lo, hi = _pair_rows(U.shape[0], target, mask, value)
    a = U[lo].copy()
    b = U[hi]
    U[lo] = c * a - s * b
    U[hi] = s * a + c * b


# --- Sinkhorn sweeps ---------------------------------------------------------


def _sinkhorn_loop(M, d_left, d_right, tol, max_iters):
    n = M.shape[0]
    dev = _sum_deviation_loop(M)
    it = 0
    while dev > tol and it < max_iters:
        for i in range(n):
            s = 0.0
            for j in range(n):
                s += M[i, j]
            d_left[i] /= s
            for j in range(n):
                M[i, j] /= s
        for j in range(n):
            s = 0.0
            for i in range(n):
                s += M[i, j]
            d_right[j] /= s
            for i in range(n):
                M[i, j] /= s
        it += 1
        dev = _sum_deviation_loop(M)
    return it, dev


def _sum_deviation_loop(M):
    n = M.shape[0]
    dev = 0.0
    for i in range(n):
        r = 0.0
        c = 0.0
        for j in range(n):
            r += M[i, j]
            c += M[j, i]
        dev = max(dev, abs(r - 1.0), abs(c - 1.0))
    return dev


def _sum_deviation_numpy(M):
    return float(max(np.abs(M.sum(axis=1) - 1.0).max(), np.abs(M.sum(axis=0) - 1.0).max()))


def _sinkhorn_numpy(M, d_left, d_right, tol, max_iters):
    dev = _sum_deviation_numpy(M)
    it = 0
    while dev > tol and it < max_iters:
        r = M.sum(axis=1)
        d_left /= r
        M /= r[:, None]
        c = M.sum(axis=0)
        d_right /= c
        M /= c[None, :]
        it += 1
        dev = _sum_deviation_numpy(M)
    return it, dev


# --- Augmenting-path bipartite matching --------------------------------------


def _matching_loop(support, forced_row, forced_col):
    """Kuhn's augmenting paths; rows and candidate columns in increasing order.

    Returns ``row_of_col`` with -1 entries when no perfect matching exists.
    """
    n = support.shape[0]
    row_of_col = np.full(n, -1, np.int64)
    col_of_row = np.full(n, -1, np.int64)
    if forced_row >= 0:
        row_of_col[forced_col] = forced_row
        col_of_row[forced_row] = forced_col
    visited = np.zeros(n, np.bool_)
    stack_row = np.empty(n + 1, np.int64)
    stack_next = np.empty(n + 1, np.int64)
    stack_col = np.empty(n + 1, np.int64)
    for r in range(n):
        if col_of_row[r] >= 0:
            continue
        visited[:] = False
        if forced_row >= 0:
            visited[forced_col] = True
        depth = 0
        stack_row[0] = r
        stack_next[0] = 0
        found = False
        while depth >= 0:
            cr = stack_row[depth]
            c = stack_next[depth]
            advanced = False
            while c < n:
                if support[cr, c] and not visited[c]:
                    visited[c] = True
                    stack_next[depth] = c + 1
                    stack_col[depth] = c
                    if row_of_col[c] < 0:
                        found = True
                    else:
                        depth += 1
                        stack_row[depth] = row_of_col[c]
                        stack_next[depth] = 0
                    advanced = True
                    break
                c += 1
            if found:
                break
            if not advanced:
                depth -= 1
        if not found:
            row_of_col[:] = -1
            return row_of_col
        for d in range(depth, -1, -1):
            row_of_col[stack_col[d]] = stack_row[d]
            col_of_row[stack_row[d]] = stack_col[d]
    return row_of_col


_IMPLS = {
    "numpy": {
        "mcx": _mcx_numpy,
        "ry": _ry_numpy,
        "sinkhorn": _sinkhorn_numpy,
        "matching": _matching_loop,
    },
}
if HAS_NUMBA:
    _IMPLS["numba"] = {
        "mcx": _njit(_mcx_loop),
        "ry": _njit(_ry_loop),
        "sinkhorn": _njit(_sinkhorn_loop),
        "matching": _njit(_matching_loop),
    }
    # the sinkhorn kernel calls the deviation helper; it must be jitted too
    _sum_deviation_loop = _njit(_sum_deviation_loop)


def available_backends():
    return tuple(_IMPLS)


def _impl(name, backend):
    backend = backend or BACKEND
    try:
        return _IMPLS[backend][name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {backend!r}") from None


def apply_mcx(U, target, mask, value, backend=None):
    """Flip bit ``target`` of every row index ``i`` with ``i & mask == value``."""
    _impl("mcx", backend)(U, int(target), int(mask), int(value))


def apply_ry(U, target, mask, value, angle, backend=None):
    c = float(np.cos(angle / 2.0))
    s = float(np.sin(angle / 2.0))
    _impl("ry", backend)(U, int(target), int(mask), int(value), c, s)


def sinkhorn_sweeps(M, d_left, d_right, tol, max_iters, backend=None):
    """Alternate row then column normalisation in place.

    Returns ``(iterations, final_deviation)``.
    """
    it, dev = _impl("sinkhorn", backend)(M, d_left, d_right, float(tol), int(max_iters))
    return int(it), float(dev)


def perfect_matching_rows(support, forced_row=-1, forced_col=-1, backend=None):
    support = np.ascontiguousarray(support, dtype=np.bool_)
    return _impl("matching", backend)(support, int(forced_row), int(forced_col))
