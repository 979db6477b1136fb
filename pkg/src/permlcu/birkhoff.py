"""Greedy Birkhoff-von Neumann decomposition.

Each step forces the smallest surviving entry of the residual into a
perfect matching of the residual's support, takes the weight as the minimum
residual value over the matched cells and subtracts. The forced cell is the
minimum, so it drops to exactly zero and no entry goes negative.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DomainError, InfeasibleError, NumericalDegradationError
from .matrix import _square, is_doubly_stochastic
from .permutation import Permutation, matrix_of

DEFAULT_TOL = 1e-12


def marcus_ree_bound(n):
    return (n - 1) ** 2 + 1


@dataclass(frozen=True)
class Term:
    weight: float
    perm: Permutation


@dataclass(frozen=True)
class BirkhoffDecomposition:
    n: int
    terms: tuple = ()
    residual_norm: float = 0.0
    history: tuple = field(default=(), compare=False, repr=False)

    @property
    def k(self):
        return len(self.terms)

    @property
    def weights(self):
        return np.array([t.weight for t in self.terms], dtype=float)

    @property
    def perms(self):
        return [t.perm for t in self.terms]

    def to_dict(self):
        return {
            "n": self.n,
            "residual": float(self.residual_norm),
            "terms": [{"w": float(t.weight), "perm": list(t.perm.map)} for t in self.terms],
        }

    @classmethod
    def from_dict(cls, data):
        n = int(data["n"])
        terms = []
        for item in data["terms"]:
            perm = Permutation(tuple(item["perm"]))
            if len(perm) != n:
                raise DomainError(f"term permutation has length {len(perm)}, expected {n}")
            w = float(item["w"])
            if w <= 0:
                raise DomainError("term weights must be positive")
            terms.append(Term(w, perm))
        return cls(n, tuple(terms), float(data.get("residual", 0.0)))


def perfect_matching(support, forced_edge=None, backend=None):
    """Perfect matching of a boolean support, returned as a Permutation.

    The result ``p`` satisfies ``support[p(j), j]`` for every column ``j``;
    with ``forced_edge=(r, c)`` it also has ``p(c) = r``.
    """
    support = np.asarray(support, dtype=bool)
    n = support.shape[0]
    if support.shape != (n, n):
        raise DomainError("support must be square")
    fr, fc = (-1, -1)
    if forced_edge is not None:
        fr, fc = (int(x) for x in forced_edge)
        if not support[fr, fc]:
            raise DomainError(f"forced edge {forced_edge} is not in the support")
    row_of_col = kernels.perfect_matching_rows(support, fr, fc, backend=backend)
    if n and row_of_col.min() < 0:
        raise InfeasibleError("support admits no perfect matching")
    return Permutation(tuple(int(r) for r in row_of_col))


def birkhoff_decompose(S, k_max=None, tol=DEFAULT_TOL, backend=None, record_history=False):
    """Decompose ``S`` into ``sum_i w_i P_i``.

    Stops when the Frobenius norm of the residual is ``<= tol`` or after
    ``k_max`` terms. Without an explicit ``k_max`` the Marcus-Ree bound is
    used, and running past it with residual above ``tol`` raises
    :class:`NumericalDegradationError`; an explicit ``k_max`` returns the
    partial decomposition instead.
    """
    S = _square(S)
    if not is_doubly_stochastic(S, 1e-8):
        raise DomainError("input is not doubly stochastic within 1e-8")
    n = S.shape[0]
    strict = k_max is None
    if k_max is None:
        k_max = marcus_ree_bound(n)
    if k_max < 1:
        raise DomainError("k_max must be positive")

    R = S.copy()
    terms = []
    history = [float(np.linalg.norm(R))] if record_history else []
    residual = float(np.linalg.norm(R))
    cols = np.arange(n)
    while residual > tol and len(terms) < k_max:
        support = R >= tol
        if not support.any():
            break
        masked = np.where(support, R, np.inf)
        r, c = np.unravel_index(int(np.argmin(masked)), R.shape)
        try:
            perm = perfect_matching(support, (r, c), backend=backend)
        except InfeasibleError:
            partial = BirkhoffDecomposition(n, tuple(terms), residual)
            raise NumericalDegradationError(
                f"no perfect matching in the residual support after {len(terms)} terms "
                f"(residual {residual:.3e})",
                partial=partial,
            ) from None
        rows = np.asarray(perm.map)
        w = float(R[rows, cols].min())
        R[rows, cols] -= w
        R[r, c] = 0.0
        terms.append(Term(w, perm))
        residual = float(np.linalg.norm(R))
        if record_history:
            history.append(residual)

    d = BirkhoffDecomposition(n, tuple(terms), residual, tuple(history))
    if strict and residual > tol:
        raise NumericalDegradationError(
            f"Marcus-Ree bound of {k_max} terms exhausted with residual {residual:.3e}", partial=d
        )
    return d


def reconstruct(d):
    out = np.zeros((d.n, d.n))
    cols = np.arange(d.n)
    for t in d.terms:
        out[np.asarray(t.perm.map, dtype=int), cols] += t.weight
    return out


def truncate(d, keep=None, min_weight=None):
    """Keep only the heaviest terms.

    Exactly one of ``keep`` (term count) or ``min_weight`` (keep ``w >=
    min_weight``) must be given. Ties keep the earlier term. Returns
    ``(truncated, error_bound)`` with ``error_bound`` the dropped mass, an
    upper bound on the entrywise deviation of the reconstruction.
    """
    if (keep is None) == (min_weight is None):
        raise DomainError("give exactly one of keep or min_weight")
    order = sorted(range(d.k), key=lambda i: -d.terms[i].weight)
    if keep is not None:
        if keep < 1:
            raise DomainError("keep must be a positive integer")
        chosen = set(order[:keep])
    else:
        chosen = {i for i in order if d.terms[i].weight >= min_weight}
    kept = tuple(t for i, t in enumerate(d.terms) if i in chosen)
    dropped = sum(t.weight for i, t in enumerate(d.terms) if i not in chosen)
    return BirkhoffDecomposition(d.n, kept, d.residual_norm), float(dropped)


def random_doubly_stochastic(n, n_perms, rng):
    """Random convex combination of ``n_perms`` random permutation matrices."""
    w = rng.random(n_perms) + 1e-3
    w /= w.sum()
    S = np.zeros((n, n))
    for wi in w:
        S += wi * matrix_of(Permutation(tuple(rng.permutation(n))))
    return S
