"""Permutations in one-line notation, cycles and transpositions.

Conventions:

* ``Permutation.map[j]`` is the image ``p(j)``.
* ``compose(t, s)`` is ``t o s``: apply ``s`` first, so ``i -> t(s(i))``.
* A cycle ``(a0 a1 ... am)`` sends ``a0 -> a1 -> ... -> am -> a0``.
* Lists of transpositions are products read right to left: the last item
  acts first.
* ``matrix_of(p)`` has ``M[p(j), j] = 1`` so ``M @ e_j = e_{p(j)}``.
"""

import re
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, RangeError


@dataclass(frozen=True)
class Permutation:
    map: tuple

    def __post_init__(self):
        m = tuple(int(x) for x in self.map)
        if sorted(m) != list(range(len(m))):
            raise DomainError(f"{list(m)} is not a permutation of 0..{len(m) - 1}")
        object.__setattr__(self, "map", m)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)))

    def __len__(self):
        return len(self.map)

    def __getitem__(self, i):
        return self.map[i]

    def __iter__(self):
        return iter(self.map)

    def __mul__(self, other):
        return compose(self, other)

    def is_identity(self):
        return all(i == v for i, v in enumerate(self.map))

    def __str__(self):
        return format_cycles(self)


@dataclass(frozen=True)
class Cycle:
    elements: tuple

    def __post_init__(self):
        e = tuple(int(x) for x in self.elements)
        if len(e) < 2:
            raise DomainError("a cycle needs at least two elements")
        if len(set(e)) != len(e):
            raise DomainError(f"cycle elements must be distinct: {e}")
        if min(e) < 0:
            raise RangeError("cycle elements must be non-negative")
        k = e.index(min(e))
        object.__setattr__(self, "elements", e[k:] + e[:k])

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __str__(self):
        return "(" + " ".join(map(str, self.elements)) + ")"


@dataclass(frozen=True, order=True)
class Transposition:
    a: int
    b: int

    def __post_init__(self):
        a, b = int(self.a), int(self.b)
        if a == b:
            raise DomainError("a transposition swaps two distinct points")
        if a > b:
            a, b = b, a
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __str__(self):
        return f"({self.a} {self.b})"


def compose(t, s):
    if len(t) != len(s):
        raise DimensionError(f"cannot compose permutations of length {len(t)} and {len(s)}")
    return Permutation(tuple(t.map[i] for i in s.map))


def inverse(p):
    inv = [0] * len(p)
    for i, v in enumerate(p.map):
        inv[v] = i
    return Permutation(tuple(inv))


def to_cycles(p):
    seen = [False] * len(p)
    cycles = []
    for start in range(len(p)):
        if seen[start] or p.map[start] == start:
            seen[start] = True
            continue
        orbit = []
        j = start
        while not seen[j]:
            seen[j] = True
            orbit.append(j)
            j = p.map[j]
        cycles.append(Cycle(tuple(orbit)))
    return cycles


def from_cycles(cycles, n):
    m = list(range(n))
    used = set()
    for c in cycles:
        c = c if isinstance(c, Cycle) else Cycle(tuple(c))
        for x in c.elements:
            if x >= n:
                raise RangeError(f"cycle element {x} out of range for n={n}")
            if x in used:
                raise DomainError(f"cycles are not disjoint (element {x} repeats)")
            used.add(x)
        e = c.elements
        for i, x in enumerate(e):
            m[x] = e[(i + 1) % len(e)]
    return Permutation(tuple(m))


def cycle_to_transpositions(c, scheme="star"):
    """Write a cycle as a right-to-left product of transpositions.

    ``star``:  (a0..am) = (a0 am)(a0 a_{m-1})...(a0 a1)
    ``chain``: (a0..am) = (a0 a1)(a1 a2)...(a_{m-1} am)
    """
    e = c.elements if isinstance(c, Cycle) else Cycle(tuple(c)).elements
    if scheme == "star":
        return [Transposition(e[0], e[i]) for i in range(len(e) - 1, 0, -1)]
    if scheme == "chain":
        return [Transposition(e[i], e[i + 1]) for i in range(len(e) - 1)]
    raise ValueError(f"unknown transposition scheme {scheme!r}")


def transposition_permutation(tr, n):
    m = list(range(n))
    m[tr.a], m[tr.b] = tr.b, tr.a
    return Permutation(tuple(m))


def product_of_transpositions(transpositions, n):
    """Evaluate a right-to-left product of transpositions."""
    p = Permutation.identity(n)
    for tr in transpositions:
        p = compose(p, transposition_permutation(tr, n))
    return p


def to_transpositions(p, scheme="star"):
    out = []
    for c in to_cycles(p):
        out.extend(cycle_to_transpositions(c, scheme))
    return out


def matrix_of(p):
    n = len(p)
    M = np.zeros((n, n))
    M[list(p.map), np.arange(n)] = 1.0
    return M


def permutation_from_matrix(M, tol=1e-9):
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if M.shape != (n, n) or not np.allclose(M, np.round(M), atol=tol):
        raise DomainError("not a permutation matrix")
    rows = np.argmax(M, axis=0)
    p = Permutation(tuple(int(r) for r in rows))
    if np.abs(matrix_of(p) - M).max() > tol:
        raise DomainError("not a permutation matrix")
    return p


def format_cycles(p):
    cycles = to_cycles(p) if isinstance(p, Permutation) else p
    if not cycles:
        return "()"
    return "".join(str(c) for c in cycles)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text, n):
    """Parse ``"(0 1 2)(3)"``; fixed points may be written or omitted."""
    text = text.strip()
    if _CYCLE_RE.sub("", text).strip():
        raise DomainError(f"cannot parse cycle notation {text!r}")
    cycles = []
    fixed = set()
    for body in _CYCLE_RE.findall(text):
        items = body.replace(",", " ").split()
        try:
            elements = [int(x) for x in items]
        except ValueError:
            raise DomainError(f"non-integer element in {body!r}") from None
        if len(elements) == 1:
            if not 0 <= elements[0] < n:
                raise RangeError(f"element {elements[0]} out of range for n={n}")
            fixed.add(elements[0])
            continue
        if elements:
            if fixed.intersection(elements):
                raise DomainError(f"element listed as fixed and moved in {text!r}")
            cycles.append(Cycle(tuple(elements)))
    return from_cycles(cycles, n)
