"""Lowering from permutations and weights to circuits.

A swap of basis states at Hamming distance one is a single MCX: target the
differing bit, control every other bit on its shared value. Longer swaps
walk a Gray path ``a = v0, v1, ..., vh = b`` and conjugate:

    (v0 vh) = (v0 v1)(v1 v2)...(v_{h-1} vh)...(v1 v2)(v0 v1)

which costs ``2h - 1`` single-bit swaps. The bare forward chain
``(v0 v1)(v1 v2)...(v_{h-1} vh)`` is an (h+1)-cycle, not a swap.
"""

from dataclasses import dataclass, field
from math import atan2, ceil, log2, sqrt

import numpy as np

from .circuit import Circuit, ControlledBlock, ControlTerm, MCXGate, RyGate, inverse, shift
from .errors import DomainError, RangeError
from .permutation import cycle_to_transpositions, to_cycles

VERIFY_TOL = 1e-10


def hamming(a, b):
    return bin(a ^ b).count("1")


def gray_path(a, b):
    """Basis states from ``a`` to ``b`` flipping differing bits low to high."""
    path = [a]
    v = a
    diff = a ^ b
    bit = 0
    while diff >> bit:
        if (diff >> bit) & 1:
            v ^= 1 << bit
            path.append(v)
        bit += 1
    return path


def adjacent_swap_gate(a, b, n):
    """The single MCX swapping basis states ``a`` and ``b`` (Hamming distance 1)."""
    diff = a ^ b
    if diff == 0 or diff & (diff - 1):
        raise DomainError(f"{a} and {b} are not at Hamming distance 1")
    target = diff.bit_length() - 1
    controls = [ControlTerm(q, bool((a >> q) & 1)) for q in range(n) if q != target]
    return MCXGate(target, controls)


def transposition_to_gates(a, b, n):
    """MCX gates (time order) realising the basis swap ``|a> <-> |b>``."""
    a, b = int(a), int(b)
    if a == b:
        raise DomainError("transposition needs two distinct indices")
    if not (0 <= a < 1 << n and 0 <= b < 1 << n):
        raise RangeError(f"indices {a}, {b} out of range for {n} qubits")
    path = gray_path(a, b)
    steps = [adjacent_swap_gate(path[i], path[i + 1], n) for i in range(len(path) - 1)]
    return steps + steps[-2::-1]


def _qubits_for(size):
    if size < 1 or size & (size - 1):
        raise DomainError(f"permutation length {size} is not a power of two")
    return size.bit_length() - 1


def permutation_to_circuit(p, n=None, scheme="star"):
    """Circuit whose unitary is ``matrix_of(p)``."""
    nq = _qubits_for(len(p))
    if n is not None and n != nq:
        raise DomainError(f"permutation of length {len(p)} does not act on {n} qubits")
    gates = []
    for cyc in to_cycles(p):
        # right-to-left product: the last transposition acts first
        for tr in reversed(cycle_to_transpositions(cyc, scheme)):
            gates.extend(transposition_to_gates(tr.a, tr.b, nq))
    return Circuit(nq, gates)


def ancilla_count(k):
    return 0 if k <= 1 else int(ceil(log2(k)))


def state_prep(weights, m):
    """Rotation tree taking ``|0..0>`` to ``sum_i sqrt(w_i) |i>`` on ``m`` qubits."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or len(w) > (1 << m):
        raise DomainError(f"{len(w)} weights do not fit on {m} qubits")
    if len(w) and w.min() < 0:
        raise DomainError("weights must be nonnegative")
    if abs(w.sum() - 1.0) > 1e-9:
        raise DomainError(f"weights sum to {w.sum():.12g}, expected 1")
    padded = np.zeros(1 << m)
    padded[: len(w)] = w
    gates = []
    for depth in range(m):
        q = m - 1 - depth
        for prefix in range(1 << depth):
            lo = padded[(2 * prefix) << q : (2 * prefix + 1) << q].sum()
            hi = padded[(2 * prefix + 1) << q : (2 * prefix + 2) << q].sum()
            if lo + hi <= 0.0 or hi <= 0.0:
                continue
            theta = 2.0 * atan2(sqrt(hi), sqrt(lo))
            controls = [ControlTerm(q + 1 + b, bool((prefix >> b) & 1)) for b in range(depth)]
            gates.append(RyGate(q, theta, controls))
    return Circuit(m, gates)


@dataclass(frozen=True)
class BlockEncoding:
    circuit: Circuit
    system_qubits: int
    ancilla_qubits: int
    k_terms: int
    scale: float = 1.0
    metadata: dict = field(default_factory=dict, compare=False)


def lcu_block_encoding(d, n=None, scheme="star", tol=VERIFY_TOL):
    """Prepare, select, unprepare.

    Ancillas sit above the system qubits. Term ``i`` is applied under the
    ancilla pattern ``i``; the closing stage is the inverse of the
    preparation, which is what makes the ancilla-|0> block equal
    ``sum_i w_i P_i``.
    """
    nq = _qubits_for(d.n)
    if n is not None and n != nq:
        raise DomainError(f"decomposition of size {d.n} does not act on {n} qubits")
    if d.residual_norm > tol:
        raise DomainError(f"residual {d.residual_norm:.3e} exceeds {tol:g}; refusing to encode")
    if d.k == 0:
        raise DomainError("cannot encode an empty decomposition")
    k = d.k
    m = ancilla_count(k)
    total = nq + m
    w = d.weights
    mass = float(w.sum())
    # a truncated decomposition is encoded renormalised; scale restores it
    scale = 1.0 if abs(mass - 1.0) <= 1e-9 else mass
    if m == 0:
        body = permutation_to_circuit(d.terms[0].perm, nq, scheme)
        return BlockEncoding(Circuit(total, body.gates), nq, 0, 1, scale)

    w = w / mass
    prep = shift(state_prep(w, m), nq, total)
    select = []
    for i, term in enumerate(d.terms):
        pattern = [ControlTerm(nq + b, bool((i >> b) & 1)) for b in range(m)]
        body = permutation_to_circuit(term.perm, nq, scheme)
        select.append(ControlledBlock(pattern, body.gates))
    gates = prep.gates + tuple(select) + inverse(prep).gates
    return BlockEncoding(Circuit(total, gates), nq, m, k, scale)
