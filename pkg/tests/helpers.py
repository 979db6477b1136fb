"""Independent oracles and random generators for the test suite."""

import numpy as np

from permlcu.circuit import Circuit, ControlledBlock, ControlTerm, MCXGate, RyGate


def _active(i, controls):
    return all(((i >> t.qubit) & 1) == int(t.positive) for t in controls)


def gate_matrix(g, n, outer=()):
    """Dense matrix of one gate built entry by entry (no kernels involved)."""
    dim = 1 << n
    if isinstance(g, ControlledBlock):
        M = np.eye(dim)
        for b in g.body:
            M = gate_matrix(b, n, tuple(outer) + g.controls) @ M
        return M
    controls = tuple(outer) + g.controls
    M = np.zeros((dim, dim))
    bit = 1 << g.target
    for i in range(dim):
        if not _active(i, controls):
            M[i, i] = 1.0
            continue
        if isinstance(g, MCXGate):
            M[i ^ bit, i] = 1.0
        else:
            c, s = np.cos(g.angle / 2), np.sin(g.angle / 2)
            if i & bit:
                M[i, i] = c
                M[i ^ bit, i] = -s
            else:
                M[i, i] = c
                M[i ^ bit, i] = s
    return M


def oracle_unitary(circuit):
    U = np.eye(1 << circuit.n_qubits)
    for g in circuit.gates:
        U = gate_matrix(g, circuit.n_qubits) @ U
    return U


def random_leaf(rng, n, allow_ry=True, max_controls=None):
    target = int(rng.integers(n))
    others = [q for q in range(n) if q != target]
    k = int(rng.integers(0, (len(others) if max_controls is None else min(max_controls, len(others))) + 1))
    qs = rng.choice(others, size=k, replace=False) if k else []
    controls = [ControlTerm(int(q), bool(rng.integers(2))) for q in qs]
    if allow_ry and rng.random() < 0.25:
        return RyGate(target, float(rng.uniform(-np.pi, np.pi)), controls)
    return MCXGate(target, controls)


def random_circuit(rng, n, n_gates, allow_ry=True, blocks=False):
    gates = [random_leaf(rng, n, allow_ry) for _ in range(n_gates)]
    if blocks and n >= 2 and gates:
        q = int(rng.integers(n))
        ctl = ControlTerm(q, bool(rng.integers(2)))
        body = [g for g in gates[: n_gates // 2] if q not in g.qubits]
        rest = gates[n_gates // 2 :]
        gates = ([ControlledBlock([ctl], body)] if body else []) + rest
    return Circuit(n, gates)


def corpus(rng, count=60, max_qubits=6, allow_ry=True):
    out = []
    for i in range(count):
        n = int(rng.integers(1, max_qubits + 1))
        out.append(random_circuit(rng, n, int(rng.integers(0, 16)), allow_ry, blocks=i % 3 == 0))
    return out
