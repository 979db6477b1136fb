"""End-to-end orchestration shared by the CLI and the acceptance suite."""

from dataclasses import dataclass, field

import numpy as np

from .birkhoff import birkhoff_decompose
from .errors import DomainError
from .matrix import (
    DEFAULT_MAX_ITERS,
    DEFAULT_TOL,
    circulant_scale,
    embed_row_stochastic,
    is_circulant,
    is_doubly_stochastic,
    is_row_stochastic,
    sinkhorn_scale,
)
from .optimizer import DEFAULT_PIPELINE, optimize
from .simulator import MAX_QUBITS, verify_block_encoding
from .synth import VERIFY_TOL, BlockEncoding, lcu_block_encoding

ROUTES = ("sinkhorn", "embed", "circulant", "auto")


@dataclass
class Scaled:
    """A doubly stochastic matrix plus how it relates to the input."""

    matrix: np.ndarray
    route: str
    scale: float = 1.0
    metadata: dict = field(default_factory=dict)
    note: str = ""

    def to_dict(self):
        return {
            "route": self.route,
            "scale": self.scale,
            "note": self.note,
            "metadata": self.metadata,
            "matrix": [list(r) for r in self.matrix],
        }


def pick_route(A, tol=DEFAULT_TOL):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"matrix must be square, got shape {A.shape}")
    if is_doubly_stochastic(A, tol):
        return "passthrough"
    if A.min() >= 0 and is_circulant(A) and A[0].sum() > 0:
        return "circulant"
    if is_row_stochastic(A):
        return "embed"
    if np.all(A > 0):
        return "sinkhorn"
    raise DomainError("no applicable route to a doubly stochastic matrix "
                      "(not doubly stochastic, circulant, row-stochastic or strictly positive)")


def to_doubly_stochastic(A, mode="auto", tol=DEFAULT_TOL, max_iters=DEFAULT_MAX_ITERS, backend=None):
    A = np.asarray(A, dtype=float)
    route = pick_route(A, tol) if mode == "auto" else mode
    if route == "passthrough":
        return Scaled(A.copy(), route, note="already doubly stochastic")
    if route == "circulant":
        S, c = circulant_scale(A)
        return Scaled(S, route, c, {"c": c}, note="input = c * matrix")
    if route == "embed":
        S, alpha, s = embed_row_stochastic(A)
        return Scaled(S, route, alpha, {"alpha": alpha, "s": list(s)},
                      note="input = alpha * top-left block of matrix")
    if route == "sinkhorn":
        res = sinkhorn_scale(A, tol, max_iters, backend=backend)
        meta = {
            "d_left": list(res.d_left),
            "d_right": list(res.d_right),
            "iterations": res.iterations,
            "final_deviation": res.final_deviation,
        }
        return Scaled(res.scaled, route, 1.0, meta, note="matrix = diag(d_left) @ input @ diag(d_right)")
    raise DomainError(f"unknown scaling mode {mode!r}; choose from {', '.join(ROUTES)}")


def pad_to_power_of_two(S):
    """Direct sum with an identity up to the next power-of-two size."""
    n = S.shape[0]
    size = 1 << max(0, (n - 1).bit_length())
    if size == n:
        return S
    out = np.eye(size)
    out[:n, :n] = S
    return out


@dataclass
class CompileResult:
    scaled: Scaled
    target: np.ndarray
    decomposition: object
    encoding: BlockEncoding
    raw_circuit: object
    opt_stats: dict
    verification: object = None

    def report(self):
        d = self.decomposition
        be = self.encoding
        out = {
            "route": self.scaled.route,
            "scale": self.scaled.scale,
            "input_dim": int(self.scaled.matrix.shape[0]),
            "target_dim": int(self.target.shape[0]),
            "k": d.k,
            "weights": [t.weight for t in d.terms],
            "residual": d.residual_norm,
            "system_qubits": be.system_qubits,
            "ancilla_qubits": be.ancilla_qubits,
            "total_qubits": be.circuit.n_qubits,
            "gates_before": self.opt_stats["gates_before"],
            "gates_after": self.opt_stats["gates_after"],
            "optimizer": self.opt_stats,
        }
        if self.verification is not None:
            out["verification"] = self.verification.to_dict()
        return out


def compile_matrix(
    A,
    mode="auto",
    k_max=None,
    tol=DEFAULT_TOL,
    max_iters=DEFAULT_MAX_ITERS,
    scheme="star",
    passes=DEFAULT_PIPELINE,
    verify_tol=VERIFY_TOL,
    backend=None,
):
    scaled = to_doubly_stochastic(A, mode, tol, max_iters, backend=backend)
    target = pad_to_power_of_two(scaled.matrix)
    d = birkhoff_decompose(target, k_max=k_max, backend=backend)
    be = lcu_block_encoding(d, scheme=scheme, tol=verify_tol)
    circuit, stats = optimize(be.circuit, passes) if passes else (be.circuit, {
        "gates_before": be.circuit.leaf_count(), "passes": [], "rounds": 0,
        "cap_reached": False, "gates_after": be.circuit.leaf_count()})
    meta = dict(scaled.metadata)
    encoded = BlockEncoding(circuit, be.system_qubits, be.ancilla_qubits, be.k_terms,
                           scaled.scale * be.scale, meta)
    result = CompileResult(scaled, target, d, encoded, be.circuit, stats)
    if circuit.n_qubits <= MAX_QUBITS:
        expected = target * (1.0 / be.scale)
        result.verification = verify_block_encoding(encoded, expected, verify_tol, backend=backend)
    return result
