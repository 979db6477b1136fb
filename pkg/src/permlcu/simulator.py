"""Dense unitary simulation used to certify block encodings."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .circuit import MCXGate, RyGate, flatten, validate
from .errors import DimensionError, ResourceError, StructureError

MAX_QUBITS = 14


def _mask_value(controls):
    mask = 0
    value = 0
    for t in controls:
        mask |= 1 << t.qubit
        if t.positive:
            value |= 1 << t.qubit
    return mask, value


def apply_circuit(c, U, backend=None):
    """Left-multiply ``U`` (rows indexed by basis state) by the circuit, in place."""
    for g in flatten(c).gates:
        mask, value = _mask_value(g.controls)
        if isinstance(g, MCXGate):
            kernels.apply_mcx(U, g.target, mask, value, backend=backend)
        elif isinstance(g, RyGate):
            kernels.apply_ry(U, g.target, mask, value, g.angle, backend=backend)
        else:
            raise StructureError(f"cannot simulate {type(g).__name__}")
    return U


def unitary_of(c, backend=None):
    if c.n_qubits > MAX_QUBITS:
        raise ResourceError(f"{c.n_qubits} qubits exceeds the dense simulation cap of {MAX_QUBITS}")
    if not validate(c):
        raise StructureError("cannot simulate an invalid circuit")
    U = np.eye(1 << c.n_qubits)
    return apply_circuit(c, U, backend=backend)


def encoded_block(U, n_system):
    """The ancilla-|0> block: rows/cols ``0 .. 2**n_system - 1``."""
    U = np.asarray(U)
    dim = U.shape[0]
    if U.shape != (dim, dim) or dim & (dim - 1) or dim < (1 << n_system):
        raise DimensionError(f"cannot take a {1 << n_system}-dim block of a {U.shape} matrix")
    k = 1 << n_system
    return U[:k, :k]


def orthogonality_defect(U):
    return float(np.abs(U.T @ U - np.eye(U.shape[0])).max())


@dataclass(frozen=True)
class VerificationReport:
    max_deviation: float
    orthogonality_defect: float
    tol: float
    passed: bool
    n_qubits: int
    system_qubits: int

    def to_dict(self):
        return {
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "orthogonality_defect": self.orthogonality_defect,
            "tol": self.tol,
            "n_qubits": self.n_qubits,
            "system_qubits": self.system_qubits,
        }

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}: max |block - S| = {self.max_deviation:.3e} (tol {self.tol:g}), "
            f"orthogonality defect {self.orthogonality_defect:.3e}, "
            f"{self.n_qubits} qubits ({self.system_qubits} system)"
        )


def verify_block_encoding(be, S, tol=1e-10, backend=None):
    S = np.asarray(S, dtype=float)
    k = 1 << be.system_qubits
    if S.shape != (k, k):
        raise DimensionError(f"matrix is {S.shape}, block encoding has a {k}x{k} block")
    U = unitary_of(be.circuit, backend=backend)
    dev = float(np.abs(encoded_block(U, be.system_qubits) - S).max())
    ortho = orthogonality_defect(U)
    ok = dev <= tol and ortho <= max(tol, 1e-12)
    return VerificationReport(dev, ortho, float(tol), bool(ok), be.circuit.n_qubits, be.system_qubits)
