"""Matrix files, deterministic JSON and the OpenQASM 3 subset."""

import json
import math
import re
from pathlib import Path

import numpy as np
import scipy.io

from .circuit import Circuit, ControlTerm, MCXGate, RyGate, flatten
from .errors import DomainError, StructureError

# --- matrices ----------------------------------------------------------------


def read_matrix(path):
    """Read a dense real matrix from ``.csv`` or Matrix Market ``.mtx``."""
    path = Path(path)
    suffix = path.suffix.lower()
    try:
        if suffix == ".mtx":
            M = scipy.io.mmread(str(path))
            M = M.toarray() if hasattr(M, "toarray") else np.asarray(M)
        elif suffix == ".csv":
            M = np.loadtxt(path, delimiter=",", ndmin=2, dtype=float)
        else:
            raise DomainError(f"unsupported matrix file type {suffix!r} (use .csv or .mtx)")
    except (OSError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"cannot read matrix from {path}: {exc}") from None
    M = np.asarray(M, dtype=float)
    if np.iscomplexobj(M) or not np.all(np.isfinite(M)):
        raise DomainError(f"{path}: entries must be finite reals")
    return M


def write_matrix(path, M):
    path = Path(path)
    if path.suffix.lower() == ".mtx":
        scipy.io.mmwrite(str(path), np.asarray(M, dtype=float), field="real", symmetry="general")
    else:
        with open(path, "w") as fh:
            for row in np.asarray(M, dtype=float):
                fh.write(",".join(fmt_float(x) for x in row) + "\n")


# --- JSON ----------------------------------------------------------------------
# json.dumps prints floats with repr; output here needs a fixed 17-digit form.


def fmt_float(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError("JSON output cannot hold non-finite floats")
    s = format(x, ".17g")
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return {True: "true", False: "false", None: "null"}[obj]
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_encode(str(k), indent, level + 1)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj, indent=2):
    """Deterministic JSON: insertion-ordered keys, floats as 17 significant digits."""
    return _encode(obj, indent, 0) + "\n"


def write_json(path, obj):
    Path(path).write_text(dumps(obj))


# --- OpenQASM 3 ----------------------------------------------------------------


def _modifiers(controls):
    return "".join("ctrl @ " if t.positive else "negctrl @ " for t in controls)


def to_qasm(c):
    """Emit OpenQASM 3; blocks are flattened first."""
    lines = ["OPENQASM 3.0;", 'include "stdgates.inc";', f"qubit[{c.n_qubits}] q;"]
    for g in flatten(c).gates:
        args = ", ".join(f"q[{t.qubit}]" for t in g.controls)
        args = (args + ", " if args else "") + f"q[{g.target}]"
        if isinstance(g, MCXGate):
            lines.append(f"{_modifiers(g.controls)}x {args};")
        elif isinstance(g, RyGate):
            lines.append(f"{_modifiers(g.controls)}ry({fmt_float(g.angle)}) {args};")
        else:
            raise StructureError(f"cannot emit {type(g).__name__}")
    return "\n".join(lines) + "\n"


_QREG = re.compile(r"^qubit\[(\d+)\]\s+q;$")
_GATE = re.compile(r"^((?:(?:neg)?ctrl\s*@\s*)*)(x|ry\(([^)]*)\))\s+(.+);$")


def from_qasm(text):
    """Parse exactly the subset written by :func:`to_qasm`."""
    n = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("//")[0].strip()
        if not line or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        m = _QREG.match(line)
        if m:
            n = int(m.group(1))
            continue
        m = _GATE.match(line)
        if not m or n is None:
            raise StructureError(f"line {lineno}: unsupported QASM {raw!r}")
        mods = re.findall(r"(neg)?ctrl", m.group(1))
        qubits = [int(x) for x in re.findall(r"q\[(\d+)\]", m.group(4))]
        if len(qubits) != len(mods) + 1:
            raise StructureError(f"line {lineno}: operand count does not match modifiers")
        controls = [ControlTerm(q, neg != "neg") for q, neg in zip(qubits, mods)]
        if m.group(2) == "x":
            gates.append(MCXGate(qubits[-1], controls))
        else:
            gates.append(RyGate(qubits[-1], float(m.group(3)), controls))
    if n is None:
        raise StructureError("QASM has no qubit declaration")
    return Circuit(n, gates)
