"""Gate-level IR: polarity-controlled X, controlled Ry, grouped blocks.

Qubit 0 is the least significant bit of a basis index. Gates in
``Circuit.gates`` act left to right in time, so the circuit's matrix is the
product of gate matrices with the first gate rightmost.

All IR values are frozen; passes build new circuits. Control sets are stored
as tuples sorted by qubit, which makes structural equality meaningful.
"""

from dataclasses import dataclass, replace

from .errors import DomainError, StructureError


@dataclass(frozen=True, order=True)
class ControlTerm:
    qubit: int
    positive: bool = True

    def flipped(self):
        return ControlTerm(self.qubit, not self.positive)

    def __str__(self):
        return f"({self.qubit},{'+' if self.positive else '-'})"


def _controls(items):
    out = []
    for c in items:
        if isinstance(c, ControlTerm):
            out.append(c)
        else:
            q, pol = c
            if isinstance(pol, str):
                pol = pol == "+"
            out.append(ControlTerm(int(q), bool(pol)))
    return tuple(sorted(out))


@dataclass(frozen=True)
class MCXGate:
    target: int
    controls: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "controls", _controls(self.controls))

    @property
    def qubits(self):
        return {self.target} | {c.qubit for c in self.controls}

    def __str__(self):
        return f"MCX t{self.target} c{{{','.join(map(str, self.controls))}}}"


@dataclass(frozen=True)
class RyGate:
    target: int
    angle: float
    controls: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "controls", _controls(self.controls))
        object.__setattr__(self, "angle", float(self.angle))

    @property
    def qubits(self):
        return {self.target} | {c.qubit for c in self.controls}

    def __str__(self):
        return f"RY({self.angle:.6g}) t{self.target} c{{{','.join(map(str, self.controls))}}}"


@dataclass(frozen=True)
class ControlledBlock:
    controls: tuple
    body: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "controls", _controls(self.controls))
        object.__setattr__(self, "body", tuple(self.body))

    @property
    def qubits(self):
        qs = {c.qubit for c in self.controls}
        for g in self.body:
            qs |= g.qubits
        return qs


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple = ()

    def __post_init__(self):
        if self.n_qubits < 0:
            raise DomainError("n_qubits must be non-negative")
        object.__setattr__(self, "gates", tuple(self.gates))

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other):
        return Circuit(max(self.n_qubits, other.n_qubits), self.gates + other.gates)

    def leaf_count(self):
        return sum(_leaf_count(g) for g in self.gates)

    def has_blocks(self):
        return any(isinstance(g, ControlledBlock) for g in self.gates)


def _leaf_count(g):
    if isinstance(g, ControlledBlock):
        return sum(_leaf_count(b) for b in g.body)
    return 1


def with_controls(g, extra):
    """Return ``g`` with extra control terms prepended to its control set."""
    return replace(g, controls=tuple(extra) + tuple(g.controls))


def _diagnose_gate(g, n, outer, path, out):
    where = f"gate {path}"
    if isinstance(g, ControlledBlock):
        qs = [c.qubit for c in g.controls]
        if len(set(qs)) != len(qs):
            out.append(f"{where}: repeated control qubit in block")
        for q in qs:
            if not 0 <= q < n:
                out.append(f"{where}: control qubit {q} out of range")
            if q in outer:
                out.append(f"{where}: block control qubit {q} already controlled by an enclosing block")
        inner = outer | set(qs)
        for i, b in enumerate(g.body):
            if not isinstance(b, ControlledBlock) and b.target in inner:
                out.append(f"{where}.{i}: body gate targets block control qubit {b.target}")
            _diagnose_gate(b, n, inner, f"{path}.{i}", out)
        return
    if not isinstance(g, (MCXGate, RyGate)):
        out.append(f"{where}: unknown gate type {type(g).__name__}")
        return
    qs = [c.qubit for c in g.controls]
    if not 0 <= g.target < n:
        out.append(f"{where}: target {g.target} out of range")
    for q in qs:
        if not 0 <= q < n:
            out.append(f"{where}: control qubit {q} out of range")
        if q in outer:
            out.append(f"{where}: control qubit {q} duplicates an enclosing block control")
    if g.target in qs:
        out.append(f"{where}: target {g.target} is also a control")
    if len(set(qs)) != len(qs):
        out.append(f"{where}: repeated control qubit")


def diagnose(c):
    """List every IR invariant violation in ``c`` (empty when valid)."""
    out = []
    for i, g in enumerate(c.gates):
        _diagnose_gate(g, c.n_qubits, set(), str(i), out)
    return out


def validate(c):
    return not diagnose(c)


def _flatten_into(g, outer, out):
    if isinstance(g, ControlledBlock):
        for b in g.body:
            _flatten_into(b, outer + g.controls, out)
    else:
        out.append(with_controls(g, outer) if outer else g)


def flatten(c):
    """Ungroup: push block controls down onto every leaf gate."""
    out = []
    for g in c.gates:
        _flatten_into(g, (), out)
    for g in out:
        if g.target in {t.qubit for t in g.controls}:
            raise StructureError(f"flattening made {g} control its own target")
    return Circuit(c.n_qubits, out)


def shift(c, offset, n_qubits=None):
    """Relabel every qubit ``q`` as ``q + offset``."""

    def move(g):
        if isinstance(g, ControlledBlock):
            return ControlledBlock(
                [ControlTerm(t.qubit + offset, t.positive) for t in g.controls],
                [move(b) for b in g.body],
            )
        ctl = [ControlTerm(t.qubit + offset, t.positive) for t in g.controls]
        return replace(g, target=g.target + offset, controls=tuple(ctl))

    return Circuit(c.n_qubits + offset if n_qubits is None else n_qubits, [move(g) for g in c.gates])


def inverse(c):
    """Reverse time order; Ry angles are negated, X gates are involutions."""

    def inv(g):
        if isinstance(g, RyGate):
            return replace(g, angle=-g.angle)
        if isinstance(g, ControlledBlock):
            return ControlledBlock(g.controls, [inv(b) for b in reversed(g.body)])
        return g

    return Circuit(c.n_qubits, [inv(g) for g in reversed(c.gates)])


# --- JSON interchange --------------------------------------------------------


def _control_dict(t):
    return {"q": t.qubit, "pol": "+" if t.positive else "-"}


def gate_to_dict(g):
    if isinstance(g, MCXGate):
        return {"kind": "mcx", "target": g.target, "controls": [_control_dict(t) for t in g.controls]}
    if isinstance(g, RyGate):
        return {
            "kind": "ry",
            "target": g.target,
            "angle": g.angle,
            "controls": [_control_dict(t) for t in g.controls],
        }
    if isinstance(g, ControlledBlock):
        return {
            "kind": "block",
            "controls": [_control_dict(t) for t in g.controls],
            "body": [gate_to_dict(b) for b in g.body],
        }
    raise StructureError(f"cannot serialise {type(g).__name__}")


def _parse_controls(items):
    out = []
    for item in items:
        pol = item["pol"]
        if pol not in ("+", "-"):
            raise StructureError(f"control polarity must be '+' or '-', got {pol!r}")
        out.append(ControlTerm(int(item["q"]), pol == "+"))
    return out


def gate_from_dict(d):
    kind = d.get("kind")
    controls = _parse_controls(d.get("controls", []))
    if kind == "mcx":
        return MCXGate(int(d["target"]), controls)
    if kind == "ry":
        return RyGate(int(d["target"]), float(d["angle"]), controls)
    if kind == "block":
        return ControlledBlock(controls, [gate_from_dict(b) for b in d.get("body", [])])
    raise StructureError(f"unknown gate kind {kind!r}")


def circuit_to_dict(c):
    return {"n_qubits": c.n_qubits, "gates": [gate_to_dict(g) for g in c.gates]}


def circuit_from_dict(d):
    try:
        return Circuit(int(d["n_qubits"]), [gate_from_dict(g) for g in d["gates"]])
    except (KeyError, TypeError) as exc:
        raise StructureError(f"malformed circuit JSON: {exc}") from None
