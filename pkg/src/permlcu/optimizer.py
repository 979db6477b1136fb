"""Peephole passes over flat MCX/Ry circuits.

Four rewrites, all unitary-preserving:

reduce
    Cancel identical MCX pairs and merge pairs that differ in one control
    (opposite polarity, or present on one gate only). The left gate is slid
    rightwards towards its partner through gates it commutes with; sliding
    through an uncontrolled X on one of its control qubits flips that
    control's polarity.
group / flatten
    Hoist a control shared by a run of consecutive gates into a
    ControlledBlock, and the inverse.
reorder
    Stable bubble sort by a canonical key, swapping only neighbours that
    :func:`commutes` proves commute.
"""

import logging
from dataclasses import replace

from .circuit import Circuit, ControlledBlock, MCXGate, flatten
from .errors import StructureError

log = logging.getLogger(__name__)

DEFAULT_PIPELINE = ("flatten", "reorder", "reduce", "group")
MAX_ROUNDS = 100


def _ctrl_qubits(g):
    return {t.qubit for t in g.controls}


def commutes(g1, g2):
    """Sound syntactic commutation test for two leaf gates.

    True when (a) the gates touch disjoint qubits, (b) they hold opposite
    polarity controls on a shared qubit, or (c) they are the same kind of gate
    with the same target and control set. False means "not proven".
    """
    if not g1.qubits & g2.qubits:
        return True
    pol1 = {t.qubit: t.positive for t in g1.controls}
    for t in g2.controls:
        if t.qubit in pol1 and pol1[t.qubit] != t.positive:
            return True
    return type(g1) is type(g2) and g1.target == g2.target and g1.controls == g2.controls


def _require_flat(c, name):
    if c.has_blocks():
        raise StructureError(f"{name} needs a block-free circuit; run flatten first")


def _slide(g, h):
    """``g`` moved to the right of ``h`` (possibly rewritten), or None."""
    if commutes(g, h):
        return g
    if isinstance(g, MCXGate) and isinstance(h, MCXGate):
        if g.target not in _ctrl_qubits(h) and h.target not in _ctrl_qubits(g):
            return g
        if not h.controls and h.target in _ctrl_qubits(g):
            ctl = [t.flipped() if t.qubit == h.target else t for t in g.controls]
            return MCXGate(g.target, ctl)
    return None


def _merge(g, h):
    """Combine two adjacent MCX gates into at most one. Returns (hit, gate_or_None)."""
    if g.target != h.target:
        return False, None
    if g.controls == h.controls:
        return True, None
    a, b = set(g.controls), set(h.controls)
    qa, qb = _ctrl_qubits(g), _ctrl_qubits(h)
    if qa == qb:
        diff = a ^ b
        if len(diff) == 2:
            q = next(iter(diff)).qubit
            return True, MCXGate(g.target, [t for t in g.controls if t.qubit != q])
        return False, None
    small, big = (a, b) if len(a) < len(b) else (b, a)
    extra = big - small
    if len(big) == len(small) + 1 and small <= big and len(extra) == 1:
        (t,) = extra
        return True, MCXGate(g.target, sorted(small | {t.flipped()}))
    return False, None


def _reduce_once(gates):
    for i, g in enumerate(gates):
        if not isinstance(g, MCXGate):
            continue
        cur = g
        for j in range(i + 1, len(gates)):
            h = gates[j]
            if isinstance(h, MCXGate):
                hit, merged = _merge(cur, h)
                if hit:
                    out = gates[:i] + gates[i + 1 : j]
                    if merged is not None:
                        out.append(merged)
                    return out + gates[j + 1 :]
            cur = _slide(cur, h)
            if cur is None:
                break
    return None


def reduce_pass(c):
    _require_flat(c, "reduce_pass")
    gates = list(c.gates)
    while True:
        nxt = _reduce_once(gates)
        if nxt is None:
            return Circuit(c.n_qubits, gates)
        gates = nxt


def default_key(n_qubits):
    """Control pattern over qubits high to low (neg < pos < absent), then target."""

    def key(g):
        pol = {t.qubit: t.positive for t in g.controls}
        pattern = tuple((1 if pol[q] else 0) if q in pol else 2 for q in range(n_qubits - 1, -1, -1))
        return pattern, g.target

    return key


def reorder_pass(c, key=None):
    _require_flat(c, "reorder_pass")
    key = key or default_key(c.n_qubits)
    gates = list(c.gates)
    keys = [key(g) for g in gates]
    swapped = True
    while swapped:
        swapped = False
        for i in range(len(gates) - 1):
            if keys[i + 1] < keys[i] and commutes(gates[i], gates[i + 1]):
                gates[i], gates[i + 1] = gates[i + 1], gates[i]
                keys[i], keys[i + 1] = keys[i + 1], keys[i]
                swapped = True
    return Circuit(c.n_qubits, gates)


def _group(gates):
    out = []
    i = 0
    while i < len(gates):
        shared = set(gates[i].controls)
        j = i + 1
        while j < len(gates) and shared & set(gates[j].controls):
            shared &= set(gates[j].controls)
            j += 1
        if j - i >= 2:
            hoisted = sorted(shared)
            body = [replace(g, controls=tuple(t for t in g.controls if t not in shared)) for g in gates[i:j]]
            out.append(ControlledBlock(hoisted, _group(body)))
        else:
            out.append(gates[i])
        i = j
    return out


def group_pass(c):
    _require_flat(c, "group_pass")
    return Circuit(c.n_qubits, _group(list(c.gates)))


PASSES = {
    "flatten": flatten,
    "ungroup": flatten,
    "reorder": reorder_pass,
    "reduce": reduce_pass,
    "group": group_pass,
}


def parse_pipeline(text):
    names = tuple(x.strip() for x in text.split(",") if x.strip())
    for n in names:
        if n not in PASSES:
            raise ValueError(f"unknown pass {n!r}; choose from {', '.join(sorted(PASSES))}")
    return names


def optimize(c, pipeline=DEFAULT_PIPELINE, max_rounds=MAX_ROUNDS):
    """Run passes in order; an adjacent ``reorder, reduce`` pair loops to a fixpoint.

    Returns ``(circuit, stats)``. ``stats["cap_reached"]`` is set when the
    loop hit ``max_rounds`` without settling; the circuit is still valid.
    """
    if isinstance(pipeline, str):
        pipeline = parse_pipeline(pipeline)
    stats = {"gates_before": c.leaf_count(), "passes": [], "rounds": 0, "cap_reached": False}
    cur = c
    i = 0

    def run(name, circ):
        if name not in ("flatten", "ungroup") and circ.has_blocks():
            circ = flatten(circ)
        out = PASSES[name](circ)
        stats["passes"].append({"name": name, "gates_before": circ.leaf_count(), "gates_after": out.leaf_count()})
        return out

    while i < len(pipeline):
        name = pipeline[i]
        if name == "reorder" and i + 1 < len(pipeline) and pipeline[i + 1] == "reduce":
            for _ in range(max_rounds):
                stats["rounds"] += 1
                nxt = run("reduce", run("reorder", cur))
                settled = nxt == cur
                cur = nxt
                if settled:
                    break
            else:
                stats["cap_reached"] = True
                log.warning("reorder/reduce did not settle within %d rounds", max_rounds)
            i += 2
            continue
        cur = run(name, cur)
        i += 1
    stats["gates_after"] = cur.leaf_count()
    return cur, stats
