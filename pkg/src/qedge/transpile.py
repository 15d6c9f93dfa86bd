"""Decomposition to the basis gate set {Rz, SX, X, CX} and peephole cleanup.

``decompose`` rewrites every gate into basis gates (Hadamards become
Rz-SX-Rz, phase gates become Rz, controlled phases and Toffolis expand via
the standard CX constructions), preserving the unitary up to a global
phase.  ``optimize`` then applies a small fixed-point rule set: merge
adjacent Rz, cancel X pairs, commute Rz leftward through X (negating the
angle), and drop rotations that are multiples of 2*pi.
"""

from __future__ import annotations

import math
from collections import defaultdict

import numpy as np

from .circuit import Circuit, GateOp
from .simulator import unitary_of

BASIS_KINDS = frozenset({"rz", "sx", "x", "cx"})
_KEEP = frozenset({"rz", "sx", "x", "measure", "reset"})

#: rotations within this distance of a multiple of 2*pi count as identity
ANGLE_EPS = 1e-12


def _is_identity_angle(angle: float) -> bool:
    return abs(math.remainder(angle, 2 * math.pi)) < ANGLE_EPS


def _expand(op: GateOp) -> list[GateOp] | None:
    """One rewriting step towards the basis; None means already terminal."""
    kind = op.display_kind
    if kind in _KEEP or kind == "cx":
        return None
    if kind == "barrier":
        return []
    if kind == "h":
        (q,) = op.qubits
        return [
            GateOp("rz", (q,), math.pi / 2),
            GateOp("sx", (q,)),
            GateOp("rz", (q,), math.pi / 2),
        ]
    if kind == "p":
        return [GateOp("rz", op.qubits, op.angle)]
    if kind == "cp":
        a, b = op.qubits
        half = op.angle / 2
        return [
            GateOp("cnp", (a,), half),
            GateOp("cnx", (a, b)),
            GateOp("cnp", (b,), -half),
            GateOp("cnx", (a, b)),
            GateOp("cnp", (b,), half),
        ]
    if kind == "ccp":
        a, b, c = op.qubits
        half = op.angle / 2
        return [
            GateOp("cnp", (b, c), half),
            GateOp("cnx", (a, b)),
            GateOp("cnp", (b, c), -half),
            GateOp("cnx", (a, b)),
            GateOp("cnp", (a, c), half),
        ]
    if kind == "ccx":
        a, b, t = op.qubits
        quarter = math.pi / 4
        return [
            GateOp("h", (t,)),
            GateOp("cnx", (b, t)),
            GateOp("cnp", (t,), -quarter),
            GateOp("cnx", (a, t)),
            GateOp("cnp", (t,), quarter),
            GateOp("cnx", (b, t)),
            GateOp("cnp", (t,), -quarter),
            GateOp("cnx", (a, t)),
            GateOp("cnp", (b,), quarter),
            GateOp("cnp", (t,), quarter),
            GateOp("h", (t,)),
            GateOp("cnx", (a, b)),
            GateOp("cnp", (a,), quarter),
            GateOp("cnp", (b,), -quarter),
            GateOp("cnx", (a, b)),
        ]
    raise ValueError(f"no decomposition for gate {kind!r} (arity too large?)")


def decompose(circ: Circuit) -> Circuit:
    """Rewrite to basis gates; measurements and resets pass through."""
    ops = list(circ.ops)
    changed = True
    while changed:
        changed = False
        next_ops: list[GateOp] = []
        for op in ops:
            expansion = _expand(op)
            if expansion is None:
                next_ops.append(op)
            else:
                next_ops.extend(expansion)
                changed = True
        ops = next_ops
    out = Circuit(circ.n_qubits, circ.n_clbits)
    for op in ops:
        out.append(op)
    return out


def is_basis_circuit(circ: Circuit) -> bool:
    return all(op.display_kind in BASIS_KINDS or op.kind in ("measure", "reset") for op in circ.ops)


def _next_on_qubit(ops: list[GateOp], i: int, q: int) -> int:
    """Index of the next op after i touching qubit q, or len(ops)."""
    for j in range(i + 1, len(ops)):
        if q in ops[j].qubits:
            return j
    return len(ops)


def optimize(circ: Circuit) -> Circuit:
    """Fixed-point peephole pass over a basis circuit.

    Rules: drop Rz(2*pi*k); merge Rz with the next Rz on the same qubit;
    cancel adjacent X pairs; rewrite X-then-Rz(a) as Rz(-a)-then-X.
    Measure and reset block every rule on their qubit.
    """
    if not is_basis_circuit(circ):
        raise ValueError("optimize expects a basis circuit (run decompose first)")
    ops = list(circ.ops)
    changed = True
    while changed:
        changed = False
        for i, op in enumerate(ops):
            if op.kind == "rz":
                if _is_identity_angle(op.angle):
                    del ops[i]
                    changed = True
                    break
                q = op.qubits[0]
                j = _next_on_qubit(ops, i, q)
                if j < len(ops) and ops[j].kind == "rz":
                    ops[i] = GateOp("rz", (q,), op.angle + ops[j].angle)
                    del ops[j]
                    changed = True
                    break
            elif op.kind == "x":
                q = op.qubits[0]
                j = _next_on_qubit(ops, i, q)
                if j < len(ops) and ops[j].kind == "x":
                    del ops[j]
                    del ops[i]
                    changed = True
                    break
                if j < len(ops) and ops[j].kind == "rz":
                    # X Rz(a) == Rz(-a) X; pulling rotations left lets them merge
                    rz = GateOp("rz", (q,), -ops[j].angle)
                    del ops[j]
                    ops[i] = rz
                    ops.insert(i + 1, GateOp("x", (q,)))
                    changed = True
                    break
    out = Circuit(circ.n_qubits, circ.n_clbits)
    for op in ops:
        out.append(op)
    return out


def gate_counts(circ: Circuit) -> tuple[dict[str, int], int]:
    """Per-kind op counts and circuit depth.

    Depth is the longest dependency chain over qubits and classical bits;
    measurements and resets count as depth-1 ops, barriers do not count.
    """
    counts: dict[str, int] = {}
    level: defaultdict = defaultdict(int)
    depth = 0
    for op in circ.ops:
        if op.kind == "barrier":
            continue
        name = op.display_kind
        counts[name] = counts.get(name, 0) + 1
        resources = [("q", q) for q in op.qubits]
        if op.clbit is not None:
            resources.append(("c", op.clbit))
        d = 1 + max((level[r] for r in resources), default=0)
        for r in resources:
            level[r] = d
        depth = max(depth, d)
    return counts, depth


def equivalent_up_to_phase(a: Circuit, b: Circuit, tol: float = 1e-9) -> bool:
    """Compare the unitaries of two measurement-free circuits up to global phase."""
    ua = unitary_of(a)
    ub = unitary_of(b)
    if ua.shape != ub.shape:
        return False
    dim = ua.shape[0]
    return abs(np.trace(ua.conj().T @ ub)) / dim > 1 - tol
