"""Gate-level circuit representation shared by the builders, the simulator,
and the transpiler.

Conventions are little-endian throughout: qubit 0 is the least significant
bit of a statevector index, and classical bit 0 is the rightmost character
of an outcome bitstring.  Multi-controlled gates store their target as the
last qubit (CNX) or act symmetrically on all listed qubits (CNP).
"""

from __future__ import annotations

from dataclasses import dataclass, field

# Gate kinds.  "cnx" covers CX (one control) and larger; "cnp" covers the
# phase gate P (one qubit), CP, and larger.
KINDS = ("h", "x", "sx", "rz", "p", "cnx", "cnp", "measure", "reset", "barrier")
PARAMETRIC = ("rz", "p", "cnp")


@dataclass(frozen=True, slots=True)
class GateOp:
    """One circuit operation over explicit qubit (and classical bit) indices."""

    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None
    clbit: int | None = None

    @property
    def display_kind(self) -> str:
        """Reporting name: 1-control cnx is cx, 2-control is ccx, etc."""
        if self.kind == "cnx":
            return {2: "cx", 3: "ccx"}.get(len(self.qubits), f"c{len(self.qubits) - 1}x")
        if self.kind == "cnp":
            return {1: "p", 2: "cp", 3: "ccp"}.get(len(self.qubits), f"c{len(self.qubits) - 1}p")
        return self.kind

    def __str__(self) -> str:
        parts = [self.display_kind]
        if self.angle is not None:
            parts.append(f"({self.angle:.12g})")
        parts.append(" " + ",".join(f"q{q}" for q in self.qubits))
        if self.clbit is not None:
            parts.append(f" -> c{self.clbit}")
        return "".join(parts)


@dataclass(slots=True)
class Circuit:
    """Ordered gate list over ``n_qubits`` qubits and ``n_clbits`` classical bits.

    Built by appending and treated as immutable once handed to the
    simulator; all append helpers return ``self`` for chaining.
    """

    n_qubits: int
    n_clbits: int = 0
    ops: list[GateOp] = field(default_factory=list)

    def _check_qubits(self, qubits: tuple[int, ...]) -> None:
        for q in qubits:
            if not 0 <= q < self.n_qubits:
                raise ValueError(f"qubit index {q} out of range for {self.n_qubits} qubits")
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"duplicate qubit in {qubits}")

    def append(self, op: GateOp) -> "Circuit":
        if op.kind not in KINDS:
            raise ValueError(f"unknown gate kind {op.kind!r}")
        self._check_qubits(op.qubits)
        if op.clbit is not None and not 0 <= op.clbit < self.n_clbits:
            raise ValueError(f"clbit index {op.clbit} out of range for {self.n_clbits} clbits")
        self.ops.append(op)
        return self

    def h(self, q: int) -> "Circuit":
        return self.append(GateOp("h", (q,)))

    def x(self, q: int) -> "Circuit":
        return self.append(GateOp("x", (q,)))

    def sx(self, q: int) -> "Circuit":
        return self.append(GateOp("sx", (q,)))

    def rz(self, q: int, angle: float) -> "Circuit":
        return self.append(GateOp("rz", (q,), float(angle)))

    def p(self, q: int, angle: float) -> "Circuit":
        return self.append(GateOp("cnp", (q,), float(angle)))

    def cx(self, control: int, target: int) -> "Circuit":
        return self.append(GateOp("cnx", (control, target)))

    def ccx(self, c0: int, c1: int, target: int) -> "Circuit":
        return self.append(GateOp("cnx", (c0, c1, target)))

    def cnx(self, controls: tuple[int, ...], target: int) -> "Circuit":
        return self.append(GateOp("cnx", (*controls, target)))

    def cp(self, q0: int, q1: int, angle: float) -> "Circuit":
        return self.append(GateOp("cnp", (q0, q1), float(angle)))

    def cnp(self, qubits: tuple[int, ...], angle: float) -> "Circuit":
        return self.append(GateOp("cnp", tuple(qubits), float(angle)))

    def measure(self, q: int, clbit: int) -> "Circuit":
        return self.append(GateOp("measure", (q,), clbit=clbit))

    def reset(self, q: int) -> "Circuit":
        return self.append(GateOp("reset", (q,)))

    def barrier(self) -> "Circuit":
        return self.append(GateOp("barrier", ()))

    def extend(self, other: "Circuit") -> "Circuit":
        """Append another circuit's ops."""
        for op in other.ops:
            self.append(op)
        return self

    @property
    def n_measurements(self) -> int:
        return sum(1 for op in self.ops if op.kind == "measure")

    def dump(self) -> str:
        """Textual listing, one op per line (debugging aid, not a stable format)."""
        head = f"circuit: {self.n_qubits} qubits, {self.n_clbits} clbits"
        return "\n".join([head, *(str(op) for op in self.ops)])

    def __str__(self) -> str:
        return self.dump()
