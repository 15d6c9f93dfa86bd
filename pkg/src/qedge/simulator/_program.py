"""Lowering of circuits to the flat array form consumed by the kernels.

Both kernels interpret the same opcode stream; barriers are dropped here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..circuit import Circuit

OP_H = 0
OP_X = 1
OP_SX = 2
OP_RZ = 3
OP_P = 4
OP_CNX = 5
OP_CNP = 6
OP_MEASURE = 7
OP_RESET = 8

_SINGLE = {"h": OP_H, "x": OP_X, "sx": OP_SX, "rz": OP_RZ}

MAX_QUBITS = 12


@dataclass
class Program:
    """Flat opcode arrays for one circuit.

    ``target`` holds the acted-on qubit (CNX: the flipped qubit, CNP: -1),
    ``mask`` the bitmask of control qubits (CNX) or of all participating
    qubits (CNP), ``clbit`` the destination bit of a measurement (-1
    otherwise).  ``n_rand`` counts measure+reset ops, i.e. the uniform
    random numbers one trajectory consumes.
    """

    n_qubits: int
    n_clbits: int
    code: np.ndarray
    target: np.ndarray
    mask: np.ndarray
    angle: np.ndarray
    clbit: np.ndarray
    n_rand: int


def lower(circ: Circuit) -> Program:
    """Translate a circuit into kernel arrays."""
    if circ.n_qubits > MAX_QUBITS:
        raise ValueError(f"circuit has {circ.n_qubits} qubits; supported maximum is {MAX_QUBITS}")
    code: list[int] = []
    target: list[int] = []
    mask: list[int] = []
    angle: list[float] = []
    clbit: list[int] = []
    n_rand = 0
    for op in circ.ops:
        if op.kind == "barrier":
            continue
        if op.kind in _SINGLE:
            code.append(_SINGLE[op.kind])
            target.append(op.qubits[0])
            mask.append(0)
            angle.append(op.angle if op.angle is not None else 0.0)
            clbit.append(-1)
        elif op.kind == "cnp":
            if len(op.qubits) == 1:
                code.append(OP_P)
                target.append(op.qubits[0])
                mask.append(0)
            else:
                code.append(OP_CNP)
                target.append(-1)
                mask.append(sum(1 << q for q in op.qubits))
            angle.append(op.angle)
            clbit.append(-1)
        elif op.kind == "cnx":
            code.append(OP_CNX)
            target.append(op.qubits[-1])
            mask.append(sum(1 << q for q in op.qubits[:-1]))
            angle.append(0.0)
            clbit.append(-1)
        elif op.kind == "measure":
            code.append(OP_MEASURE)
            target.append(op.qubits[0])
            mask.append(0)
            angle.append(0.0)
            clbit.append(op.clbit)
            n_rand += 1
        elif op.kind == "reset":
            code.append(OP_RESET)
            target.append(op.qubits[0])
            mask.append(0)
            angle.append(0.0)
            clbit.append(-1)
            n_rand += 1
        else:
            raise ValueError(f"cannot lower gate kind {op.kind!r}")
    # np.intc / np.longlong match the C int / long long memoryviews of the
    # compiled kernel on every platform
    return Program(
        n_qubits=circ.n_qubits,
        n_clbits=circ.n_clbits,
        code=np.asarray(code, dtype=np.intc),
        target=np.asarray(target, dtype=np.intc),
        mask=np.asarray(mask, dtype=np.longlong),
        angle=np.asarray(angle, dtype=np.float64),
        clbit=np.asarray(clbit, dtype=np.intc),
        n_rand=n_rand,
    )
