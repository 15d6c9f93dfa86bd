"""Pure-Python (numpy) simulation kernel.

Vectorizes over shots (sampling) or over collapse branches (exact
evaluation), so the per-gate work is a handful of numpy slice operations
on a (batch, 2**n) complex array.  Semantics mirror the compiled kernel:
the same uniform random number stream produces the same outcomes.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ._program import (
    OP_CNP,
    OP_CNX,
    OP_H,
    OP_MEASURE,
    OP_P,
    OP_RESET,
    OP_RZ,
    OP_SX,
    OP_X,
    Program,
)

_SQRT1_2 = 1.0 / np.sqrt(2.0)
PRUNE_WEIGHT = 1e-16


@lru_cache(maxsize=None)
def _halves(n: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (bit q clear, bit q set) of a 2**n statevector."""
    idx = np.arange(1 << n)
    i0 = idx[(idx >> q) & 1 == 0]
    return i0, i0 | (1 << q)


@lru_cache(maxsize=None)
def _mask_sel(n: int, mask: int) -> np.ndarray:
    """Indices whose bits cover ``mask`` (all masked qubits are 1)."""
    idx = np.arange(1 << n)
    return idx[(idx & mask) == mask]


def _apply_unitary(states: np.ndarray, n: int, code: int, target: int, mask: int, angle: float) -> None:
    """Apply one unitary op in place to a (batch, 2**n) array."""
    if code == OP_H:
        i0, i1 = _halves(n, target)
        a0 = states[:, i0].copy()
        a1 = states[:, i1]
        states[:, i0] = (a0 + a1) * _SQRT1_2
        states[:, i1] = (a0 - a1) * _SQRT1_2
    elif code == OP_X:
        i0, i1 = _halves(n, target)
        a0 = states[:, i0].copy()
        states[:, i0] = states[:, i1]
        states[:, i1] = a0
    elif code == OP_SX:
        i0, i1 = _halves(n, target)
        a0 = states[:, i0].copy()
        a1 = states[:, i1]
        states[:, i0] = 0.5 * ((1 + 1j) * a0 + (1 - 1j) * a1)
        states[:, i1] = 0.5 * ((1 - 1j) * a0 + (1 + 1j) * a1)
    elif code == OP_RZ:
        i0, i1 = _halves(n, target)
        states[:, i0] *= np.exp(-0.5j * angle)
        states[:, i1] *= np.exp(0.5j * angle)
    elif code == OP_P:
        _, i1 = _halves(n, target)
        states[:, i1] *= np.exp(1j * angle)
    elif code == OP_CNX:
        full = mask | (1 << target)
        j1 = _mask_sel(n, full)
        j0 = j1 & ~(1 << target)
        a0 = states[:, j0].copy()
        states[:, j0] = states[:, j1]
        states[:, j1] = a0
    elif code == OP_CNP:
        sel = _mask_sel(n, mask)
        states[:, sel] *= np.exp(1j * angle)
    else:
        raise ValueError(f"not a unitary opcode: {code}")


def _prob_one(states: np.ndarray, i1: np.ndarray) -> np.ndarray:
    a1 = states[:, i1]
    return np.sum(a1.real**2 + a1.imag**2, axis=1)


def sample(program: Program, uniforms: np.ndarray) -> np.ndarray:
    """Simulate one trajectory per shot; returns classical registers as ints.

    ``uniforms`` has shape (shots, n_rand); uniform k is consumed by the
    k-th measure/reset op of the program, outcome 1 iff u < P(1).
    """
    n = program.n_qubits
    shots = uniforms.shape[0]
    states = np.zeros((shots, 1 << n), dtype=np.complex128)
    states[:, 0] = 1.0
    cregs = np.zeros(shots, dtype=np.int64)
    k = 0
    for i in range(len(program.code)):
        code = int(program.code[i])
        if code in (OP_MEASURE, OP_RESET):
            q = int(program.target[i])
            i0, i1 = _halves(n, q)
            p1 = _prob_one(states, i1)
            ones = uniforms[:, k] < p1
            k += 1
            states[np.ix_(ones, i0)] = 0.0
            states[np.ix_(~ones, i1)] = 0.0
            p_kept = np.where(ones, p1, 1.0 - p1)
            states /= np.sqrt(p_kept)[:, None]
            if code == OP_MEASURE:
                cregs |= ones.astype(np.int64) << int(program.clbit[i])
            else:
                # reset: flip the collapsed-to-one trajectories back to |0>
                states[np.ix_(ones, i0)] = states[np.ix_(ones, i1)]
                states[np.ix_(ones, i1)] = 0.0
        else:
            _apply_unitary(states, n, code, int(program.target[i]), int(program.mask[i]), float(program.angle[i]))
    return cregs


def run_exact(program: Program, prune: float = PRUNE_WEIGHT) -> dict[int, float]:
    """Exact outcome distribution via branching on every measure/reset.

    Returns classical-register int -> probability.  Branches whose weight
    drops below ``prune`` are discarded, so the values sum to 1 up to a
    bounded pruning error (well under 1e-10 here).
    """
    n = program.n_qubits
    states = np.zeros((1, 1 << n), dtype=np.complex128)
    states[0, 0] = 1.0
    weights = np.ones(1, dtype=np.float64)
    cregs = np.zeros(1, dtype=np.int64)
    for i in range(len(program.code)):
        code = int(program.code[i])
        if code in (OP_MEASURE, OP_RESET):
            q = int(program.target[i])
            i0, i1 = _halves(n, q)
            p1 = _prob_one(states, i1)
            p0 = 1.0 - p1
            w0 = weights * p0
            w1 = weights * p1
            keep0 = w0 > prune
            keep1 = w1 > prune
            s0 = states[keep0].copy()
            s0[:, i1] = 0.0
            s0 /= np.sqrt(p0[keep0])[:, None]
            s1 = states[keep1].copy()
            s1[:, i0] = 0.0
            s1 /= np.sqrt(p1[keep1])[:, None]
            c0 = cregs[keep0]
            c1 = cregs[keep1].copy()
            if code == OP_MEASURE:
                c1 |= np.int64(1) << int(program.clbit[i])
            else:
                # reset: move the one-amplitudes down to |0>
                s1[:, i0] = s1[:, i1]
                s1[:, i1] = 0.0
            states = np.concatenate([s0, s1])
            weights = np.concatenate([w0[keep0], w1[keep1]])
            cregs = np.concatenate([c0, c1])
        else:
            _apply_unitary(states, n, code, int(program.target[i]), int(program.mask[i]), float(program.angle[i]))
    out: dict[int, float] = {}
    for c, w in zip(cregs.tolist(), weights.tolist()):
        out[c] = out.get(c, 0.0) + w
    return out


def statevector(program: Program) -> np.ndarray:
    """Final statevector of a unitary-only program applied to |0...0>."""
    if program.n_rand:
        raise ValueError("statevector is undefined for circuits with measure/reset")
    n = program.n_qubits
    states = np.zeros((1, 1 << n), dtype=np.complex128)
    states[0, 0] = 1.0
    for i in range(len(program.code)):
        _apply_unitary(
            states, n, int(program.code[i]), int(program.target[i]), int(program.mask[i]), float(program.angle[i])
        )
    return states[0]
