# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernel.

Hot loops of trajectory sampling and exact branch evaluation, written
against the flat opcode arrays produced by ``_program.lower``.  Semantics
mirror ``_kernel_py`` exactly: same opcode stream, same uniform-number
consumption order, same outcome rule (1 iff u < P(1)).
"""

import numpy as np

from libc.math cimport cos, sin, sqrt
from libc.string cimport memcpy

ctypedef double complex cplx

cdef int OP_H = 0
cdef int OP_X = 1
cdef int OP_SX = 2
cdef int OP_RZ = 3
cdef int OP_P = 4
cdef int OP_CNX = 5
cdef int OP_CNP = 6
cdef int OP_MEASURE = 7
cdef int OP_RESET = 8

cdef double SQRT1_2 = 1.0 / sqrt(2.0)


def _check_opcodes():
    from . import _program as p
    ok = (
        p.OP_H == OP_H and p.OP_X == OP_X and p.OP_SX == OP_SX
        and p.OP_RZ == OP_RZ and p.OP_P == OP_P and p.OP_CNX == OP_CNX
        and p.OP_CNP == OP_CNP and p.OP_MEASURE == OP_MEASURE
        and p.OP_RESET == OP_RESET
    )
    if not ok:
        raise RuntimeError("opcode tables of _kernel_cy and _program diverged")


_check_opcodes()


cdef void _apply_unitary(cplx* a, int dim, int code, int q, long long mask, double angle) noexcept:
    cdef int i, bit
    cdef long long full
    cdef cplx t0, t1, ph
    if code == OP_CNP:
        ph = cos(angle) + 1j * sin(angle)
        for i in range(dim):
            if (i & mask) == mask:
                a[i] = a[i] * ph
        return
    bit = 1 << q
    if code == OP_H:
        for i in range(dim):
            if not (i & bit):
                t0 = a[i]
                t1 = a[i | bit]
                a[i] = (t0 + t1) * SQRT1_2
                a[i | bit] = (t0 - t1) * SQRT1_2
    elif code == OP_X:
        for i in range(dim):
            if not (i & bit):
                t0 = a[i]
                a[i] = a[i | bit]
                a[i | bit] = t0
    elif code == OP_SX:
        for i in range(dim):
            if not (i & bit):
                t0 = a[i]
                t1 = a[i | bit]
                a[i] = 0.5 * ((1 + 1j) * t0 + (1 - 1j) * t1)
                a[i | bit] = 0.5 * ((1 - 1j) * t0 + (1 + 1j) * t1)
    elif code == OP_RZ:
        ph = cos(-0.5 * angle) + 1j * sin(-0.5 * angle)
        t1 = cos(0.5 * angle) + 1j * sin(0.5 * angle)
        for i in range(dim):
            if i & bit:
                a[i] = a[i] * t1
            else:
                a[i] = a[i] * ph
    elif code == OP_P:
        ph = cos(angle) + 1j * sin(angle)
        for i in range(dim):
            if i & bit:
                a[i] = a[i] * ph
    elif code == OP_CNX:
        full = mask | (<long long>1 << q)
        for i in range(dim):
            if (i & full) == mask:  # controls set, target clear
                t0 = a[i]
                a[i] = a[i | bit]
                a[i | bit] = t0


cdef double _prob_one(cplx* a, int dim, int q) noexcept:
    cdef int i, bit = 1 << q
    cdef double p = 0.0
    for i in range(dim):
        if i & bit:
            p += a[i].real * a[i].real + a[i].imag * a[i].imag
    return p


cdef void _collapse(cplx* a, int dim, int q, int outcome, double p1, bint is_reset) noexcept:
    """Project onto the measured outcome, renormalize, undo the flip on reset."""
    cdef int i, bit = 1 << q
    cdef double norm = sqrt(p1 if outcome else 1.0 - p1)
    if outcome == 0:
        for i in range(dim):
            if i & bit:
                a[i] = 0.0
            else:
                a[i] = a[i] / norm
    elif is_reset:
        for i in range(dim):
            if not (i & bit):
                a[i] = a[i | bit] / norm
                a[i | bit] = 0.0
    else:
        for i in range(dim):
            if i & bit:
                a[i] = a[i] / norm
            else:
                a[i] = 0.0


def sample(program, double[:, ::1] uniforms):
    """One trajectory per shot; returns classical registers as int64 array."""
    cdef int n = program.n_qubits
    cdef int dim = 1 << n
    cdef int[::1] code = program.code
    cdef int[::1] target = program.target
    cdef long long[::1] mask = program.mask
    cdef double[::1] angle = program.angle
    cdef int[::1] clbit = program.clbit
    cdef int nops = code.shape[0]
    cdef Py_ssize_t shots = uniforms.shape[0]

    out_np = np.zeros(shots, dtype=np.longlong)
    cdef long long[::1] out = out_np
    base_np = np.zeros(dim, dtype=np.complex128)
    work_np = np.zeros(dim, dtype=np.complex128)
    cdef cplx[::1] base = base_np
    cdef cplx[::1] work = work_np
    base[0] = 1.0

    # evolve the prefix before the first measure/reset once; it is shared
    # by every shot
    cdef int prefix = 0
    while prefix < nops and code[prefix] != OP_MEASURE and code[prefix] != OP_RESET:
        _apply_unitary(&base[0], dim, code[prefix], target[prefix], mask[prefix], angle[prefix])
        prefix += 1

    cdef Py_ssize_t s
    cdef int i, k, c, outcome
    cdef long long creg
    cdef double p1
    for s in range(shots):
        memcpy(&work[0], &base[0], dim * sizeof(cplx))
        creg = 0
        k = 0
        for i in range(prefix, nops):
            c = code[i]
            if c == OP_MEASURE or c == OP_RESET:
                p1 = _prob_one(&work[0], dim, target[i])
                outcome = 1 if uniforms[s, k] < p1 else 0
                k += 1
                _collapse(&work[0], dim, target[i], outcome, p1, c == OP_RESET)
                if c == OP_MEASURE and outcome:
                    creg |= (<long long>1) << clbit[i]
            else:
                _apply_unitary(&work[0], dim, c, target[i], mask[i], angle[i])
        out[s] = creg
    return out_np


def run_exact(program, double prune=1e-16):
    """Exact outcome distribution via branching on every measure/reset."""
    cdef int n = program.n_qubits
    cdef int dim = 1 << n
    cdef int[::1] code = program.code
    cdef int[::1] target = program.target
    cdef long long[::1] mask = program.mask
    cdef double[::1] angle = program.angle
    cdef int[::1] clbit = program.clbit
    cdef int nops = code.shape[0]

    init = np.zeros(dim, dtype=np.complex128)
    init[0] = 1.0
    stack = [(init, 1.0, 0, 0)]
    out = {}

    cdef cplx[::1] st
    cdef cplx[::1] child
    cdef int i, c, q, bit, j
    cdef double w, p1, p0, w0, w1, norm
    cdef long long creg, creg1
    while stack:
        st_np, w, creg, i = stack.pop()
        st = st_np
        while i < nops:
            c = code[i]
            if c == OP_MEASURE or c == OP_RESET:
                break
            _apply_unitary(&st[0], dim, c, target[i], mask[i], angle[i])
            i += 1
        if i == nops:
            key = creg
            out[key] = out.get(key, 0.0) + w
            continue
        q = target[i]
        bit = 1 << q
        p1 = _prob_one(&st[0], dim, q)
        p0 = 1.0 - p1
        w0 = w * p0
        w1 = w * p1
        if w1 > prune:
            child_np = np.empty(dim, dtype=np.complex128)
            child = child_np
            norm = sqrt(p1)
            if c == OP_RESET:
                creg1 = creg
                for j in range(dim):
                    if j & bit:
                        child[j] = 0.0
                    else:
                        child[j] = st[j | bit] / norm
            else:
                creg1 = creg | ((<long long>1) << clbit[i])
                for j in range(dim):
                    if j & bit:
                        child[j] = st[j] / norm
                    else:
                        child[j] = 0.0
            stack.append((child_np, w1, creg1, i + 1))
        if w0 > prune:
            # reuse the parent buffer for the zero branch
            norm = sqrt(p0)
            for j in range(dim):
                if j & bit:
                    st[j] = 0.0
                else:
                    st[j] = st[j] / norm
            stack.append((st_np, w0, creg, i + 1))
    return out
