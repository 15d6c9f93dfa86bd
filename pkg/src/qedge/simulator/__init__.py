"""Dense statevector simulation of small circuits.

Supports mid-circuit measurement and reset, exact outcome distributions
via collapse-branch enumeration, and reproducible shot sampling.  The hot
loops live in a compiled kernel (``_kernel_cy``) with a pure-Python numpy
fallback (``_kernel_py``) selected at import; set ``QEDGE_KERNEL=python``
or ``QEDGE_KERNEL=cython`` to force one.

Conventions: little-endian everywhere.  Qubit 0 is the least significant
bit of a statevector index; classical bit 0 is the rightmost character of
an outcome bitstring.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

import numpy as np

from ..circuit import Circuit, GateOp
from . import _kernel_py
from ._program import lower

_KERNELS = {"python": _kernel_py}
try:
    from . import _kernel_cy

    _KERNELS["cython"] = _kernel_cy
except ImportError:
    _kernel_cy = None

_requested = os.environ.get("QEDGE_KERNEL")
if _requested:
    if _requested not in _KERNELS:
        raise ImportError(
            f"QEDGE_KERNEL={_requested!r} is not available; "
            f"built kernels: {sorted(_KERNELS)}"
        )
    _active = _requested
else:
    _active = "cython" if "cython" in _KERNELS else "python"


def kernel_name() -> str:
    """Name of the kernel currently executing circuits."""
    return _active


def available_kernels() -> tuple[str, ...]:
    return tuple(sorted(_KERNELS))


@contextmanager
def use_kernel(name: str):
    """Temporarily switch the executing kernel (testing and benchmarks)."""
    global _active
    if name not in _KERNELS:
        raise ValueError(f"kernel {name!r} not available; built: {sorted(_KERNELS)}")
    previous = _active
    _active = name
    try:
        yield
    finally:
        _active = previous


def _bitstring(value: int, n_clbits: int) -> str:
    return format(value, f"0{n_clbits}b") if n_clbits else ""


def apply_gate(state: np.ndarray, op: GateOp) -> np.ndarray:
    """Apply one unitary gate to a statevector; returns a new array."""
    if op.kind in ("measure", "reset"):
        raise ValueError(f"apply_gate requires a unitary op, got {op.kind}")
    dim = len(state)
    n = dim.bit_length() - 1
    if dim != 1 << n:
        raise ValueError(f"statevector length {dim} is not a power of two")
    circ = Circuit(n).append(op)
    batch = np.array(state, dtype=np.complex128).reshape(1, dim)
    prog = lower(circ)
    if len(prog.code):
        _kernel_py._apply_unitary(
            batch, n, int(prog.code[0]), int(prog.target[0]), int(prog.mask[0]), float(prog.angle[0])
        )
    return batch[0]


def run_exact(circ: Circuit) -> dict[str, float]:
    """Exact outcome distribution over classical bitstrings.

    Every measurement splits the state into its collapsed branches, so the
    result is the full distribution even with mid-circuit measurements;
    for a measure-at-the-end circuit this reduces to squared amplitudes.
    """
    prog = lower(circ)
    raw = _KERNELS[_active].run_exact(prog)
    return {
        _bitstring(key, circ.n_clbits): raw[key] for key in sorted(raw)
    }


def sample_counts(circ: Circuit, shots: int, seed: int) -> dict[str, int]:
    """Sample ``shots`` independent trajectories; deterministic given ``seed``."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    prog = lower(circ)
    rng = np.random.default_rng(seed)
    uniforms = rng.random((shots, prog.n_rand))
    cregs = _KERNELS[_active].sample(prog, uniforms)
    values, freq = np.unique(np.asarray(cregs), return_counts=True)
    return {
        _bitstring(int(v), circ.n_clbits): int(c) for v, c in zip(values, freq)
    }


def marginal_counts(counts: dict[str, int], keep: list[int]) -> dict[str, int]:
    """Sum counts over all classical bits not listed in ``keep``.

    Bit k of a result key is original bit ``keep[k]`` (little-endian, so
    the rightmost character of the result corresponds to ``keep[0]``).
    """
    out: dict = {}
    for bits, count in counts.items():
        for k in keep:
            if not 0 <= k < len(bits):
                raise ValueError(f"clbit index {k} out of range for {len(bits)}-bit keys")
        key = "".join(bits[len(bits) - 1 - k] for k in reversed(keep))
        out[key] = out.get(key, 0) + count
    return out


def prob_of(counts: dict[str, int], bit: int, value: int) -> float:
    """Marginal relative frequency of ``value`` at classical bit ``bit``."""
    if value not in (0, 1):
        raise ValueError("value must be 0 or 1")
    marginal = marginal_counts(counts, [bit])
    total = sum(marginal.values())
    if total <= 0:
        raise ValueError("cannot take probabilities of empty counts")
    return marginal.get(str(value), 0) / total


def statevector_of(circ: Circuit) -> np.ndarray:
    """Statevector after applying a unitary-only circuit to |0...0>."""
    return _kernel_py.statevector(lower(circ))


def unitary_of(circ: Circuit) -> np.ndarray:
    """Full unitary matrix of a measurement-free circuit (small n only)."""
    prog = lower(circ)
    if prog.n_rand:
        raise ValueError("unitary_of is undefined for circuits with measure/reset")
    n = circ.n_qubits
    dim = 1 << n
    states = np.eye(dim, dtype=np.complex128)
    for i in range(len(prog.code)):
        _kernel_py._apply_unitary(
            states, n, int(prog.code[i]), int(prog.target[i]), int(prog.mask[i]), float(prog.angle[i])
        )
    # row b evolved from basis state |b>, so columns of U are the rows here
    return states.T.copy()
