"""Builders for the phase-encoded comparator circuits and their variants.

A comparator circuit encodes an input vector and a weight vector as phases
of an equal superposition; the measured outcome probability equals the
squared modulus of their inner product.  Two circuit families exist:

* the two-pixel (one-qubit) form, read out at outcome 0, and
* the 2x2-patch (two data qubits + ancilla) form, read out at ancilla 1.

The six execution variants pack the two-pixel form into circuits in
different ways (per direction, sequentially with mid-circuit measurement,
in parallel across qubits, or both) without changing any per-pixel
marginal probability.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .circuit import Circuit
from .encoding import gray_to_angle, mask_1d, mask_2d
from .image import Direction, GrayImage, extract_pair, extract_patch_2x2

#: Block order inside multi-direction circuits; classical bit k of a pixel
#: holds direction DIRECTION_ORDER[k] (0 diagonal, 1 horizontal, 2 vertical).
DIRECTION_ORDER = (Direction.DIAGONAL, Direction.HORIZONTAL, Direction.VERTICAL)


@dataclass(frozen=True)
class NeuronSpec:
    """Input angles theta and weight angles gamma of one comparator."""

    theta: tuple[float, ...]
    gamma: tuple[float, ...]

    def __post_init__(self):
        n = len(self.theta)
        if n != len(self.gamma):
            raise ValueError("theta and gamma must have equal length")
        if n < 2 or n & (n - 1):
            raise ValueError(f"vector length must be a power of two >= 2, got {n}")

    @property
    def n_qubits(self) -> int:
        return (len(self.theta) - 1).bit_length()


class VariantKind(Enum):
    """Execution strategies; value is the CLI name."""

    STD32T = "std32t"
    STD50 = "std50"
    SEQ50 = "seq50"
    PARA50 = "para50"
    PARA50_3PIX = "para50-3pix"
    SEQPARA50 = "seqpara50"
    TWOD = "twod"

    @property
    def cli_name(self) -> str:
        return self.value

    @property
    def default_shots(self) -> int:
        # the low-shot mode is the point of the five reduced 1-D variants;
        # the standard runs use the full shot budget
        if self in (VariantKind.STD32T, VariantKind.TWOD):
            return 32000
        return 50

    @property
    def is_one_dimensional(self) -> bool:
        return self is not VariantKind.TWOD


ONE_DIM_KINDS = tuple(k for k in VariantKind if k.is_one_dimensional)


@dataclass(frozen=True, slots=True)
class MeasureSlot:
    """Maps one classical bit of a circuit to its (pixel, direction)."""

    clbit: int
    x: int
    y: int
    direction: Direction


@dataclass(frozen=True, slots=True)
class VariantCircuit:
    """One executable circuit plus its readout bookkeeping."""

    circuit: Circuit
    slots: tuple[MeasureSlot, ...]


# ---------------------------------------------------------------------------
# State preparation fragments


def _phase_on_basis_state(circ: Circuit, qubits: tuple[int, ...], j: int, angle: float) -> None:
    """Phase-shift basis state |j> of the given register: X-conjugated CnP."""
    flips = [q for k, q in enumerate(qubits) if not (j >> k) & 1]
    for q in flips:
        circ.x(q)
    circ.cnp(tuple(qubits), angle)
    for q in flips:
        circ.x(q)


def build_input_unitary(theta) -> Circuit:
    """Fragment preparing the phase-encoded input state from |0...0>.

    Hadamards create the balanced superposition, then each basis state
    j >= 1 receives phase theta_j - theta_0 (the j = 0 phase is dropped;
    it only contributes a global phase).
    """
    theta = tuple(float(t) for t in theta)
    n = (len(theta) - 1).bit_length()
    if len(theta) != 1 << n or len(theta) < 2:
        raise ValueError(f"angle vector length must be a power of two >= 2, got {len(theta)}")
    qubits = tuple(range(n))
    circ = Circuit(n)
    for q in qubits:
        circ.h(q)
    for j in range(1, 1 << n):
        _phase_on_basis_state(circ, qubits, j, theta[j] - theta[0])
    return circ


def build_weight_unitary(gamma) -> Circuit:
    """Fragment projecting onto the weight state: inverse phases, H, X.

    Composed after ``build_input_unitary``, the amplitude of |1...1> is
    the inner product of the encoded weight and input states up to a
    global phase.  The phase blocks run in reverse order with negated
    angles, i.e. the exact inverse of the input encoding.
    """
    gamma = tuple(float(g) for g in gamma)
    n = (len(gamma) - 1).bit_length()
    if len(gamma) != 1 << n or len(gamma) < 2:
        raise ValueError(f"angle vector length must be a power of two >= 2, got {len(gamma)}")
    qubits = tuple(range(n))
    circ = Circuit(n)
    for j in range((1 << n) - 1, 0, -1):
        _phase_on_basis_state(circ, qubits, j, -(gamma[j] - gamma[0]))
    for q in qubits:
        circ.h(q)
    for q in qubits:
        circ.x(q)
    return circ


def build_2d_circuit(spec: NeuronSpec) -> Circuit:
    """Patch comparator: 2 data qubits + ancilla, P(clbit=1) = |<w|c>|^2."""
    if len(spec.theta) != 4:
        raise ValueError("2x2 comparator needs angle vectors of length 4")
    circ = Circuit(3, 1)
    circ.extend(build_input_unitary(spec.theta))
    circ.extend(build_weight_unitary(spec.gamma))
    circ.ccx(0, 1, 2)
    circ.measure(2, 0)
    return circ


def _append_1d_block(circ: Circuit, qubit: int, theta: tuple[float, float], gamma: tuple[float, float]) -> None:
    """Two-pixel comparator gate sequence on one qubit (no measurement).

    Input phases are applied with the X-sandwich trick, then the weight
    phases with negated angles in opposite order; P(outcome 0) is
    |exp(i(theta1-gamma1)) + exp(i(theta0-gamma0))|^2 / 4.
    """
    circ.h(qubit)
    circ.p(qubit, theta[0])
    circ.x(qubit)
    circ.p(qubit, theta[1])
    circ.p(qubit, -gamma[1])
    circ.x(qubit)
    circ.p(qubit, -gamma[0])
    circ.h(qubit)


def build_1d_circuit(spec: NeuronSpec) -> Circuit:
    """Two-pixel comparator: 1 qubit, 1 clbit, read out at outcome 0."""
    if len(spec.theta) != 2:
        raise ValueError("two-pixel comparator needs angle vectors of length 2")
    circ = Circuit(1, 1)
    _append_1d_block(circ, 0, spec.theta, spec.gamma)
    circ.measure(0, 0)
    return circ


def analytic_probability(spec: NeuronSpec) -> float:
    """Closed form of the two-pixel comparator's P(outcome 0)."""
    if len(spec.theta) != 2:
        raise ValueError("closed form applies to the two-pixel comparator only")
    lam0 = spec.theta[0] - spec.gamma[0]
    lam1 = spec.theta[1] - spec.gamma[1]
    return 0.25 * abs(cmath.exp(1j * lam1) + cmath.exp(1j * lam0)) ** 2


# ---------------------------------------------------------------------------
# Variant packing


_ANGLE_PER_GRAY = math.pi / 255.0


def _pair_angles(img: GrayImage, x: int, y: int, direction: Direction) -> tuple[float, float]:
    # scalar fast path of gray_to_angle; called once per circuit
    c0, c1 = extract_pair(img, x, y, direction)
    return (c0 * _ANGLE_PER_GRAY, c1 * _ANGLE_PER_GRAY)


_GAMMA_1D = mask_1d(Direction.HORIZONTAL).angles  # (0, pi) for every direction


def _resolve_directions(kind: VariantKind, directions) -> tuple[Direction, ...]:
    if kind is VariantKind.TWOD:
        if directions is not None:
            raise ValueError("the 2-D variant always runs horizontal and vertical masks")
        return (Direction.HORIZONTAL, Direction.VERTICAL)
    if directions is None:
        return DIRECTION_ORDER
    directions = tuple(directions)
    if not directions or any(d not in DIRECTION_ORDER for d in directions):
        raise ValueError(f"invalid direction set {directions}")
    if len(set(directions)) != len(directions):
        raise ValueError(f"duplicate directions in {directions}")
    return directions


def _pixels(img: GrayImage):
    for y in range(img.height):
        for x in range(img.width):
            yield x, y


def build_variant_circuits(
    kind: VariantKind, img: GrayImage, directions=None
) -> list[VariantCircuit]:
    """Build the ordered circuit list of a variant for a whole image.

    Bookkeeping slots map every (circuit, clbit) back to its pixel and
    direction.  Mid-circuit blocks are separated by a reset so each block
    starts from |0> and every marginal matches the standalone circuit.
    """
    dirs = _resolve_directions(kind, directions)
    out: list[VariantCircuit] = []

    if kind is VariantKind.TWOD:
        for direction in dirs:
            gamma = mask_2d(direction).angles
            for x, y in _pixels(img):
                patch = extract_patch_2x2(img, x, y)
                theta = tuple(float(a) for a in gray_to_angle(patch))
                circ = build_2d_circuit(NeuronSpec(theta, gamma))
                out.append(VariantCircuit(circ, (MeasureSlot(0, x, y, direction),)))
        return out

    if kind in (VariantKind.STD32T, VariantKind.STD50):
        for direction in dirs:
            for x, y in _pixels(img):
                circ = build_1d_circuit(NeuronSpec(_pair_angles(img, x, y, direction), _GAMMA_1D))
                out.append(VariantCircuit(circ, (MeasureSlot(0, x, y, direction),)))
        return out

    if kind is VariantKind.SEQ50:
        for x, y in _pixels(img):
            circ = Circuit(1, len(dirs))
            slots = []
            for k, direction in enumerate(dirs):
                _append_1d_block(circ, 0, _pair_angles(img, x, y, direction), _GAMMA_1D)
                circ.measure(0, k)
                circ.reset(0)
                slots.append(MeasureSlot(k, x, y, direction))
            out.append(VariantCircuit(circ, tuple(slots)))
        return out

    if kind is VariantKind.PARA50:
        for x, y in _pixels(img):
            circ = Circuit(len(dirs), len(dirs))
            slots = []
            for k, direction in enumerate(dirs):
                _append_1d_block(circ, k, _pair_angles(img, x, y, direction), _GAMMA_1D)
                circ.measure(k, k)
                slots.append(MeasureSlot(k, x, y, direction))
            out.append(VariantCircuit(circ, tuple(slots)))
        return out

    if kind is VariantKind.PARA50_3PIX:
        pixels = list(_pixels(img))
        for start in range(0, len(pixels), 3):
            group = pixels[start : start + 3]
            nd = len(dirs)
            circ = Circuit(3 * nd, nd * len(group))
            slots = []
            for s, (x, y) in enumerate(group):
                for k, direction in enumerate(dirs):
                    qubit = nd * s + k
                    _append_1d_block(circ, qubit, _pair_angles(img, x, y, direction), _GAMMA_1D)
                    circ.measure(qubit, qubit)
                    slots.append(MeasureSlot(qubit, x, y, direction))
            out.append(VariantCircuit(circ, tuple(slots)))
        return out

    if kind is VariantKind.SEQPARA50:
        pixels = list(_pixels(img))
        nd = len(dirs)
        for start in range(0, len(pixels), 4):
            group = pixels[start : start + 4]
            circ = Circuit(2, nd * len(group))
            slots = []
            # slots 0,1 run sequentially on qubit 0; slots 2,3 on qubit 1
            for s, (x, y) in enumerate(group):
                qubit = s // 2
                for k, direction in enumerate(dirs):
                    clbit = nd * s + k
                    _append_1d_block(circ, qubit, _pair_angles(img, x, y, direction), _GAMMA_1D)
                    circ.measure(qubit, clbit)
                    circ.reset(qubit)
                    slots.append(MeasureSlot(clbit, x, y, direction))
            out.append(VariantCircuit(circ, tuple(slots)))
        return out

    raise ValueError(f"unknown variant kind {kind}")


# Pixel pairs with distinct values in every direction keep all rotation
# angles away from multiples of 2*pi, so no gate merges to identity.
_PROBE_PAIR = (64, 191)
_PROBE_PATCH = (64, 191, 32, 223)


def reference_circuit(kind: VariantKind) -> Circuit:
    """Canonical circuit of a variant with representative non-degenerate angles.

    Used for gate-count and depth reporting; interior pixels of real
    images produce exactly this shape.
    """
    theta = tuple(float(a) for a in gray_to_angle(_PROBE_PAIR))
    if kind is VariantKind.TWOD:
        patch = tuple(float(a) for a in gray_to_angle(_PROBE_PATCH))
        return build_2d_circuit(NeuronSpec(patch, mask_2d(Direction.HORIZONTAL).angles))
    if kind in (VariantKind.STD32T, VariantKind.STD50):
        return build_1d_circuit(NeuronSpec(theta, _GAMMA_1D))
    if kind is VariantKind.SEQ50:
        circ = Circuit(1, 3)
        for k in range(3):
            _append_1d_block(circ, 0, theta, _GAMMA_1D)
            circ.measure(0, k)
            circ.reset(0)
        return circ
    if kind is VariantKind.PARA50:
        circ = Circuit(3, 3)
        for k in range(3):
            _append_1d_block(circ, k, theta, _GAMMA_1D)
            circ.measure(k, k)
        return circ
    if kind is VariantKind.PARA50_3PIX:
        circ = Circuit(9, 9)
        for q in range(9):
            _append_1d_block(circ, q, theta, _GAMMA_1D)
            circ.measure(q, q)
        return circ
    if kind is VariantKind.SEQPARA50:
        circ = Circuit(2, 12)
        for s in range(4):
            qubit = s // 2
            for k in range(3):
                _append_1d_block(circ, qubit, theta, _GAMMA_1D)
                circ.measure(qubit, 3 * s + k)
                circ.reset(qubit)
        return circ
    raise ValueError(f"unknown variant kind {kind}")
