import math

import numpy as np
import pytest

from qedge.circuit import Circuit
from qedge.image import Direction, GrayImage, extract_pair
from qedge.neuron import (
    DIRECTION_ORDER,
    ONE_DIM_KINDS,
    NeuronSpec,
    VariantKind,
    analytic_probability,
    build_1d_circuit,
    build_2d_circuit,
    build_input_unitary,
    build_variant_circuits,
    build_weight_unitary,
    reference_circuit,
)
from qedge.simulator import prob_of, run_exact, statevector_of

PI = math.pi


def inner_product_squared(theta, gamma) -> float:
    """Independent oracle: |(1/N) sum_k exp(i(theta_k - gamma_k))|^2."""
    theta, gamma = np.asarray(theta), np.asarray(gamma)
    return float(abs(np.sum(np.exp(1j * (theta - gamma)))) ** 2 / len(theta) ** 2)


class TestInputUnitary:
    def test_all_zero_angles_is_plain_superposition(self):
        state = statevector_of(build_input_unitary((0.0, 0.0, 0.0, 0.0)))
        assert np.allclose(state, np.full(4, 0.5), atol=1e-12)

    def test_single_qubit_black_white(self):
        state = statevector_of(build_input_unitary((0.0, PI)))
        assert np.allclose(state, np.array([1, -1]) / math.sqrt(2), atol=1e-12)

    def test_random_two_qubit_amplitudes(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            theta = rng.uniform(0, PI, 4)
            state = statevector_of(build_input_unitary(tuple(theta)))
            expected = np.exp(1j * (theta - theta[0])) / 2
            assert np.allclose(state, expected, atol=1e-12)

    def test_non_power_of_two_rejected(self):
        with pytest.raises(ValueError):
            build_input_unitary((0.0, 0.0, 0.0))


class TestWeightUnitary:
    def compose(self, theta, gamma):
        circ = Circuit((len(theta) - 1).bit_length())
        circ.extend(build_input_unitary(theta))
        circ.extend(build_weight_unitary(gamma))
        return statevector_of(circ)

    def test_matching_weights_give_unit_probability(self):
        rng = np.random.default_rng(1)
        theta = tuple(rng.uniform(0, PI, 4))
        state = self.compose(theta, theta)
        assert abs(state[-1]) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_single_qubit_case(self):
        state = self.compose((0.0, 0.0), (0.0, PI))
        assert abs(state[-1]) ** 2 == pytest.approx(0.0, abs=1e-12)

    def test_random_two_qubit_inner_product(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            theta = rng.uniform(0, PI, 4)
            gamma = rng.uniform(0, PI, 4)
            state = self.compose(tuple(theta), tuple(gamma))
            assert abs(state[-1]) ** 2 == pytest.approx(
                inner_product_squared(theta, gamma), abs=1e-12
            )


class TestOneDimCircuit:
    def test_gate_sequence(self):
        spec = NeuronSpec((0.3, 0.9), (0.0, PI))
        ops = build_1d_circuit(spec).ops
        kinds = [op.display_kind for op in ops]
        assert kinds == ["h", "p", "x", "p", "p", "x", "p", "h", "measure"]
        angles = [op.angle for op in ops if op.display_kind == "p"]
        assert angles == [0.3, 0.9, -PI, 0.0]

    def test_matched_pair_gives_one(self):
        dist = run_exact(build_1d_circuit(NeuronSpec((0.0, PI), (0.0, PI))))
        assert dist["0"] == pytest.approx(1.0, abs=1e-12)

    def test_equal_pixels_give_zero(self):
        dist = run_exact(build_1d_circuit(NeuronSpec((0.0, 0.0), (0.0, PI))))
        assert dist.get("0", 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_half_contrast(self):
        dist = run_exact(build_1d_circuit(NeuronSpec((0.0, PI / 2), (0.0, PI))))
        assert dist["0"] == pytest.approx(0.5, abs=1e-12)

    def test_oracle_grid(self):
        # 256-point (theta, gamma) grid: simulated P(0) vs closed form
        values = [0.0, PI / 3, 3 * PI / 4, PI]
        for t0 in values:
            for t1 in values:
                for g0 in values:
                    for g1 in values:
                        spec = NeuronSpec((t0, t1), (g0, g1))
                        dist = run_exact(build_1d_circuit(spec))
                        assert dist.get("0", 0.0) == pytest.approx(
                            analytic_probability(spec), abs=1e-10
                        )

    def test_analytic_matches_inner_product_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            theta = rng.uniform(0, PI, 2)
            gamma = rng.uniform(0, PI, 2)
            spec = NeuronSpec(tuple(theta), tuple(gamma))
            assert analytic_probability(spec) == pytest.approx(
                inner_product_squared(theta, gamma), abs=1e-12
            )

    def test_sin_squared_form_for_derivative_mask(self):
        # with gamma = (0, pi), P(0) depends only on the pixel difference
        gamma = (0.0, PI)
        for c0 in range(0, 256, 15):
            for c1 in range(0, 256, 15):
                spec = NeuronSpec((c0 * PI / 255, c1 * PI / 255), gamma)
                expected = math.sin(PI * (c1 - c0) / 510) ** 2
                assert analytic_probability(spec) == pytest.approx(expected, abs=1e-12)

    def test_sin_squared_against_simulation_all_differences(self):
        gamma = (0.0, PI)
        for diff in range(-255, 256, 5):
            c0 = max(0, -diff)
            c1 = c0 + diff
            spec = NeuronSpec((c0 * PI / 255, c1 * PI / 255), gamma)
            dist = run_exact(build_1d_circuit(spec))
            assert dist.get("0", 0.0) == pytest.approx(
                math.sin(PI * diff / 510) ** 2, abs=1e-10
            )


class TestTwoDimCircuit:
    def test_patch_matching_mask_gives_one(self):
        gamma = (0.0, 0.0, PI, PI)
        dist = run_exact(build_2d_circuit(NeuronSpec(gamma, gamma)))
        assert dist["1"] == pytest.approx(1.0, abs=1e-12)

    def test_constant_patch_vs_derivative_mask_gives_zero(self):
        dist = run_exact(build_2d_circuit(NeuronSpec((0.0,) * 4, (0.0, 0.0, PI, PI))))
        assert dist.get("1", 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_one_differing_pixel_gives_quarter(self):
        dist = run_exact(build_2d_circuit(NeuronSpec((0.0, 0.0, 0.0, PI), (0.0, 0.0, PI, PI))))
        assert dist["1"] == pytest.approx(0.25, abs=1e-12)

    def test_random_angles_match_inner_product(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            theta = rng.uniform(0, PI, 4)
            gamma = rng.uniform(0, PI, 4)
            dist = run_exact(build_2d_circuit(NeuronSpec(tuple(theta), tuple(gamma))))
            assert dist.get("1", 0.0) == pytest.approx(
                inner_product_squared(theta, gamma), abs=1e-10
            )

    def test_global_phase_invariance(self):
        rng = np.random.default_rng(5)
        theta = rng.uniform(0, PI / 2, 4)
        gamma = rng.uniform(0, PI, 4)
        base = run_exact(build_2d_circuit(NeuronSpec(tuple(theta), tuple(gamma))))
        shifted = run_exact(build_2d_circuit(NeuronSpec(tuple(theta + PI / 2), tuple(gamma))))
        assert base.get("1", 0.0) == pytest.approx(shifted.get("1", 0.0), abs=1e-12)

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            build_2d_circuit(NeuronSpec((0.0, PI), (0.0, PI)))


def slot_map(variant_circuits):
    """(x, y, direction) -> (circuit index, clbit)."""
    mapping = {}
    for ci, vc in enumerate(variant_circuits):
        for slot in vc.slots:
            key = (slot.x, slot.y, slot.direction)
            assert key not in mapping
            mapping[key] = (ci, slot.clbit)
    return mapping


class TestVariantStructure:
    @pytest.mark.parametrize(
        "kind,n_circuits,n_qubits,meas_per_circuit",
        [
            (VariantKind.STD32T, 2700, 1, 1),
            (VariantKind.STD50, 2700, 1, 1),
            (VariantKind.SEQ50, 900, 1, 3),
            (VariantKind.PARA50, 900, 3, 3),
            (VariantKind.PARA50_3PIX, 300, 9, 9),
            (VariantKind.SEQPARA50, 225, 2, 12),
        ],
    )
    def test_30x30_circuit_shapes(self, kind, n_circuits, n_qubits, meas_per_circuit):
        rng = np.random.default_rng(6)
        img = GrayImage(rng.integers(0, 256, (30, 30)))
        vcs = build_variant_circuits(kind, img)
        assert len(vcs) == n_circuits
        assert all(vc.circuit.n_qubits == n_qubits for vc in vcs)
        assert all(vc.circuit.n_measurements == meas_per_circuit for vc in vcs)
        mapping = slot_map(vcs)
        assert len(mapping) == 3 * 900

    def test_twod_30x30(self):
        rng = np.random.default_rng(7)
        img = GrayImage(rng.integers(0, 256, (30, 30)))
        vcs = build_variant_circuits(VariantKind.TWOD, img)
        assert len(vcs) == 1800  # 900 circuits for each of the two masks
        assert all(vc.circuit.n_qubits == 3 for vc in vcs)
        assert len(slot_map(vcs)) == 2 * 900

    def test_partial_last_group(self):
        rng = np.random.default_rng(8)
        img = GrayImage(rng.integers(0, 256, (5, 5)))  # 25 pixels
        vcs = build_variant_circuits(VariantKind.SEQPARA50, img)
        assert len(vcs) == 7  # ceil(25 / 4)
        assert vcs[-1].circuit.n_measurements == 3  # one leftover pixel
        vcs3 = build_variant_circuits(VariantKind.PARA50_3PIX, img)
        assert len(vcs3) == 9  # ceil(25 / 3)
        assert vcs3[-1].circuit.n_measurements == 3

    def test_direction_restriction(self):
        rng = np.random.default_rng(9)
        img = GrayImage(rng.integers(0, 256, (4, 4)))
        hv = (Direction.HORIZONTAL, Direction.VERTICAL)
        vcs = build_variant_circuits(VariantKind.SEQ50, img, directions=hv)
        assert all(vc.circuit.n_measurements == 2 for vc in vcs)
        assert {s.direction for vc in vcs for s in vc.slots} == set(hv)

    def test_clbit_order_is_diagonal_horizontal_vertical(self):
        rng = np.random.default_rng(10)
        img = GrayImage(rng.integers(0, 256, (2, 2)))
        vc = build_variant_circuits(VariantKind.SEQ50, img)[0]
        assert [s.direction for s in sorted(vc.slots, key=lambda s: s.clbit)] == list(DIRECTION_ORDER)


class TestSequentialBlocks:
    def test_joint_distribution_is_product_of_blocks(self):
        # reset between blocks makes the three outcomes independent, so the
        # joint equals the product of the per-block closed forms
        rng = np.random.default_rng(13)
        img = GrayImage(rng.integers(0, 256, (3, 3)))
        for vc in build_variant_circuits(VariantKind.SEQ50, img)[:3]:
            dist = run_exact(vc.circuit)
            probs = {}
            for slot in vc.slots:
                c0, c1 = extract_pair(img, slot.x, slot.y, slot.direction)
                spec = NeuronSpec((c0 * PI / 255, c1 * PI / 255), (0.0, PI))
                probs[slot.clbit] = analytic_probability(spec)
            for bits in ("000", "001", "010", "011", "100", "101", "110", "111"):
                expected = 1.0
                for clbit in range(3):
                    bit = int(bits[len(bits) - 1 - clbit])
                    p0 = probs[clbit]
                    expected *= p0 if bit == 0 else 1.0 - p0
                assert dist.get(bits, 0.0) == pytest.approx(expected, abs=1e-10)


class TestVariantConsistency:
    def test_exact_marginals_identical_across_variants(self):
        rng = np.random.default_rng(11)
        img = GrayImage(rng.integers(0, 256, (4, 4)))
        reference: dict[tuple, float] | None = None
        for kind in ONE_DIM_KINDS:
            vcs = build_variant_circuits(kind, img)
            values = {}
            for vc in vcs:
                dist = run_exact(vc.circuit)
                for slot in vc.slots:
                    values[(slot.x, slot.y, slot.direction)] = prob_of(dist, slot.clbit, 0)
            if reference is None:
                reference = values
            else:
                assert values.keys() == reference.keys()
                for key in reference:
                    assert values[key] == pytest.approx(reference[key], abs=1e-10)

    def test_binary_image_levels(self):
        rng = np.random.default_rng(12)
        img = GrayImage(rng.choice([0, 255], size=(5, 5)))
        for vc in build_variant_circuits(VariantKind.STD50, img):
            dist = run_exact(vc.circuit)
            p = prob_of(dist, 0, 0)
            assert min(abs(p - 0.0), abs(p - 1.0)) < 1e-10
        for vc in build_variant_circuits(VariantKind.TWOD, img):
            dist = run_exact(vc.circuit)
            p = prob_of(dist, 0, 1)
            assert min(abs(p), abs(p - 0.25), abs(p - 1.0)) < 1e-10

    def test_global_phase_invariance_one_dim(self):
        spec = NeuronSpec((0.2, 1.1), (0.0, PI))
        shifted = NeuronSpec((0.2 + 0.7, 1.1 + 0.7), (0.0, PI))
        a = run_exact(build_1d_circuit(spec)).get("0", 0.0)
        b = run_exact(build_1d_circuit(shifted)).get("0", 0.0)
        assert a == pytest.approx(b, abs=1e-12)


class TestReferenceCircuits:
    @pytest.mark.parametrize("kind", list(VariantKind))
    def test_shapes(self, kind):
        circ = reference_circuit(kind)
        expected_meas = {
            VariantKind.STD32T: 1,
            VariantKind.STD50: 1,
            VariantKind.SEQ50: 3,
            VariantKind.PARA50: 3,
            VariantKind.PARA50_3PIX: 9,
            VariantKind.SEQPARA50: 12,
            VariantKind.TWOD: 1,
        }[kind]
        assert circ.n_measurements == expected_meas
