import csv
import math

import numpy as np
import pytest

from qedge.circuit import Circuit
from qedge.image import Direction, GrayImage
from qedge.neuron import ONE_DIM_KINDS, VariantKind, build_variant_circuits
from qedge.pipeline import (
    VariantConfig,
    compare_variants,
    derive_seed,
    hellinger_fidelity,
    plan_jobs,
    reference_image,
    run_variant,
    write_fidelity_csv,
    write_histogram_csv,
)
from qedge.samples import binary_sample, gray_sample

HV = (Direction.HORIZONTAL, Direction.VERTICAL)


def build_circuits(kind, img):
    return [vc.circuit for vc in build_variant_circuits(kind, img)]


class TestPlanJobs:
    @pytest.mark.parametrize(
        "kind,circuits,jobs",
        [
            (VariantKind.STD32T, 2700, 9),
            (VariantKind.STD50, 2700, 9),
            (VariantKind.SEQ50, 900, 3),
            (VariantKind.PARA50, 900, 3),
            (VariantKind.PARA50_3PIX, 300, 1),
            (VariantKind.SEQPARA50, 225, 1),
        ],
    )
    def test_30x30_reference_numbers(self, kind, circuits, jobs):
        img = gray_sample()
        plan = plan_jobs(build_circuits(kind, img), VariantConfig(kind))
        assert plan.n_circuits == circuits
        assert plan.n_jobs == jobs

    def test_jobs_partition_in_order(self):
        img = gray_sample()
        config = VariantConfig(VariantKind.STD50)
        plan = plan_jobs(build_circuits(VariantKind.STD50, img), config)
        assert plan.jobs[0].start == 0
        for a, b in zip(plan.jobs, plan.jobs[1:]):
            assert a.stop == b.start
        assert plan.jobs[-1].stop == plan.n_circuits
        assert all(j.n_circuits <= config.circuits_per_job for j in plan.jobs)
        assert all(j.n_measurements <= config.measurements_per_job for j in plan.jobs)

    def test_measurement_limit_packs_tighter(self):
        config = VariantConfig(VariantKind.SEQ50, measurements_per_job=7)
        circuits = build_circuits(VariantKind.SEQ50, GrayImage(np.zeros((2, 2))))
        plan = plan_jobs(circuits, config)  # 4 circuits x 3 measurements
        assert [j.n_circuits for j in plan.jobs] == [2, 2]

    def test_64x64_measurement_total_fits_budget(self):
        img = GrayImage(np.zeros((64, 64)))
        config = VariantConfig(VariantKind.SEQPARA50)
        plan = plan_jobs(build_circuits(VariantKind.SEQPARA50, img), config)
        assert plan.n_measurements == 3 * 64 * 64 == 12288
        assert plan.n_measurements <= config.measurements_per_job

    def test_single_circuit_over_limit_rejected(self):
        config = VariantConfig(VariantKind.SEQPARA50, measurements_per_job=11)
        circ = Circuit(1, 12)
        for k in range(12):
            circ.h(0).measure(0, k)
        with pytest.raises(ValueError):
            plan_jobs([circ], config)


class TestSeeds:
    def test_derive_seed_deterministic(self):
        assert derive_seed(7, 3) == derive_seed(7, 3)

    def test_derive_seed_varies(self):
        seeds = {derive_seed(7, i) for i in range(100)}
        assert len(seeds) == 100

    def test_run_reproducible(self):
        img = GrayImage(np.random.default_rng(0).integers(0, 256, (5, 5)))
        a = run_variant(img, VariantConfig(VariantKind.SEQ50, seed=5))
        b = run_variant(img, VariantConfig(VariantKind.SEQ50, seed=5))
        assert np.array_equal(a.gray.data, b.gray.data)

    def test_job_boundaries_do_not_change_results(self):
        img = GrayImage(np.random.default_rng(1).integers(0, 256, (5, 5)))
        a = run_variant(img, VariantConfig(VariantKind.STD50, seed=5, circuits_per_job=300))
        b = run_variant(img, VariantConfig(VariantKind.STD50, seed=5, circuits_per_job=7))
        assert np.array_equal(a.gray.data, b.gray.data)


class TestRunVariantExact:
    def test_constant_image_has_no_edges(self):
        img = GrayImage(np.full((6, 6), 77))
        res = run_variant(img, VariantConfig(VariantKind.PARA50), exact=True)
        assert res.combined.data.max() < 1e-12
        assert not res.gray.data.any()
        assert not res.edges.data.any()

    def test_step_image_horizontal_response(self):
        data = np.zeros((6, 6), dtype=np.uint8)
        data[:, 3:] = 255  # step between columns 2 and 3
        res = run_variant(GrayImage(data), VariantConfig(VariantKind.STD50), exact=True)
        h = res.directions[Direction.HORIZONTAL].data
        v = res.directions[Direction.VERTICAL].data
        assert np.allclose(h[:, 2], 1.0, atol=1e-12)
        assert np.allclose(np.delete(h, 2, axis=1), 0.0, atol=1e-12)
        assert np.allclose(v, 0.0, atol=1e-12)

    @pytest.mark.parametrize("kind", ONE_DIM_KINDS)
    def test_exact_equals_reference(self, kind):
        img = GrayImage(np.random.default_rng(2).integers(0, 256, (6, 6)))
        res = run_variant(img, VariantConfig(kind), exact=True)
        ref = reference_image(img)
        assert np.array_equal(res.gray.data, ref.data)

    def test_exact_equals_reference_hv(self):
        img = GrayImage(np.random.default_rng(3).integers(0, 256, (6, 6)))
        res = run_variant(img, VariantConfig(VariantKind.SEQ50), exact=True, directions=HV)
        assert np.array_equal(res.gray.data, reference_image(img, HV).data)

    def test_reference_single_pair_value(self):
        img = GrayImage(np.array([[0, 128]]))
        ref = reference_image(img, directions=(Direction.HORIZONTAL,))
        expected = int(math.floor(math.sin(64 * math.pi / 255) ** 2 * 255 + 0.5))
        assert ref.data[0, 0] == expected
        assert ref.data[0, 1] == 0  # mirrored partner, zero derivative

    def test_combined_is_pixelwise_max(self):
        img = GrayImage(np.random.default_rng(4).integers(0, 256, (5, 5)))
        res = run_variant(img, VariantConfig(VariantKind.PARA50), exact=True)
        stacked = np.stack([p.data for p in res.directions.values()])
        assert np.array_equal(res.combined.data, stacked.max(axis=0))

    def test_twod_directions_fixed(self):
        img = GrayImage(np.zeros((4, 4)))
        res = run_variant(img, VariantConfig(VariantKind.TWOD), exact=True)
        assert set(res.directions) == set(HV)
        with pytest.raises(ValueError):
            run_variant(img, VariantConfig(VariantKind.TWOD), exact=True, directions=HV)

    def test_twod_fidelity_rejected(self):
        img = GrayImage(np.zeros((4, 4)))
        with pytest.raises(ValueError):
            run_variant(img, VariantConfig(VariantKind.TWOD), exact=True, with_fidelity=True)


class TestHellinger:
    def test_identical_images(self):
        img = gray_sample()
        assert hellinger_fidelity(img, img) == pytest.approx(1.0, abs=1e-12)

    def test_disjoint_histograms(self):
        a = GrayImage(np.zeros((4, 4)))
        b = GrayImage(np.full((4, 4), 255))
        assert hellinger_fidelity(a, b) == 0.0

    def test_half_overlap(self):
        a = GrayImage(np.array([[0, 255]]))  # p = (1/2, 1/2)
        b = GrayImage(np.array([[0, 0]]))  # q = (1, 0)
        assert hellinger_fidelity(a, b) == pytest.approx(0.5, abs=1e-12)

    def test_symmetric(self):
        rng = np.random.default_rng(5)
        a = GrayImage(rng.integers(0, 256, (6, 6)))
        b = GrayImage(rng.integers(0, 256, (6, 6)))
        assert hellinger_fidelity(a, b) == pytest.approx(hellinger_fidelity(b, a), abs=1e-14)


class TestCompareVariants:
    def test_exact_mode_all_ones(self):
        img = GrayImage(np.random.default_rng(6).integers(0, 256, (4, 4)))
        rows = compare_variants(img, list(ONE_DIM_KINDS), seeds=[1, 2], exact=True)
        assert len(rows) == len(ONE_DIM_KINDS) * 2
        assert all(row.fidelity == pytest.approx(1.0, abs=1e-12) for row in rows)

    def test_row_fields(self):
        img = GrayImage(np.random.default_rng(7).integers(0, 256, (3, 3)))
        rows = compare_variants(img, [VariantKind.SEQ50], seeds=[11], shots=20)
        assert rows[0].variant == "seq50"
        assert rows[0].seed == 11
        assert 0.0 <= rows[0].fidelity <= 1.0


class TestCsvOutputs:
    def test_histogram_csv(self, tmp_path):
        path = tmp_path / "hist.csv"
        write_histogram_csv(path, GrayImage(np.array([[0, 0, 7]])))
        rows = list(csv.reader(path.open()))
        assert rows[0] == ["bin", "count"]
        assert rows[1] == ["0", "2"]
        assert rows[8] == ["7", "1"]
        assert len(rows) == 257

    def test_fidelity_csv(self, tmp_path):
        img = GrayImage(np.random.default_rng(8).integers(0, 256, (3, 3)))
        rows = compare_variants(img, [VariantKind.STD50], seeds=[1], exact=True)
        path = tmp_path / "fid.csv"
        write_fidelity_csv(path, rows)
        lines = list(csv.reader(path.open()))
        assert lines[0] == ["variant", "seed", "fidelity"]
        assert lines[1] == ["std50", "1", "1.000000"]


class TestSampledBehavior:
    def test_binary_sample_sampling_is_noise_free(self):
        # binary inputs give outcome probabilities of exactly 0 or 1, so
        # even 50 shots reproduce the exact image
        img = binary_sample()
        sampled = run_variant(img, VariantConfig(VariantKind.SEQ50, seed=3))
        exact = run_variant(img, VariantConfig(VariantKind.SEQ50), exact=True)
        assert np.array_equal(sampled.gray.data, exact.gray.data)

    def test_fidelity_improves_with_shots_in_median(self):
        img = GrayImage(gray_sample().data[:16, :16])
        seeds = list(range(10))
        lo = [
            run_variant(img, VariantConfig(VariantKind.STD50, seed=s), with_fidelity=True).fidelity
            for s in seeds
        ]
        hi = [
            run_variant(img, VariantConfig(VariantKind.STD32T, seed=s), with_fidelity=True).fidelity
            for s in seeds
        ]
        assert np.median(hi) >= np.median(lo)
