"""End-to-end edge detection: batch, execute, assemble, threshold, score.

A variant run builds the full circuit list for an image, packs it into
jobs under the backend-style circuit and measurement limits, executes
every circuit (sampled with per-circuit derived seeds, or exactly),
collects the per-pixel/direction outcome probabilities into images,
combines directions by pixel-wise maximum, scales to gray, and applies an
Otsu threshold.  The analytic closed form provides the reference image
for Hellinger fidelity scoring.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .circuit import Circuit
from .encoding import mask_1d
from .image import (
    BinaryImage,
    Direction,
    GrayImage,
    ProbabilityImage,
    gray_histogram,
    otsu_threshold,
    pixelwise_max,
    to_gray,
)
from .neuron import (
    DIRECTION_ORDER,
    NeuronSpec,
    VariantKind,
    _pair_angles,
    analytic_probability,
    build_variant_circuits,
)
from .simulator import prob_of, run_exact, sample_counts

#: Documented default master seed; fixed so tutorial commands reproduce.
DEFAULT_SEED = 0xC0FFEE

#: Backend-style job limits (circuits per job, measurements per job).
DEFAULT_CIRCUITS_PER_JOB = 300
DEFAULT_MEASUREMENTS_PER_JOB = 16000


@dataclass
class VariantConfig:
    """Execution parameters of one variant run."""

    kind: VariantKind
    shots: int | None = None
    circuits_per_job: int = DEFAULT_CIRCUITS_PER_JOB
    measurements_per_job: int = DEFAULT_MEASUREMENTS_PER_JOB
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.shots is None:
            self.shots = self.kind.default_shots
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.circuits_per_job < 1 or self.measurements_per_job < 1:
            raise ValueError("job limits must be >= 1")


@dataclass(frozen=True)
class Job:
    """Contiguous circuit-index range [start, stop) executed together."""

    start: int
    stop: int
    n_measurements: int

    @property
    def n_circuits(self) -> int:
        return self.stop - self.start


@dataclass
class JobPlan:
    jobs: list[Job] = field(default_factory=list)

    @property
    def n_jobs(self) -> int:
        return len(self.jobs)

    @property
    def n_circuits(self) -> int:
        return sum(j.n_circuits for j in self.jobs)

    @property
    def n_measurements(self) -> int:
        return sum(j.n_measurements for j in self.jobs)


def plan_jobs(circuits: list[Circuit], config: VariantConfig) -> JobPlan:
    """Greedy maximal packing in circuit order under both job limits."""
    plan = JobPlan()
    start = 0
    meas = 0
    for i, circ in enumerate(circuits):
        m = circ.n_measurements
        if m > config.measurements_per_job:
            raise ValueError(
                f"circuit {i} has {m} measurements, over the per-job limit "
                f"{config.measurements_per_job}"
            )
        full = (i - start) >= config.circuits_per_job or meas + m > config.measurements_per_job
        if full and i > start:
            plan.jobs.append(Job(start, i, meas))
            start, meas = i, 0
        meas += m
    if start < len(circuits):
        plan.jobs.append(Job(start, len(circuits), meas))
    return plan


def derive_seed(master_seed: int, circuit_index: int) -> int:
    """Per-circuit seed; independent of batch order and parallelism."""
    ss = np.random.SeedSequence([int(master_seed), int(circuit_index)])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class EdgeResult:
    """Everything a variant run produces for one image."""

    kind: VariantKind
    directions: dict[Direction, ProbabilityImage]
    combined: ProbabilityImage
    gray: GrayImage
    threshold: int
    edges: BinaryImage
    fidelity: float | None = None


def run_variant(
    img: GrayImage,
    config: VariantConfig,
    exact: bool = False,
    directions=None,
    with_fidelity: bool = False,
) -> EdgeResult:
    """Detect edges in ``img`` with the configured variant.

    ``exact`` replaces shot sampling by the exact outcome distribution.
    ``directions`` restricts the pair directions of the one-dimensional
    variants (default: diagonal, horizontal, vertical).  The combined
    image is the pixel-wise maximum over directions.
    """
    kind = config.kind
    variant_circuits = build_variant_circuits(kind, img, directions)
    plan = plan_jobs([vc.circuit for vc in variant_circuits], config)

    used_dirs: list[Direction] = []
    per_dir: dict[Direction, np.ndarray] = {}
    edge_value = 1 if kind is VariantKind.TWOD else 0
    for job in plan.jobs:
        for ci in range(job.start, job.stop):
            vc = variant_circuits[ci]
            if exact:
                outcome = run_exact(vc.circuit)
            else:
                outcome = sample_counts(vc.circuit, config.shots, derive_seed(config.seed, ci))
            for slot in vc.slots:
                p = prob_of(outcome, slot.clbit, edge_value)
                if slot.direction not in per_dir:
                    per_dir[slot.direction] = np.zeros((img.height, img.width))
                    used_dirs.append(slot.direction)
                per_dir[slot.direction][slot.y, slot.x] = p

    dir_images = {d: ProbabilityImage(per_dir[d]) for d in used_dirs}
    combined = pixelwise_max(list(dir_images.values()))
    gray = to_gray(combined)
    threshold, edges = otsu_threshold(gray)

    fidelity = None
    if with_fidelity:
        if kind is VariantKind.TWOD:
            raise ValueError("fidelity scoring is defined for the one-dimensional variants")
        fidelity = hellinger_fidelity(gray, reference_image(img, directions))

    return EdgeResult(kind, dir_images, combined, gray, threshold, edges, fidelity)


def reference_image(img: GrayImage, directions=None) -> GrayImage:
    """Noise-free reference: closed-form pair probabilities, combined and scaled.

    Matches an exact-mode one-dimensional variant run bit for bit after
    gray scaling.
    """
    dirs = tuple(directions) if directions is not None else DIRECTION_ORDER
    gamma = mask_1d(Direction.HORIZONTAL).angles
    images = []
    for direction in dirs:
        data = np.zeros((img.height, img.width))
        for y in range(img.height):
            for x in range(img.width):
                theta = _pair_angles(img, x, y, direction)
                data[y, x] = analytic_probability(NeuronSpec(theta, gamma))
        images.append(ProbabilityImage(data))
    return to_gray(pixelwise_max(images))


def hellinger_fidelity(a: GrayImage, b: GrayImage) -> float:
    """Similarity of the two gray value histograms, in [0, 1].

    Histograms are normalized to probability vectors p and q; the score is
    (sum_j sqrt(p_j * q_j))**2, i.e. 1 minus the squared Hellinger
    distance, squared.
    """
    p = gray_histogram(a).astype(np.float64)
    q = gray_histogram(b).astype(np.float64)
    p /= p.sum()
    q /= q.sum()
    return float(np.sum(np.sqrt(p * q)) ** 2)


@dataclass(frozen=True)
class FidelityRow:
    variant: str
    seed: int
    fidelity: float


def compare_variants(
    img: GrayImage,
    kinds: list[VariantKind],
    seeds: list[int],
    exact: bool = False,
    shots: int | None = None,
) -> list[FidelityRow]:
    """Fidelity of every (variant, seed) run against the analytic reference."""
    rows = []
    for kind in kinds:
        for seed in seeds:
            config = VariantConfig(kind, shots=shots, seed=seed)
            result = run_variant(img, config, exact=exact, with_fidelity=True)
            rows.append(FidelityRow(kind.cli_name, seed, result.fidelity))
    return rows


def write_histogram_csv(path: str | Path, img: GrayImage) -> None:
    """Gray histogram as 'bin,count' rows."""
    hist = gray_histogram(img)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin", "count"])
        for v in range(256):
            writer.writerow([v, int(hist[v])])


def write_fidelity_csv(path: str | Path, rows: list[FidelityRow]) -> None:
    """Fidelity table as 'variant,seed,fidelity' rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["variant", "seed", "fidelity"])
        for row in rows:
            writer.writerow([row.variant, row.seed, f"{row.fidelity:.6f}"])
