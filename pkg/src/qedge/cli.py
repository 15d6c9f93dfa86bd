"""Command-line front end.

Subcommands: ``detect`` (run edge detection on a PGM image), ``compare``
(fidelity table across variants and seeds), ``gates`` (basis gate counts
per variant), and ``plan`` (job batching arithmetic).  All runs are
deterministic under fixed flags; machine-readable outputs go to files,
log text to the console.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from .image import Direction, GrayImage, load_pgm, save_pgm, to_gray
from .neuron import ONE_DIM_KINDS, VariantKind, build_variant_circuits, reference_circuit
from .pipeline import (
    DEFAULT_CIRCUITS_PER_JOB,
    DEFAULT_MEASUREMENTS_PER_JOB,
    DEFAULT_SEED,
    VariantConfig,
    compare_variants,
    plan_jobs,
    run_variant,
    write_fidelity_csv,
    write_histogram_csv,
)
from .simulator import kernel_name
from .transpile import decompose, gate_counts, optimize

_VARIANTS = {k.cli_name: k for k in VariantKind}

_DIRECTION_SETS = {
    "hv": (Direction.HORIZONTAL, Direction.VERTICAL),
    "hvd": None,  # builder default: diagonal, horizontal, vertical
}

#: published basis gate targets per variant: (sx, rz, depth or None)
GATE_TARGETS = {
    "std32t": (2, 3, 6),
    "std50": (2, 3, 6),
    "seq50": (6, 9, None),
    "para50": (6, 9, None),
    "para50-3pix": (18, 27, None),
    "seqpara50": (24, 36, None),
}


def _add_job_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--circuits-per-job", type=int, default=DEFAULT_CIRCUITS_PER_JOB)
    parser.add_argument("--meas-per-job", type=int, default=DEFAULT_MEASUREMENTS_PER_JOB)


def _config(args, kind: VariantKind) -> VariantConfig:
    return VariantConfig(
        kind,
        shots=args.shots,
        circuits_per_job=args.circuits_per_job,
        measurements_per_job=args.meas_per_job,
        seed=args.seed,
    )


def cmd_detect(args) -> int:
    img = load_pgm(args.infile)
    kind = _VARIANTS[args.variant]
    if kind is VariantKind.TWOD:
        if args.directions is not None:
            raise ValueError("--directions applies to the one-dimensional variants only")
        directions = None
    else:
        directions = _DIRECTION_SETS[args.directions or "hvd"]
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fmt = "P5" if args.binary else "P2"

    config = _config(args, kind)
    started = time.perf_counter()
    result = run_variant(img, config, exact=args.exact, directions=directions)
    elapsed = time.perf_counter() - started

    edges_gray = GrayImage(np.where(result.edges.data, 255, 0).astype(np.uint8))
    save_pgm(result.gray, out_dir / "combined.pgm", fmt)
    save_pgm(edges_gray, out_dir / "edges.pgm", fmt)
    write_histogram_csv(out_dir / "histogram.csv", result.gray)
    if args.save_directions:
        for direction, prob in result.directions.items():
            save_pgm(to_gray(prob), out_dir / f"direction_{direction.short_name}.pgm", fmt)

    mode = "exact" if args.exact else f"{config.shots} shots"
    print(f"variant {args.variant} ({mode}, kernel {kernel_name()})")
    print(f"otsu threshold: {result.threshold}")
    print(f"edge pixels: {int(result.edges.data.sum())} of {img.width * img.height}")
    print(f"elapsed: {elapsed:.2f}s")
    return 0


def cmd_compare(args) -> int:
    img = load_pgm(args.infile)
    kinds = [_VARIANTS[v] for v in args.variants] if args.variants else list(ONE_DIM_KINDS)
    seeds = [args.seed + k for k in range(args.seeds)]
    rows = compare_variants(img, kinds, seeds, exact=args.exact, shots=args.shots)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_fidelity_csv(out, rows)
    print(f"wrote {len(rows)} rows ({len(kinds)} variants x {len(seeds)} seeds) to {out}")
    return 0


def cmd_gates(args) -> int:
    failures = 0
    for name in (*GATE_TARGETS, "twod"):
        circ = optimize(decompose(reference_circuit(_VARIANTS[name])))
        counts, depth = gate_counts(circ)
        sx, rz = counts.get("sx", 0), counts.get("rz", 0)
        extra = "".join(
            f", {k.upper()}: {v}"
            for k, v in sorted(counts.items())
            if k not in ("sx", "rz", "measure", "reset")
        )
        print(f"{name}: SX: {sx}, Rz: {rz}{extra}, depth {depth}")
        if args.check and name in GATE_TARGETS:
            want_sx, want_rz, want_depth = GATE_TARGETS[name]
            ok = sx == want_sx and rz == want_rz and (want_depth is None or depth == want_depth)
            if not ok:
                failures += 1
                print(
                    f"  MISMATCH: expected SX {want_sx}, Rz {want_rz}"
                    + (f", depth {want_depth}" if want_depth is not None else ""),
                    file=sys.stderr,
                )
    return 1 if failures else 0


def cmd_plan(args) -> int:
    if args.infile:
        img = load_pgm(args.infile)
    else:
        img = GrayImage(np.zeros((args.height, args.width), dtype=np.uint8))
    kind = _VARIANTS[args.variant]
    config = _config(args, kind)
    circuits = [vc.circuit for vc in build_variant_circuits(kind, img)]
    plan = plan_jobs(circuits, config)
    print(f"variant {args.variant} on {img.width}x{img.height}")
    print(f"circuits {plan.n_circuits}, measurements {plan.n_measurements}, jobs {plan.n_jobs}")
    print(f"limits: {config.circuits_per_job} circuits/job, {config.measurements_per_job} measurements/job")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qedge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_detect = sub.add_parser("detect", help="detect edges in a PGM image")
    p_detect.add_argument("--variant", required=True, choices=sorted(_VARIANTS))
    p_detect.add_argument("--in", dest="infile", required=True)
    p_detect.add_argument("--out-dir", required=True)
    p_detect.add_argument("--shots", type=int, default=None)
    p_detect.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_detect.add_argument("--exact", action="store_true")
    p_detect.add_argument("--directions", choices=("hv", "hvd"), default=None)
    p_detect.add_argument("--binary", action="store_true", help="write P5 instead of P2")
    p_detect.add_argument("--save-directions", action="store_true")
    _add_job_flags(p_detect)
    p_detect.set_defaults(func=cmd_detect)

    p_compare = sub.add_parser("compare", help="fidelity table across variants and seeds")
    p_compare.add_argument("--in", dest="infile", required=True)
    p_compare.add_argument("--out", default="fidelity.csv")
    p_compare.add_argument("--variants", nargs="*", choices=sorted(set(_VARIANTS) - {"twod"}))
    p_compare.add_argument("--seeds", type=int, default=24, help="number of seeds per variant")
    p_compare.add_argument("--seed", type=int, default=DEFAULT_SEED, help="first seed")
    p_compare.add_argument("--shots", type=int, default=None)
    p_compare.add_argument("--exact", action="store_true")
    _add_job_flags(p_compare)
    p_compare.set_defaults(func=cmd_compare)

    p_gates = sub.add_parser("gates", help="basis gate counts per variant")
    p_gates.add_argument("--check", action="store_true", help="exit nonzero on target mismatch")
    p_gates.set_defaults(func=cmd_gates)

    p_plan = sub.add_parser("plan", help="job batching arithmetic")
    p_plan.add_argument("--variant", required=True, choices=sorted(_VARIANTS))
    p_plan.add_argument("--in", dest="infile", default=None)
    p_plan.add_argument("--width", type=int, default=30)
    p_plan.add_argument("--height", type=int, default=30)
    p_plan.add_argument("--shots", type=int, default=None)
    p_plan.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_job_flags(p_plan)
    p_plan.set_defaults(func=cmd_plan)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # surface a clean message, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
