#!/usr/bin/env python3
"""Benchmark the compiled simulation kernel against the numpy fallback.

Workloads mirror the hot paths of a detection run: per-circuit shot
sampling (few shots, many circuits and many shots, few circuits) and
exact branch-tree evaluation of the mid-circuit-measurement variants.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

from qedge.image import GrayImage
from qedge.neuron import VariantKind, build_variant_circuits
from qedge.samples import gray_sample
from qedge.simulator import available_kernels, run_exact, sample_counts, use_kernel


def _crop(img: GrayImage, size: int) -> GrayImage:
    return GrayImage(img.data[:size, :size])


def workloads():
    small = _crop(gray_sample(), 12)
    tiny = _crop(gray_sample(), 6)
    std = [vc.circuit for vc in build_variant_circuits(VariantKind.STD50, small)]
    seqpara = [vc.circuit for vc in build_variant_circuits(VariantKind.SEQPARA50, small)]
    para3 = [vc.circuit for vc in build_variant_circuits(VariantKind.PARA50_3PIX, tiny)]
    return [
        ("sample 50 shots, 432 two-pixel circuits", lambda: [
            sample_counts(c, 50, seed=i) for i, c in enumerate(std)
        ]),
        ("sample 32000 shots, 36 two-pixel circuits", lambda: [
            sample_counts(c, 32000, seed=i) for i, c in enumerate(std[:36])
        ]),
        ("sample 50 shots, 36 nine-qubit circuits", lambda: [
            sample_counts(c, 50, seed=i) for i, c in enumerate(para3[:36])
        ]),
        ("exact, 36 mid-circuit 12-measurement circuits", lambda: [
            run_exact(c) for c in seqpara
        ]),
    ]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    kernels = available_kernels()
    print(f"kernels: {', '.join(kernels)}")
    if "cython" not in kernels:
        print("compiled kernel not built; timing the fallback only")

    rows = []
    for label, fn in workloads():
        timings = {}
        for kernel in kernels:
            with use_kernel(kernel):
                fn()  # warm up caches
                best = min(
                    _timed(fn) for _ in range(args.repeats)
                )
            timings[kernel] = best
        rows.append((label, timings))

    width = max(len(label) for label, _ in rows)
    header = f"{'workload':<{width}}  " + "  ".join(f"{k:>10}" for k in kernels)
    print(header)
    print("-" * len(header))
    for label, timings in rows:
        cells = "  ".join(f"{timings[k] * 1e3:>8.1f}ms" for k in kernels)
        line = f"{label:<{width}}  {cells}"
        if "cython" in timings and "python" in timings:
            line += f"  ({timings['python'] / timings['cython']:.1f}x)"
        print(line)
    return 0


def _timed(fn) -> float:
    started = time.perf_counter()
    fn()
    return time.perf_counter() - started


if __name__ == "__main__":
    raise SystemExit(main())
