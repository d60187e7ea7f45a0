#!/usr/bin/env python3
"""Benchmark the curvature-density sampling kernel: numba JIT vs pure numpy.

Both backends compute identical bytes (asserted below on every case), so
this table is the whole story of the backend switch -- it buys speed only.

Usage:
    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --samples 500000 --repeats 7
    python3 benchmarks/bench_kernels.py --threads 8
"""

import argparse
import time

import numpy as np

from jetcalc.curvature import validate_tensor
from jetcalc.morse import backend as _backend
from jetcalc.morse.sampling import draw_eta

CASES = [
    # (n, r, k, variant) -- fiber dimension and jet order drive kernel cost
    (1, 1, 1, "gg"),
    (1, 2, 1, "gg"),
    (2, 2, 2, "gg"),
    (2, 3, 3, "gg"),
    (3, 3, 4, "gg"),
    (2, 3, 3, "inv"),
]


def random_tensor(rng, n, r):
    raw = (rng.standard_normal((n, n, r, r))
           + 1j * rng.standard_normal((n, n, r, r)))
    sym = 0.5 * (raw + np.conj(np.transpose(raw, (1, 0, 3, 2))))
    return validate_tensor(sym)


def build_inputs(rng, n, r, k, variant, N, seed):
    c = random_tensor(rng, n, r)
    eta = draw_eta(seed, N, k, r)
    from jetcalc.morse.integrate import MetricParams
    params = MetricParams.default_for(k)
    exps = np.array([params.p // s for s in range(1, k + 1)], dtype=np.int64)
    coefs = np.array([1.0 / s for s in range(1, k + 1)])
    base = np.zeros((n, n), dtype=np.complex128)
    if variant == "inv":
        for a in range(r):
            base = base + c.c[:, :, a, a]
        base = base * (1.0 / r)
    return c, eta, exps, coefs, base, 1 if variant == "inv" else 0


def run_once(kernel, inputs, N, n):
    c, eta, exps, coefs, base, vinv = inputs
    dets = np.empty(N)
    negs = np.empty(N, dtype=np.int64)
    zeros = np.empty(N, dtype=np.int64)
    t0 = time.perf_counter_ns()
    kernel.compute_samples(c.c, eta, exps, coefs, base, vinv,
                           dets, negs, zeros)
    return (time.perf_counter_ns() - t0), dets, negs, zeros


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=200000,
                    help="samples per timed call (default 200000)")
    ap.add_argument("--repeats", type=int, default=5,
                    help="timed calls per case; median reported (default 5)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1,
                    help="numba worker count (numpy backend ignores it)")
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    _, numba_kernel = _backend.get_kernel("numba")
    _, numpy_kernel = _backend.get_kernel("numpy")
    if numba_kernel is numpy_kernel:
        print("numba backend unavailable; nothing to compare")
        return 1
    _backend.apply_threads("numba", args.threads)

    N = args.samples
    print(f"samples/call: {N}   repeats: {args.repeats}   "
          f"threads: {args.threads}")
    print()
    header = (f"{'case':<22} {'numba us/sample':>16} {'numpy us/sample':>16} "
              f"{'speedup':>8}")
    print(header)
    print("-" * len(header))

    for n, r, k, variant in CASES:
        inputs = build_inputs(rng, n, r, k, variant, N, args.seed)
        # warm the JIT (and the numpy path's allocations) before timing
        _, d0, n0, z0 = run_once(numba_kernel, inputs, N, n)
        _, d1, n1, z1 = run_once(numpy_kernel, inputs, N, n)
        assert np.array_equal(d0, d1) and np.array_equal(n0, n1) \
            and np.array_equal(z0, z1), "backends disagree -- bug"

        times = {"numba": [], "numpy": []}
        for _ in range(args.repeats):
            times["numba"].append(run_once(numba_kernel, inputs, N, n)[0])
            times["numpy"].append(run_once(numpy_kernel, inputs, N, n)[0])
        med = {name: sorted(v)[len(v) // 2] for name, v in times.items()}
        per = {name: t / N / 1000.0 for name, t in med.items()}
        label = f"n={n} r={r} k={k} {variant}"
        print(f"{label:<22} {per['numba']:>16.3f} {per['numpy']:>16.3f} "
              f"{med['numpy'] / med['numba']:>7.1f}x")

    print()
    print("outputs verified bitwise-identical between backends on every case")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
