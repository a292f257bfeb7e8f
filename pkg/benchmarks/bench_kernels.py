#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-NumPy fallback.

Times the FCFS system-time recursion and both worst-case enumerations on
representative workload sizes and prints a comparison table.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from paoiq import _kernels_py

try:
    from paoiq import _kernels

    BACKENDS = [("cython", _kernels), ("numpy", _kernels_py)]
except ImportError:
    print("compiled extension not available; benchmarking the fallback only")
    BACKENDS = [("numpy", _kernels_py)]


def best_of(repeat, fn, *args):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_lindley(repeat):
    rng = np.random.default_rng(0)
    for n in (10_000, 100_000, 1_000_000):
        t = rng.exponential(2.0, n)
        x = rng.exponential(1.0, n)
        times = {name: best_of(repeat, impl.lindley_system_times, t, x)
                 for name, impl in BACKENDS}
        report(f"lindley n={n:>9,}", times, n)


def bench_exact_single(repeat):
    def grid(impl):
        rng = np.random.default_rng(1)
        for _ in range(2_000):
            mu = rng.uniform(0.5, 2.0)
            impl.exact_single_max(rng.uniform(0.05, 0.95) * mu, mu,
                                  rng.uniform(1.05, 2.0), rng.uniform(0, 10),
                                  rng.uniform(0, 10), 500)
        return None

    times = {name: best_of(repeat, grid, impl) for name, impl in BACKENDS}
    report("exact single 2000x(n=500)", times, 2_000 * 500)


def bench_exact_two(repeat):
    def grid(impl):
        rng = np.random.default_rng(2)
        for _ in range(2_000):
            mu = rng.uniform(0.5, 2.0)
            impl.exact_two_max(rng.uniform(0.05, 0.95) * mu / 2, mu,
                               rng.uniform(1.05, 2.0), rng.uniform(0, 10),
                               rng.uniform(0, 10), 500)
        return None

    times = {name: best_of(repeat, grid, impl) for name, impl in BACKENDS}
    report("exact two    2000x(n=500)", times, 2_000 * 500)


def report(label, times, work):
    parts = [f"{label:<28}"]
    for name, t in times.items():
        parts.append(f"{name} {t * 1e3:9.2f} ms ({work / t / 1e6:8.1f} Mop/s)")
    if len(times) == 2:
        a, b = times.values()
        parts.append(f"speedup {b / a:5.1f}x")
    print("  ".join(parts))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5, help="best-of repetitions")
    args = parser.parse_args()
    print(f"backends: {[name for name, _ in BACKENDS]}")
    bench_lindley(args.repeat)
    bench_exact_single(args.repeat)
    bench_exact_two(args.repeat)


if __name__ == "__main__":
    main()
