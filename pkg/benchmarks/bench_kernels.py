"""Benchmark the hot kernels on both backends.

Usage: python benchmarks/bench_kernels.py [--lmax 48] [--npoints 20000]
"""

import argparse
import time

import numpy as np

from coneweyl import kernels


def timeit(fn, repeats=5):
    fn()  # warm (JIT compile on the numba path)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lmax", type=int, default=48)
    ap.add_argument("--npoints", type=int, default=20000)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    ct = rng.uniform(-1, 1, args.npoints)
    ph = rng.uniform(0, 2 * np.pi, args.npoints)
    coeffs = rng.normal(size=(args.lmax + 1) ** 2) + 1j * rng.normal(
        size=(args.lmax + 1) ** 2
    )

    cases = {
        "legendre_table": lambda impl: kernels.legendre_table(args.lmax, ct, impl=impl),
        "scatter_eval": lambda impl: kernels.scatter_eval(coeffs, args.lmax, ct, ph, impl=impl),
        "scatter_eval_grad": lambda impl: kernels.scatter_eval_grad(
            coeffs, args.lmax, ct, ph, impl=impl
        ),
    }

    print(f"lmax={args.lmax}  npoints={args.npoints}  (best of {args.repeats})")
    print(f"{'kernel':<20}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    for name, fn in cases.items():
        t_np = timeit(lambda: fn("numpy"), args.repeats)
        try:
            t_nb = timeit(lambda: fn("numba"), args.repeats)
            print(f"{name:<20}{t_np*1e3:>10.1f}ms{t_nb*1e3:>10.1f}ms{t_np/t_nb:>9.1f}x")
        except RuntimeError:
            print(f"{name:<20}{t_np*1e3:>10.1f}ms{'n/a':>12}{'':>10}")


if __name__ == "__main__":
    main()
