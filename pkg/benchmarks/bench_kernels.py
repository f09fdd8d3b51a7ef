"""Compare the compiled Sturm-count kernel against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--sizes 500,2000,8000] [--grid 64]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from idsconc import kernels


def bench(impl, diag, off, xs, repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        impl.sturm_count_many(diag, off, xs)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="500,2000,8000,32000")
    parser.add_argument("--grid", type=int, default=64)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'n':>8} {'grid':>6} {'python (s)':>12} {'active (s)':>12} "
          f"{'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        diag = 2.0 + rng.random(n)
        off = -np.ones(n - 1)
        xs = np.linspace(0.0, 6.0, args.grid)
        t_py = bench(kernels.python_impl, diag, off, xs)
        t_active = bench(kernels, diag, off, xs)
        a = kernels.sturm_count_many(diag, off, xs)
        b = kernels.python_impl.sturm_count_many(diag, off, xs)
        assert np.array_equal(a, b), "backend results disagree"
        print(f"{n:>8} {args.grid:>6} {t_py:>12.6f} {t_active:>12.6f} "
              f"{t_py / t_active:>8.2f}")


if __name__ == "__main__":
    main()
