"""Benchmark the jitted path kernels against their pure-numpy twins.

Usage::

    python benchmarks/bench_kernels.py [--paths 4000] [--steps 2048] [--repeat 5]

With ``LIQLAB_DISABLE_NUMBA=1`` only the numpy implementations run.  The
FFT-based fractional-noise generator has no jitted variant (its runtime is
FFT-bound), so only the sequential recurrences appear here.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from liqlab import kernels


def best_of(repeat: int, fn, *args) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--paths", type=int, default=4000)
    parser.add_argument("--steps", type=int, default=2048)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.Generator(np.random.PCG64(0))
    shocks = 0.02 * rng.standard_normal((args.paths, args.steps))
    prices = 10.0 + np.cumsum(0.01 * rng.standard_normal((args.paths, args.steps + 1)),
                              axis=1)

    cases = [
        ("fou_euler", kernels.fou_euler_jit, kernels.fou_euler_numpy,
         (10.0, -0.5, 0.0, 1e-3, shocks)),
        ("self_financing", kernels.self_financing_jit, kernels.self_financing_numpy,
         (prices, -0.2, 0.0, 0.25, 1.0)),
    ]

    print(f"paths={args.paths} steps={args.steps} repeat={args.repeat} "
          f"numba={'on' if kernels.NUMBA_ENABLED else 'off'}")
    print(f"{'kernel':<16} {'numpy [s]':>10} {'numba [s]':>10} {'speedup':>8}")
    for name, jit_fn, np_fn, call_args in cases:
        t_np = best_of(args.repeat, np_fn, *call_args)
        if jit_fn is None:
            print(f"{name:<16} {t_np:>10.4f} {'-':>10} {'-':>8}")
            continue
        jit_fn(*call_args)  # warm the compile cache before timing
        t_jit = best_of(args.repeat, jit_fn, *call_args)
        if not np.array_equal(jit_fn(*call_args), np_fn(*call_args)):
            raise SystemExit(f"{name}: jit and numpy outputs differ")
        print(f"{name:<16} {t_np:>10.4f} {t_jit:>10.4f} {t_np / t_jit:>7.1f}x")


if __name__ == "__main__":
    main()
