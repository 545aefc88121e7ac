"""Benchmark the hot kernels: numba @njit vs the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from lpgeo.kernels import numpy_impl

try:
    from lpgeo.kernels import numba_impl
except ImportError:
    numba_impl = None


def bench(fn, *args, repeats=5):
    fn(*args)  # warm-up (and JIT compile for the numba path)
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--n", type=int, default=200_000, help="query count")
    args = parser.parse_args()

    n_grid = 2001
    x = np.linspace(-10.0, 10.0, n_grid)
    line_vals = np.exp(-(x ** 2)) + 0.1 * np.sin(x)
    per_vals = np.sin(2 * np.pi * np.arange(256) / 256)
    rng = np.random.default_rng(0)
    line_q = rng.uniform(-10, 10, size=args.n)
    per_q = rng.uniform(0, 1, size=args.n)
    u = 0.08 * np.sin(2 * np.pi * np.arange(256) / 256)
    targets = np.arange(256) / 256
    big_targets = rng.uniform(0, 1, size=20_000)
    line_map = x + 0.02 * (x ** 2 - 100.0)
    line_targets = rng.uniform(line_map[0], line_map[-1], size=20_000)

    cases = [
        ("interp_line (cubic)", "interp_line", (-10.0, 0.01, line_vals, line_q)),
        ("interp_line6 (quintic)", "interp_line6", (-10.0, 0.01, line_vals, line_q)),
        ("interp_periodic (cubic)", "interp_periodic", (per_vals, per_q, 1.0)),
        ("interp_periodic6 (quintic)", "interp_periodic6", (per_vals, per_q, 1.0)),
        ("invert_periodic_lift", "invert_periodic_lift", (u, 1.0, big_targets, 1e-12)),
        ("invert_line_map", "invert_line_map",
         (-10.0, 0.01, line_map, line_targets, 1e-12)),
    ]

    print(f"{'kernel':30s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speedup':>9s}")
    for label, name, call_args in cases:
        t_np = bench(getattr(numpy_impl, name), *call_args, repeats=args.repeats)
        if numba_impl is None:
            print(f"{label:30s} {1e3 * t_np:12.3f} {'n/a':>12s} {'n/a':>9s}")
            continue
        t_nb = bench(getattr(numba_impl, name), *call_args, repeats=args.repeats)
        print(f"{label:30s} {1e3 * t_np:12.3f} {1e3 * t_nb:12.3f} {t_np / t_nb:8.1f}x")

        out_np = getattr(numpy_impl, name)(*call_args)
        out_nb = getattr(numba_impl, name)(*call_args)
        same = np.array_equal(out_np, out_nb, equal_nan=True)
        if not same:
            print(f"    WARNING: backends disagree for {name}")


if __name__ == "__main__":
    main()
