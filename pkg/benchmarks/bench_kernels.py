#!/usr/bin/env python3
"""Benchmark the compiled recurrence kernels against the pure-Python twin.

Usage:
    python benchmarks/bench_kernels.py [--repeat 5]

The series evaluation dominates every spectrum scan, so the speedup
here translates almost directly into sweep throughput.
"""

import argparse
import time

import numpy as np

from anirabi import _kernels_py

try:
    from anirabi import _kernels_cy
except ImportError:
    _kernels_cy = None


CASES = {
    "series weak (d=0.5 g=0.3 r=0.2)": (0.5, 0.018, 0.0468, 0.0432),
    "series moderate (d=1 g=0.8 r=0.7)": (1.0, 0.448, 0.4768, 0.1632),
    "series deep (d=2 g=5 r=2)": (2.0, 50.0, 62.5, -37.5),
}


def bench_series(mod, params, n_eval=400):
    delta, beta2, lam_p, lam_m = params
    xs = np.linspace(0.05, 5.95, n_eval)
    xs = xs[np.abs(xs - np.round(xs)) > 1e-3]
    t0 = time.perf_counter()
    acc = 0.0
    for x in xs:
        gp, gm, *_ = mod.g_series(delta, beta2, lam_p, lam_m, float(x))
        acc += gp - gm
    return (time.perf_counter() - t0) / len(xs), acc


def bench_arrays(mod, n_eval=200):
    t0 = time.perf_counter()
    for i in range(n_eval):
        mod.pair_recurrence(1.0, 0.448, 0.4768, 0.1632, 2.345 + i * 1e-9, 512)
    return (time.perf_counter() - t0) / n_eval


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if _kernels_cy is None:
        print("compiled kernels unavailable; run pip install -e . first")
        return

    print(f"{'case':<38} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, params in CASES.items():
        t_py = min(bench_series(_kernels_py, params)[0] for _ in range(args.repeat))
        t_cy = min(bench_series(_kernels_cy, params)[0] for _ in range(args.repeat))
        # identical sums guard against benchmarking different math
        _, a = bench_series(_kernels_py, params, n_eval=40)
        _, b = bench_series(_kernels_cy, params, n_eval=40)
        tag = "" if a == b else "  [MISMATCH]"
        print(
            f"{name:<38} {t_py * 1e6:>8.1f}us {t_cy * 1e6:>8.1f}us "
            f"{t_py / t_cy:>7.1f}x{tag}"
        )

    t_py = min(bench_arrays(_kernels_py) for _ in range(args.repeat))
    t_cy = min(bench_arrays(_kernels_cy) for _ in range(args.repeat))
    print(
        f"{'coefficient arrays (512 terms)':<38} {t_py * 1e6:>8.1f}us "
        f"{t_cy * 1e6:>8.1f}us {t_py / t_cy:>7.1f}x"
    )


if __name__ == "__main__":
    main()
