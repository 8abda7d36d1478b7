"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--points N] [--repeat R]
"""

import argparse
import timeit

import numpy as np

from mlfineq import _backend

CASES = [
    # name, kernel index, alpha, beta, radius range, extra argument
    ("series  a=0.5 b=1", 0, 0.5, 1.0, (0.0, 3.0), 1e-16),
    ("series  a=1.5 b=1", 0, 1.5, 1.0, (0.0, 15.0), 1e-16),
    ("series  a=2   b=3", 0, 2.0, 3.0, (0.0, 25.0), 1e-16),
    ("asympt  a=0.8 b=1", 1, 0.8, 1.0, (20.0, 60.0), 0),
    ("asympt  a=2   b=2", 1, 2.0, 2.0, (40.0, 200.0), 0),
]


def sample(n, rmin, rmax, seed):
    rng = np.random.default_rng(seed)
    r = rng.uniform(rmin, rmax, n)
    return r * np.exp(1j * rng.uniform(-np.pi, np.pi, n))


def best_time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    py = _backend.kernels("python")
    try:
        cc = _backend.kernels("compiled")
    except ImportError:
        print("compiled extension not built; nothing to compare")
        return 1

    print(f"{args.points} points, best of {args.repeat}")
    print(f"{'case':<20} {'python [s]':>11} {'compiled [s]':>13} {'speedup':>8} {'max |diff|/|v|':>15}")
    for i, (name, k, a, b, (r0, r1), extra) in enumerate(CASES):
        z = sample(args.points, r0, r1, i)
        fp, fc = py[k], cc[k]
        tp = best_time(lambda: fp(z, a, b, extra), args.repeat)
        tc = best_time(lambda: fc(z, a, b, extra), args.repeat)
        vp, vc = fp(z, a, b, extra)[0], fc(z, a, b, extra)[0]
        ok = np.isfinite(vp) & np.isfinite(vc)
        diff = np.max(np.abs(vp[ok] - vc[ok]) / np.maximum(np.abs(vp[ok]), 1e-300)) if ok.any() else float("nan")
        print(f"{name:<20} {tp:11.4f} {tc:13.5f} {tp / tc:8.1f} {diff:15.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
