"""Time the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import math
import timeit

import numpy as np

from arraydirectivity import _kernels
from arraydirectivity.oupa import grid_offsets


def cases(rng):
    n_pairs = 200_000
    b = rng.uniform(0, 30, n_pairs)
    z = rng.uniform(-10, 10, n_pairs)
    w = rng.uniform(0.5, 1.5, n_pairs)
    pop = rng.uniform(0, 10, (800, 18))
    amps = np.ones(9)
    p1, p2, mult = grid_offsets(15, 16)
    zunit = -(p1 + p2) * 0.5
    bunit = np.sqrt(p1 * p1 + p2 * p2 - zunit * zunit)
    ds = np.arange(1, 5001) * 1e-3
    dirs = rng.normal(size=(100_000, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    pos = rng.uniform(-3, 3, (16, 3))
    return {
        "omni_d2 (200k pairs)": lambda m: m.omni_d2(b, z),
        "omni_pair_sum (200k pairs)": lambda m: m.omni_pair_sum(b, z, w),
        "objective population (800 x N=9)": lambda m: m.omni_objective_population(pop, amps, 1.0, 0.5, 0.5),
        "grid objective curve (15x16, 5000 d)": lambda m: m.upa_objective_curve(ds, bunit, zunit, mult, 1.0),
        "array_power (100k dirs, N=16)": lambda m: m.array_power(dirs, pos, amps[:1].repeat(16), np.zeros(16), 2 * math.pi),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels.compiled is None:
        print("compiled backend not built; only the numpy fallback is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':40s} {'numpy [ms]':>11s} {'cython [ms]':>12s} {'speedup':>8s} {'max |diff|':>11s}")
    for name, fn in cases(rng).items():
        t_py = min(timeit.repeat(lambda: fn(_kernels.python), number=1, repeat=args.repeat)) * 1e3
        if _kernels.compiled is None:
            print(f"{name:40s} {t_py:11.2f} {'-':>12s}")
            continue
        t_c = min(timeit.repeat(lambda: fn(_kernels.compiled), number=1, repeat=args.repeat)) * 1e3
        diff = np.max(np.abs(np.asarray(fn(_kernels.python)) - np.asarray(fn(_kernels.compiled))))
        print(f"{name:40s} {t_py:11.2f} {t_c:12.2f} {t_py / t_c:7.1f}x {diff:11.2e}")


if __name__ == "__main__":
    main()
