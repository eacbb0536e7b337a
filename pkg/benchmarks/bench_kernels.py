"""Compare the compiled sampling kernels with the pure-Python twin.

    python benchmarks/bench_kernels.py [--reps 200] [--n 2000]

Both backends must return identical histograms; the table reports draws
per second and the speedup.
"""

import argparse
import time

import numpy as np

from faccum import kernels


def cases(n):
    N = n
    return [
        ("gas-distinct", "occupancy_distinct", (n, N, 3)),
        ("gas-indistinct", "occupancy_indistinct", (n, N, 3)),
        ("gas-coloured", "occupancy_coloured", (n, N, 4, 3)),
        ("gas-forest", "occupancy_forest", (n, N, 3)),
        ("gias-negmulti", "occupancy_negmulti", (n, N, 0.5 / N, 3)),
        ("gias-dirichlet", "occupancy_dirichlet", (n, N, 1.0, float(n), 3)),
    ]


def timed(fn, *args):
    t = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=12345)
    args = ap.parse_args()
    if kernels.compiled is None:
        raise SystemExit("compiled kernels are not built; reinstall without FACCUM_NO_EXT")

    print(f"{'scheme':<16}{'cython s':>10}{'python s':>10}{'speedup':>9}  identical")
    for label, name, params in cases(args.n):
        full = (args.seed, 0, args.reps) + params
        fast, tc = timed(getattr(kernels.compiled, name), *full)
        slow, tp = timed(getattr(kernels.python, name), *full)
        same = np.array_equal(fast, slow)
        print(f"{label:<16}{tc:>10.4f}{tp:>10.3f}{tp / tc:>9.0f}  {same}")


if __name__ == "__main__":
    main()
