"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--levels 5 6 7] [--repeat 3]
"""

import argparse
import time

import numpy as np

from hanoi_schreier import kernels
from hanoi_schreier.graph import adjacency, build_graph
from hanoi_schreier.numeric import householder_tridiagonal


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--levels", type=int, nargs="+", default=[5, 6, 7])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available_backends()
    names = sorted(backends)
    print(f"{'kernel':<14}{'n':>3}{'size':>7}" + "".join(f"{b:>12}" for b in names) + f"{'speedup':>10}")

    for n in args.levels:
        nb = build_graph(3, n).neighbour_table()
        t = {b: best_of(lambda b=b: backends[b].eccentricities(nb), args.repeat) for b in names}
        speed = t["python"] / t["cython"] if "cython" in t else float("nan")
        print(f"{'eccentricity':<14}{n:>3}{3**n:>7}" + "".join(f"{t[b]:>11.4f}s" for b in names) + f"{speed:>9.1f}x")

    for n in args.levels:
        d, e, _ = householder_tridiagonal(adjacency(build_graph(3, n)).toarray().astype(float))
        ee = np.append(e, 0.0)
        tol = np.finfo(float).eps * 6.0

        def run(b):
            backends[b].tridiag_ql(d.copy(), ee.copy(), 60, tol)

        t = {b: best_of(lambda b=b: run(b), args.repeat) for b in names}
        speed = t["python"] / t["cython"] if "cython" in t else float("nan")
        print(f"{'tridiag_ql':<14}{n:>3}{3**n:>7}" + "".join(f"{t[b]:>11.4f}s" for b in names) + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
