"""Compare the compiled and numpy orbit kernels on the same inputs.

Usage: python3 bench/bench_kernels.py [--res 128] [--n 30] [--repeat 3]
"""

import argparse
import time

import numpy as np

from p2dyn import _kernels
from p2dyn.corpus import get
from p2dyn.fatou import ClassifierParams
from p2dyn.fatou.classify import raster_clusters
from p2dyn.projgeom import Slice


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--res", type=int, default=128)
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    s = Slice.chart_slice("z", (-2, 2, -2, 2), (args.res, args.res))
    W = s.grid().reshape(-1, 3)
    params = ClassifierParams(N=args.n)
    C = np.ascontiguousarray(raster_clusters(s, params))
    print(f"backends: {sorted(_kernels.BACKENDS)}  pixels: {len(W)}  N: {args.n}")
    for name in ("squaring", "henon", "cremona"):
        f = get(name).load()
        kargs = f.numeric.kernel_args()
        results = {}
        for backend, mod in sorted(_kernels.BACKENDS.items()):
            t_it, it = best_of(lambda: mod.iterate(*kargs, W, args.n, f.eps_ind), args.repeat)
            t_cl, cl = best_of(lambda: mod.cluster_verdicts(*kargs, C, args.n, f.eps_ind,
                                                             np.cos(0.25), np.cos(0.5)), args.repeat)
            results[backend] = (it, cl)
            print(f"{name:10s} {backend:7s} iterate {t_it * 1e3:9.1f} ms   cluster {t_cl * 1e3:9.1f} ms")
        if len(results) == 2:
            (a, ca), (b, cb) = results["cython"], results["python"]
            same = np.array_equal(ca[0], cb[0])
            dev = np.nanmax(np.abs(a[1] - b[1])) if np.isfinite(a[1]).any() else 0.0
            print(f"{'':10s} verdicts identical: {same}   max |log-norm diff|: {dev:.2e}")


if __name__ == "__main__":
    main()
