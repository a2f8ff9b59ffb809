"""Compiled vs NumPy collar distance kernels.

    python benchmarks/bench_kernels.py [--pairs 2000] [--curve figure-eight]

Times both backends on the same random point pairs and reports the largest
disagreement (expected: 0).
"""
import argparse
import time

import numpy as np

from singplateau import CollarSpace, corpus
from singplateau import _pykernels
from singplateau.kernels import compiled_backend


def run(space, a, b, backend, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = space.distances(a, b, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pairs", type=int, default=2000)
    ap.add_argument("--curve", default="figure-eight")
    ap.add_argument("--seam-samples", type=int, default=256)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    space = CollarSpace(corpus()[args.curve], args.seam_samples)
    rng = np.random.default_rng(args.seed)
    a = space.random_points(args.pairs, rng)
    b = space.random_points(args.pairs, rng)
    py_n = min(args.pairs, 300)
    t_py, d_py = run(space, a[:py_n], b[:py_n], _pykernels, 1)
    print(f"curve={args.curve} seam_samples={args.seam_samples}")
    print(f"python   : {t_py / py_n * 1e6:10.1f} us/pair  ({py_n} pairs)")
    if compiled_backend is None:
        print("compiled : extension not built")
        return
    t_c, d_c = run(space, a, b, compiled_backend, 3)
    print(f"compiled : {t_c / args.pairs * 1e6:10.1f} us/pair  ({args.pairs} pairs)")
    print(f"speedup  : {(t_py / py_n) / (t_c / args.pairs):10.1f}x")
    print(f"max |diff| on shared pairs: {np.max(np.abs(d_c[:py_n] - d_py)):.3g}")


if __name__ == "__main__":
    main()
