"""Compiled vs pure-Python kernel timings.

    python3 benchmarks/bench_kernels.py [--sizes 1000,10000,100000] [--repeat 20]

Prints one row per (kernel, size) with the best-of-repeat time of each backend
and the speedup.  Exits nonzero if the backends disagree: stencils must match to 1e-12
relative, the tridiagonal solve to 1e-15 n^2 (its condition number grows like n^2).
"""

import argparse
import sys
import timeit

import numpy as np

from lefsolver import kernels
from lefsolver.grid import RadialGrid, dirichlet_operator


def cases(n, N=3):
    grid = RadialGrid.uniform(1.0, n)
    r = grid.nodes
    u = np.cos(np.pi * r / 2) + 0.1 * r ** 3
    lower, diag, upper, _ = dirichlet_operator(grid, N)
    rhs = np.sin(3 * r[:-1]) + 1.0
    return {
        "tridiag_solve": lambda m: m.tridiag_solve(lower, diag, upper, rhs),
        "radial_laplacian": lambda m: m.radial_laplacian(r, u, N),
        "central_gradient": lambda m: m.central_gradient(r, u),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,10000,100000")
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)
    impls = kernels.backends()
    if "cython" not in impls:
        print("compiled extension not built; only the Python backend is available")
    print(f"{'kernel':18s} {'n':>8s} " + " ".join(f"{b + ' [us]':>14s}" for b in impls)
          + ("   speedup" if len(impls) > 1 else ""))
    ok = True
    for n in (int(s) for s in args.sizes.split(",")):
        for name, fn in cases(n).items():
            times, outs = {}, {}
            for b, m in impls.items():
                outs[b] = fn(m)
                number = max(1, 20000 // n)
                times[b] = min(timeit.repeat(lambda: fn(m), number=number,
                                             repeat=args.repeat)) / number * 1e6
            row = f"{name:18s} {n:8d} " + " ".join(f"{times[b]:14.1f}" for b in impls)
            if len(impls) > 1:
                ref = outs["python"]
                tol = 1e-15 * n * n if name == "tridiag_solve" else 1e-12
                same_nan = np.array_equal(np.isnan(ref), np.isnan(outs["cython"]))
                err = np.nanmax(np.abs(outs["cython"] - ref)) / np.nanmax(np.abs(ref))
                ok &= bool(same_nan and err <= max(tol, 1e-12))
                row += f"   {times['python'] / times['cython']:7.2f}x"
            print(row)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
