#!/usr/bin/env python3
"""Benchmark: compiled kernels vs the numpy fallback.

Times the two hot kernels (CSR mat-vec, batched triangle angles) on
realistic workloads plus one end-to-end solve. Run from the repo root:

    python benchmarks/bench_kernels.py [--K 80] [--alpha 0.0001]

The compiled core must be built (pip install -e . or
python setup.py build_ext --inplace) for the comparison to be meaningful;
otherwise both columns show the fallback.
"""

import argparse
import pathlib
import sys
import time

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from thinfem import _kernels, fields, mesh, poisson  # noqa: E402
from thinfem._kernels import numpy_impl  # noqa: E402


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--K", type=int, default=80)
    ap.add_argument("--alpha", type=float, default=0.0001)
    ap.add_argument("--angles", type=int, default=2_000_000)
    args = ap.parse_args()

    print(f"compiled core available: {_kernels.HAVE_COMPILED}")
    m = mesh.generate_square_six(args.K, args.alpha)
    sys_ = poisson.assemble(m, fields.quartic_load())
    rng = np.random.default_rng(0)
    x = rng.standard_normal(sys_.n_free)
    nnz = len(sys_.data)
    print(f"mesh K={args.K} alpha={args.alpha}: {sys_.n_free} unknowns, {nnz} nnz")

    rows = []
    t_active = timeit(
        lambda: _kernels.csr_matvec(sys_.indptr, sys_.indices, sys_.data, x), 20
    )
    t_numpy = timeit(
        lambda: numpy_impl.csr_matvec(sys_.indptr, sys_.indices, sys_.data, x), 20
    )
    rows.append(("csr_matvec", t_active, t_numpy))

    tri = rng.random((args.angles, 3, 2))
    t_active = timeit(lambda: _kernels.tri_corner_angles(tri), 5)
    t_numpy = timeit(lambda: numpy_impl.tri_corner_angles(tri), 5)
    rows.append((f"tri_corner_angles ({args.angles} tris)", t_active, t_numpy))

    t_solve = timeit(lambda: poisson.solve_cg(sys_), 1)
    rows.append(("solve_cg (active kernels)", t_solve, float("nan")))

    print()
    print(f"{'kernel':<40} {'active':>12} {'numpy':>12} {'speedup':>9}")
    for name, ta, tn in rows:
        speed = tn / ta if ta > 0 and tn == tn else float("nan")
        print(f"{name:<40} {ta * 1e3:>9.2f} ms {tn * 1e3:>9.2f} ms {speed:>8.2f}x")


if __name__ == "__main__":
    main()
