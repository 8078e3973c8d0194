"""Compare the numba and numpy paths of the exhaustive grid kernel.

    python3 benchmarks/bench_kernels.py [--grid 4] [--repeat 3]

Both paths run on the same integer matrix (x-basis, N = 3) and must return
the same exact minimum; the numba timing excludes the first (compiling) call.
"""
from __future__ import annotations

import argparse
import time
from fractions import Fraction

import numpy as np

from ordspr import _kernels
from ordspr.embeddings import basis_x
from ordspr.spr import _value_matrix


def grid_inputs(k: int, n_basis: int = 3):
    matrix, _ = _value_matrix([basis_x(n) for n in range(1, n_basis + 1)])
    axis = np.arange(-k, k + 1)
    grid = np.array(np.meshgrid(*[axis] * n_basis, indexing="ij")).reshape(n_basis, -1).T
    grid = grid[np.any(grid != 0, axis=1)]
    absvals = np.abs(grid @ matrix.T).astype(np.int64)
    norms = absvals.max(axis=1)
    return absvals, norms


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--grid", type=int, default=4, help="grid denominator k (step 1/k)")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    absvals, norms = grid_inputs(args.grid)
    pairs = len(norms) * (len(norms) - 1) // 2
    print(f"grid step 1/{args.grid}: {len(norms)} candidates, {pairs} pairs")

    numpy_result = _kernels.grid_min_pair_numpy(absvals, norms)
    t_numpy = best_of(lambda: _kernels.grid_min_pair_numpy(absvals, norms), args.repeat)
    print(f"numpy : {t_numpy:8.4f}s  min {Fraction(numpy_result[0], numpy_result[1])}")

    if not _kernels.NUMBA_ENABLED:
        print("numba : unavailable (not installed or ORDSPR_DISABLE_NUMBA set)")
        return
    t0 = time.perf_counter()
    numba_result = _kernels.grid_min_pair(absvals, norms)
    compile_time = time.perf_counter() - t0
    t_numba = best_of(lambda: _kernels.grid_min_pair(absvals, norms), args.repeat)
    print(f"numba : {t_numba:8.4f}s  min {Fraction(numba_result[0], numba_result[1])}"
          f"  (first call incl. compile {compile_time:.2f}s)")
    assert Fraction(numba_result[0], numba_result[1]) == Fraction(numpy_result[0], numpy_result[1])
    print(f"speedup: {t_numpy / t_numba:.1f}x")


if __name__ == "__main__":
    main()
