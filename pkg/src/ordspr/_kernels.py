"""Integer kernels for the exhaustive almost-disjoint-pair search.

Every grid candidate is an integer vector ``x = M @ c`` over the cells of the
common refinement of the basis.  For a pair of candidates the meet norm of
the normalized functions is

    max_cell min(|x_c| * Y, |y_c| * X) / (X * Y),     X = max|x|, Y = max|y|

so the whole search runs on integers and stays exact.  The numba kernel is
used when numba imports and ``ORDSPR_DISABLE_NUMBA`` is unset; otherwise a
vectorized numpy path runs.  Inputs whose cross products could overflow int64
go through the numpy path on object arrays (Python integers).
"""
from __future__ import annotations

import os

import numpy as np

__all__ = ["NUMBA_ENABLED", "INT64_SAFE_MAX", "grid_min_pair", "grid_min_pair_numpy"]

# cross-multiplied comparisons reach max_entry**4
INT64_SAFE_MAX = 46340

_disabled = os.environ.get("ORDSPR_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    from numba import njit
except ImportError:
    njit = None

NUMBA_ENABLED = njit is not None


def _grid_min_pair_py(absvals, norms):
    n, ncells = absvals.shape
    # sentinel above every normalized meet norm
    best_num, best_den = 2, 1
    best_i, best_j = -1, -1
    for i in range(n):
        xi = norms[i]
        for j in range(i + 1, n):
            xj = norms[j]
            den = xi * xj
            val = 0
            for c in range(ncells):
                a = absvals[i, c] * xj
                b = absvals[j, c] * xi
                m = a if a < b else b
                if m > val:
                    val = m
                    if val * best_den >= best_num * den:
                        break
            if val * best_den < best_num * den:
                best_num, best_den = val, den
                best_i, best_j = i, j
    return best_num, best_den, best_i, best_j


if NUMBA_ENABLED:
    _grid_min_pair_jit = njit(cache=False)(_grid_min_pair_py)


def grid_min_pair_numpy(absvals: np.ndarray, norms: np.ndarray):
    """Vectorized reference path; works on int64 and object arrays alike."""
    n = absvals.shape[0]
    best = None  # (num, den, i, j)
    for i in range(n - 1):
        xi = norms[i]
        rest = absvals[i + 1:]
        xj = norms[i + 1:]
        vals = np.minimum(absvals[i][None, :] * xj[:, None], rest * xi).max(axis=1)
        dens = xj * xi
        ratio = vals.astype(np.float64) / dens.astype(np.float64)
        lo = ratio.min()
        if best is not None and lo > best[0] / best[1] * (1 + 1e-9):
            continue
        cand = np.flatnonzero(ratio <= lo * (1 + 1e-9) + 1e-300)
        for k in cand:
            num, den = int(vals[k]), int(dens[k])
            if best is None or num * best[1] < best[0] * den:
                best = (num, den, i, i + 1 + int(k))
    if best is None:
        return 2, 1, -1, -1
    return best


def grid_min_pair(absvals: np.ndarray, norms: np.ndarray):
    """Exact ``(num, den, i, j)`` of the smallest normalized meet norm over ``i < j``.

    Ties resolve to the lexicographically smallest ``(i, j)``.  Returns
    ``(2, 1, -1, -1)`` when fewer than two candidates are given.
    """
    peak = int(absvals.max()) if absvals.size else 0
    if peak > INT64_SAFE_MAX:
        obj = absvals.astype(object)
        return grid_min_pair_numpy(obj, norms.astype(object))
    absvals = np.ascontiguousarray(absvals, dtype=np.int64)
    norms = np.ascontiguousarray(norms, dtype=np.int64)
    if NUMBA_ENABLED:
        num, den, i, j = _grid_min_pair_jit(absvals, norms)
        return int(num), int(den), int(i), int(j)
    return grid_min_pair_numpy(absvals, norms)
