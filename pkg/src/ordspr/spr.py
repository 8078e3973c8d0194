"""Stable phase retrieval metrics and almost-disjoint-pair search.

For real scalars a subspace does C-SPR exactly when it holds no normalized
pair ``f, g`` with ``|| |f| ^ |g| || <= 1/C``.  The searches here minimize that
meet norm over finite-dimensional subspaces spanned by step functions and
emit replayable certificates.
"""
from __future__ import annotations

import itertools
import math
import time
from bisect import bisect_left
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from math import lcm
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from ._kernels import INT64_SAFE_MAX, grid_min_pair
from .embeddings import LinOperator
from .ordinal import Ord
from .stepfn import FnPair, StepFn, fn_abs, fn_add, fn_sub, meet, scale, sup_norm

__all__ = [
    "INFINITY",
    "meet_norm",
    "spr_deficiency",
    "spr_ratio",
    "SprCertificate",
    "adp_search",
    "verify_spr_bound",
    "property_star_check",
    "combination",
]

INFINITY = math.inf

Element = Union[StepFn, FnPair]

GRID_CAVEAT = (
    "grid check only: certifies the absence of almost disjoint pairs among "
    "grid points, not over the whole unit sphere"
)


def _parts(f: Element) -> tuple[StepFn, ...]:
    return (f.left, f.right) if isinstance(f, FnPair) else (f,)


def _paired(f: Element, g: Element) -> list[tuple[StepFn, StepFn]]:
    if isinstance(f, FnPair) != isinstance(g, FnPair):
        raise ValueError("cannot mix pairs and single functions")
    return list(zip(_parts(f), _parts(g)))


def meet_norm(f: Element, g: Element) -> Fraction:
    """``|| |f| ^ |g| ||`` (componentwise max for direct-sum pairs)."""
    return max(sup_norm(meet(fn_abs(a), fn_abs(b))) for a, b in _paired(f, g))


def spr_deficiency(f: Element, g: Element) -> Fraction:
    """``min(||f - g||, ||f + g||)``: the distance up to a real sign."""
    pairs = _paired(f, g)
    minus = max(sup_norm(fn_sub(a, b)) for a, b in pairs)
    plus = max(sup_norm(fn_add(a, b)) for a, b in pairs)
    return min(minus, plus)


def spr_ratio(f: Element, g: Element) -> Union[Fraction, float]:
    """Deficiency over ``|| |f| - |g| ||``.

    Returns :data:`INFINITY` when only the denominator vanishes and ``0`` when
    both do.
    """
    num = spr_deficiency(f, g)
    den = max(sup_norm(fn_sub(fn_abs(a), fn_abs(b))) for a, b in _paired(f, g))
    if den == 0:
        return Fraction(0) if num == 0 else INFINITY
    return num / den


def combination(basis: Sequence[StepFn], coeffs: Sequence) -> StepFn:
    out = scale(0, basis[0])
    for c, e in zip(coeffs, basis):
        if c:
            out = fn_add(out, scale(c, e))
    return out


def _frac_str(v: Optional[Fraction]) -> Optional[str]:
    return None if v is None else str(v)


@dataclass
class SprCertificate:
    """Outcome of an almost-disjoint-pair search.

    ``witness_a``/``witness_b`` are coefficient vectors scaled so that the
    combinations have sup norm exactly 1; ``min_value`` is their meet norm.
    """

    basis: list[StepFn]
    method: str
    seed: Optional[int]
    budget: Optional[int]
    grid_step: Optional[Fraction]
    min_value: Fraction
    witness_a: list[Fraction]
    witness_b: list[Fraction]
    conclusion: str
    pairs_evaluated: int = 0
    basis_name: Optional[str] = None
    threshold: Optional[Fraction] = None
    passed: Optional[bool] = None
    timestamp: dict = field(default_factory=dict)

    def replay(self) -> Fraction:
        """Recompute the witness meet norm from scratch with step-function algebra."""
        x = combination(self.basis, self.witness_a)
        y = combination(self.basis, self.witness_b)
        return meet_norm(x, y)

    def to_json(self) -> dict:
        return {
            "basis_name": self.basis_name,
            "basis": [f.to_json() for f in self.basis],
            "method": self.method,
            "seed": self.seed,
            "budget": self.budget,
            "grid_step": _frac_str(self.grid_step),
            "min_value": str(self.min_value),
            "witness_a": [str(v) for v in self.witness_a],
            "witness_b": [str(v) for v in self.witness_b],
            "pairs_evaluated": self.pairs_evaluated,
            "threshold": _frac_str(self.threshold),
            "passed": self.passed,
            "conclusion": self.conclusion,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SprCertificate":
        def frac(v):
            return None if v is None else Fraction(v)

        try:
            return cls(
                basis=[StepFn.from_json(f) for f in data["basis"]],
                method=data["method"],
                seed=data.get("seed"),
                budget=data.get("budget"),
                grid_step=frac(data.get("grid_step")),
                min_value=Fraction(data["min_value"]),
                witness_a=[Fraction(v) for v in data["witness_a"]],
                witness_b=[Fraction(v) for v in data["witness_b"]],
                conclusion=data["conclusion"],
                pairs_evaluated=data.get("pairs_evaluated", 0),
                basis_name=data.get("basis_name"),
                threshold=frac(data.get("threshold")),
                passed=data.get("passed"),
                timestamp=data.get("timestamp", {}),
            )
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed certificate JSON: {exc}") from exc


def _value_matrix(basis: Sequence[StepFn]) -> tuple[np.ndarray, int]:
    """Integer matrix (distinct cells x basis) and the common denominator."""
    if not basis:
        raise ValueError("the basis is empty")
    first = basis[0]
    for f in basis[1:]:
        if f.start != first.start or f.domain_end != first.domain_end:
            raise ValueError("basis functions must share a domain")
    ends = sorted(set().union(*(f.ends for f in basis)))
    rows = {tuple(f.values[bisect_left(f.ends, e)] for f in basis) for e in ends}
    rows = sorted(rows)
    den = lcm(*(v.denominator for row in rows for v in row))
    ints = [[int(v * den) for v in row] for row in rows]
    peak = max(abs(v) for row in ints for v in row)
    dtype = np.int64 if peak <= INT64_SAFE_MAX else object
    return np.array(ints, dtype=dtype), den


def _grid_denominator(grid_step) -> int:
    step = Fraction(grid_step)
    if step.numerator != 1 or step.denominator < 1:
        raise ValueError(f"grid step must be 1/k for a positive integer k, got {step}")
    return step.denominator


def _stamp(started: float) -> dict:
    return {
        "started": datetime.fromtimestamp(started, tz=timezone.utc).isoformat(),
        "elapsed_seconds": round(time.time() - started, 3),
    }


def _normalized(coeffs: Sequence[int], matrix: np.ndarray, den: int) -> list[Fraction]:
    # scale integer coefficients so the combination has sup norm 1
    values = [sum(int(m) * int(c) for m, c in zip(row, coeffs)) for row in matrix]
    norm = max(abs(v) for v in values)
    return [Fraction(int(c) * den, norm) for c in coeffs]


def _exhaustive(matrix: np.ndarray, den: int, k: int):
    n_basis = matrix.shape[1]
    grid = np.array(
        [c for c in itertools.product(range(-k, k + 1), repeat=n_basis) if any(c)],
        dtype=np.int64,
    )
    peak = int(np.abs(matrix).max()) * k * n_basis if matrix.size else 0
    if matrix.dtype == object or peak > INT64_SAFE_MAX:
        images = grid.astype(object) @ matrix.astype(object).T
    else:
        images = grid @ matrix.T
    absvals = np.abs(images)
    norms = absvals.max(axis=1)
    keep = norms != 0
    grid, absvals, norms = grid[keep], absvals[keep], norms[keep]
    num, dnm, i, j = grid_min_pair(absvals, norms)
    count = len(grid) * (len(grid) - 1) // 2
    if i < 0:
        raise ValueError("the grid spans fewer than two non-zero functions")
    return Fraction(int(num), int(dnm)), grid[i], grid[j], count


def _pair_value(matrix: np.ndarray, a: Sequence[int], b: Sequence[int]) -> Optional[Fraction]:
    x = [abs(sum(int(m) * int(c) for m, c in zip(row, a))) for row in matrix]
    y = [abs(sum(int(m) * int(c) for m, c in zip(row, b))) for row in matrix]
    nx, ny = max(x), max(y)
    if nx == 0 or ny == 0:
        return None
    best = max(min(u * ny, v * nx) for u, v in zip(x, y))
    return Fraction(best, nx * ny)


_DESCENT_DEN = 64


def _random_descent(matrix: np.ndarray, budget: int, seed: int):
    rng = np.random.default_rng(seed)
    n_basis = matrix.shape[1]
    scale_ = _DESCENT_DEN
    best = None
    evaluations = 0
    for _ in range(budget):
        while True:
            a = [int(v) for v in rng.integers(-scale_, scale_ + 1, size=n_basis)]
            b = [int(v) for v in rng.integers(-scale_, scale_ + 1, size=n_basis)]
            value = _pair_value(matrix, a, b)
            evaluations += 1
            if value is not None:
                break
        step = scale_ // 2
        while step >= 1:
            improved = False
            for vec in (a, b):
                for i in range(n_basis):
                    orig = vec[i]
                    choice, choice_value = orig, value
                    for cand in (orig + step, orig - step, 0):
                        if cand == orig or abs(cand) > scale_:
                            continue
                        vec[i] = cand
                        v = _pair_value(matrix, a, b)
                        evaluations += 1
                        if v is not None and v < choice_value:
                            choice, choice_value = cand, v
                    vec[i] = choice
                    if choice != orig:
                        value = choice_value
                        improved = True
            if not improved:
                step //= 2
        if best is None or value < best[0]:
            best = (value, list(a), list(b))
    return best[0], best[1], best[2], evaluations


def adp_search(
    basis: Sequence[StepFn],
    budget: int = 64,
    seed: int = 0,
    grid_step=None,
    basis_name: str | None = None,
) -> SprCertificate:
    """Minimize the meet norm over normalized pairs in ``span(basis)``.

    With ``grid_step = 1/k`` every pair of coefficient vectors in
    ``{-1, -1 + 1/k, ..., 1}^N`` is tried (exhaustive mode).  Without it,
    ``budget`` seeded random restarts each run single-coordinate descent with
    the step halving from 1/2 down to 1/64.
    """
    started = time.time()
    basis = list(basis)
    matrix, den = _value_matrix(basis)
    if grid_step is not None:
        k = _grid_denominator(grid_step)
        value, a, b, count = _exhaustive(matrix, den, k)
        method = "exhaustive-grid"
        step = Fraction(1, k)
        budget_used = None
        seed_used = None
    else:
        if budget < 1:
            raise ValueError("budget must be positive")
        value, a, b, count = _random_descent(matrix, budget, seed)
        method = "random-restart"
        step = None
        budget_used = budget
        seed_used = seed
    wa = _normalized(a, matrix, den)
    wb = _normalized(b, matrix, den)
    if method == "exhaustive-grid":
        conclusion = f"minimum meet norm {value} over grid step {step}; {GRID_CAVEAT}"
    else:
        conclusion = (
            f"smallest meet norm found {value} after {budget} seeded restarts; "
            "a search result, not a bound"
        )
    if value == 0:
        conclusion = f"disjoint pair found (meet norm 0): the span fails phase retrieval; {conclusion}"
    return SprCertificate(
        basis=basis,
        method=method,
        seed=seed_used,
        budget=budget_used,
        grid_step=step,
        min_value=value,
        witness_a=wa,
        witness_b=wb,
        conclusion=conclusion,
        pairs_evaluated=count,
        basis_name=basis_name,
        timestamp=_stamp(started),
    )


def verify_spr_bound(
    basis: Sequence[StepFn], C, grid_step, basis_name: str | None = None
) -> tuple[bool, SprCertificate]:
    """Check ``meet_norm >= 1/C`` for every normalized pair of grid points."""
    C = Fraction(C)
    if C <= 0:
        raise ValueError("C must be positive")
    if grid_step is None:
        raise ValueError("verify_spr_bound needs a grid step")
    cert = adp_search(basis, grid_step=grid_step, basis_name=basis_name)
    threshold = 1 / C
    passed = cert.min_value >= threshold
    cert.threshold = threshold
    cert.passed = passed
    if passed:
        cert.conclusion = (
            f"no pair with meet norm below 1/{C} among grid points (step {cert.grid_step}); "
            f"minimum {cert.min_value}; {GRID_CAVEAT}"
        )
    else:
        cert.conclusion = (
            f"fails {C}-SPR: grid pair with meet norm {cert.min_value} < 1/{C}, witness attached"
        )
    return passed, cert


def property_star_check(
    op: LinOperator, witnesses: Mapping[Ord, Ord], samples: Sequence[StepFn]
) -> bool:
    """True iff ``op(f)(s_t) == f(t)`` for every sampled ``f`` and witnessed ``t``."""
    for t, s in witnesses.items():
        if not t or t > op.source_domain:
            raise ValueError(f"witness source point {t} outside [1, {op.source_domain}]")
        if not s or s > op.target_domain:
            raise ValueError(f"witness target point {s} outside [1, {op.target_domain}]")
    for f in samples:
        image = op(f)
        for t, s in witnesses.items():
            if image.eval(s) != f.eval(t):
                return False
    return True
