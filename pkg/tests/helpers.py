"""Seeded generators of ordinals and step functions shared by the test modules."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from ordspr.ordinal import Ord, omega_pow
from ordspr.stepfn import StepFn, sup_norm, scale


def random_ordinal_below(rng: random.Random, alpha: int, max_coeff: int) -> Ord:
    """Non-zero ordinal below w^alpha with every CNF coefficient <= max_coeff."""
    while True:
        coeffs = [rng.randint(0, max_coeff) if rng.random() < 0.7 else 0 for _ in range(alpha)]
        if any(coeffs):
            return Ord.from_coefficients(coeffs)


def random_value(rng: random.Random, max_den: int = 6) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(-den, den), den)


def random_stepfn(
    rng: random.Random,
    alpha: int,
    max_cells: int = 12,
    max_coeff: int = 3,
    vanish: bool = False,
    nonneg: bool = False,
    domain: Ord | None = None,
) -> StepFn:
    """Random step function on [1, domain] (default w^alpha); breakpoints below w^alpha."""
    top = domain if domain is not None else omega_pow(alpha)
    ncells = rng.randint(1, max_cells)
    points = set()
    for _ in range(ncells - 1):
        p = random_ordinal_below(rng, alpha, max_coeff)
        if p < top:
            points.add(p)
    ends = sorted(points) + [top]
    values = [random_value(rng) for _ in ends]
    if nonneg:
        values = [abs(v) for v in values]
    if vanish:
        values[-1] = Fraction(0)
    return StepFn(zip(ends, values))


def normalized(f: StepFn) -> StepFn:
    n = sup_norm(f)
    return scale(1 / n, f) if n else f


def random_unit_stepfn(rng: random.Random, alpha: int, **kw) -> StepFn:
    while True:
        f = random_stepfn(rng, alpha, **kw)
        if sup_norm(f):
            return normalized(f)


def all_ordinals(alpha: int, max_coeff: int, include_top: bool = True) -> list[Ord]:
    """Every 1 <= t < w^alpha with coefficients <= max_coeff, plus w^alpha."""
    out = [
        Ord.from_coefficients(c)
        for c in product(range(max_coeff + 1), repeat=alpha)
        if any(c)
    ]
    if include_top:
        out.append(omega_pow(alpha))
    return sorted(out)
