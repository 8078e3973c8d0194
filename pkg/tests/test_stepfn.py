import random
from fractions import Fraction as F

import pytest

from ordspr.embeddings import basis_x
from ordspr.ordinal import OMEGA, ZERO, Ord, add, omega_pow, parse
from ordspr.stepfn import (
    FnPair,
    StepFn,
    am_member,
    block_indicator,
    combine,
    constant,
    fn_abs,
    fn_add,
    fn_sub,
    glue,
    indicator,
    join,
    meet,
    restrict,
    scale,
    shift,
    sup_norm,
    to_fraction,
    vanishes_at_end,
    zero,
)

from helpers import random_stepfn

P = parse
W2 = omega_pow(2)
W3 = omega_pow(3)
N = Ord.from_int


def test_indicator_examples():
    f = indicator(ZERO, OMEGA, W2)
    assert f.eval(N(3)) == 1
    assert f.eval(P("w + 1")) == 0
    assert f.eval(OMEGA) == 1
    assert indicator(OMEGA, P("w*2"), W2).eval(P("w*2")) == 1


@pytest.mark.parametrize("a, b", [("w", "w"), ("w*2", "w"), ("0", "w^3")])
def test_indicator_rejects(a, b):
    with pytest.raises(ValueError):
        indicator(P(a), P(b), W2)


def test_block_indicator_examples():
    assert block_indicator((1, 5), 2) == indicator(N(4), N(5), W2)
    assert block_indicator((2,), 2) == indicator(OMEGA, P("w*2"), W2)
    assert block_indicator((1, 1, 1), 3) == indicator(ZERO, N(1), W3)
    assert block_indicator((2, 3), 3) == indicator(P("w^2 + w*2"), P("w^2 + w*3"), W3)
    for bad in [(), (1, 1, 1)]:
        with pytest.raises(ValueError):
            block_indicator(bad, 2)


def test_eval_examples():
    assert zero(W2).eval(P("w + 4")) == 0
    assert scale(F(1, 2), indicator(OMEGA, P("w*2"), W2)).eval(P("w + 7")) == F(1, 2)
    for bad in [ZERO, W3]:
        with pytest.raises(ValueError):
            zero(W2).eval(bad)


def test_combine_examples():
    assert meet(indicator(ZERO, OMEGA, W2), indicator(OMEGA, P("w*2"), W2)) == zero(W2)
    assert fn_abs(scale(F(-1, 2), constant(1, W2))) == constant(F(1, 2), W2)
    s = fn_add(indicator(ZERO, N(5), W2), indicator(N(3), OMEGA, W2))
    assert s.eval(N(4)) == 2
    with pytest.raises(ValueError):
        fn_add(zero(W2), zero(W3))


def test_sup_norm_examples():
    assert sup_norm(zero(W2)) == 0
    for n in range(1, 8):
        assert sup_norm(basis_x(n)) == 1
    f = fn_sub(constant(F(1, 2), W2), indicator(ZERO, N(1), W2))
    assert sorted(set(f.values)) == [F(-1, 2), F(1, 2)]
    assert sup_norm(f) == F(1, 2)


def test_canonical_form_merges_equal_cells():
    f = StepFn([(N(2), 1), (N(5), 1), (W2, 0)])
    assert f.ends == (N(5), W2)
    assert f == indicator(ZERO, N(5), W2)
    assert fn_sub(f, f) == zero(W2)


def test_constructor_validation():
    with pytest.raises(ValueError):
        StepFn([])
    with pytest.raises(ValueError):
        StepFn([(N(5), 1), (N(3), 0)])
    with pytest.raises(TypeError):
        StepFn([(W2, 0.5)])
    with pytest.raises(TypeError):
        to_fraction(0.25)


def test_shift_examples():
    assert shift(indicator(ZERO, N(1), W2), W2).ends == (add(W2, N(1)), add(W2, W2))
    f = indicator(OMEGA, P("w*3"), W2)
    assert shift(f, ZERO) == f
    moved = shift(constant(1, W3), W2)
    assert moved.start == W2 and moved.domain_end == W3


def test_glue_examples():
    rng = random.Random(4)
    g = random_stepfn(rng, 2)
    f = random_stepfn(rng, 3)
    h = glue(g, f)
    assert h.domain_end == W3
    for t in [N(1), N(9), OMEGA, P("w^2*2 + w + 1"), W3]:
        assert h.eval(add(W2, t)) == f.eval(t)
    assert glue(g, random_stepfn(rng, 2)).domain_end == P("w^2*2")


def test_vanishes_at_end_examples():
    assert all(vanishes_at_end(basis_x(n)) for n in range(1, 6))
    assert not vanishes_at_end(constant(1, W2))
    assert vanishes_at_end(zero(W2))


def test_am_member_examples():
    assert am_member(zero(W2))
    assert not am_member(indicator(ZERO, N(1), W2))
    assert am_member(indicator(ZERO, OMEGA, W2))
    # n=2 asks f(w+1)/2 == f(w*2)
    g = StepFn([(OMEGA, 0), (P("w + 1"), 1), (P("w*2"), F(1, 2)), (W2, 0)])
    assert am_member(g)
    f = StepFn([(OMEGA, 0), (P("w + 1"), 1), (P("w*2"), F(1, 3)), (W2, 0)])
    assert not am_member(f)
    with pytest.raises(ValueError):
        am_member(constant(1, W2))
    with pytest.raises(ValueError):
        am_member(zero(W3))


def _brute_am(f: StepFn, n_max: int) -> bool:
    for n in range(1, n_max):
        left = f.eval(Ord.from_coefficients([1, n - 1]))
        if F(left, n) != f.eval(Ord.from_coefficients([0, n])):
            return False
    return True


def test_am_member_matches_brute_force():
    rng = random.Random(11)
    hits = 0
    for _ in range(300):
        f = random_stepfn(rng, 2, max_cells=5, max_coeff=3, vanish=True)
        if rng.random() < 0.5:
            # plant the constraint on the first block so some samples satisfy it
            f = fn_add(f, scale(-f.eval(OMEGA) + f.eval(N(1)), indicator(N(1), OMEGA, W2)))
        assert am_member(f) == _brute_am(f, 20)
        hits += am_member(f)
    assert hits > 0


# -- randomized algebra -------------------------------------------------------

def _triples(seed, count=150, alpha=3):
    rng = random.Random(seed)
    for _ in range(count):
        yield (random_stepfn(rng, alpha), random_stepfn(rng, alpha), random_stepfn(rng, alpha))


def test_lattice_identities():
    for f, g, h in _triples(1):
        assert fn_abs(f) == join(f, scale(-1, f))
        assert meet(f, g) == meet(g, f) and join(f, g) == join(g, f)
        assert meet(meet(f, g), h) == meet(f, meet(g, h))
        assert join(join(f, g), h) == join(f, join(g, h))
        assert meet(f, join(f, g)) == f
        assert join(f, meet(f, g)) == f
        assert fn_add(meet(f, g), join(f, g)) == fn_add(f, g)


def test_am_property_of_sup_norm():
    for f, g, _ in _triples(2):
        f, g = fn_abs(f), fn_abs(g)
        assert sup_norm(join(f, g)) == max(sup_norm(f), sup_norm(g))


def test_vector_space_operations():
    for f, g, _ in _triples(3, 60):
        assert f + g == fn_add(f, g)
        assert f - g == fn_add(f, scale(-1, g))
        assert -f == scale(-1, f)
        assert (f & g) == meet(f, g) and (f | g) == join(f, g)
        assert abs(f) == fn_abs(f)
        assert sup_norm(scale(F(-3, 2), f)) == F(3, 2) * sup_norm(f)
        assert combine(lambda x, y: 2 * x - y, f, g) == fn_sub(scale(2, f), g)


def _probe_points(f: StepFn):
    for e in f.ends:
        yield e
        if e < f.domain_end:
            yield add(e, N(1))


def test_eval_boundary_exhaustion():
    for f, g, _ in _triples(4, 80):
        for t in _probe_points(f):
            expected = next(v for e, v in f.cells if t <= e)
            assert f.eval(t) == expected
        s = fn_add(f, g)
        for t in list(_probe_points(f)) + list(_probe_points(g)):
            assert s.eval(t) == f.eval(t) + g.eval(t)
            assert meet(f, g).eval(t) == min(f.eval(t), g.eval(t))


def test_glue_and_shift_contracts():
    rng = random.Random(5)
    for _ in range(80):
        g = random_stepfn(rng, 2)
        f = random_stepfn(rng, rng.choice([2, 3]))
        h = glue(g, f)
        assert restrict(h, ZERO, W2) == g.cells
        moved = shift(f, W2)
        assert sup_norm(moved) == sup_norm(f)
        f2 = random_stepfn(rng, f.domain_end.degree, domain=f.domain_end)
        assert shift(meet(f, f2), W2) == meet(moved, shift(f2, W2))
        assert shift(join(f, f2), W2) == join(moved, shift(f2, W2))


def test_restrict_examples():
    f = StepFn([(N(3), 1), (OMEGA, 2), (W2, 0)])
    assert restrict(f, N(1), N(5)) == [(N(3), 1), (N(5), 2)]
    assert restrict(f, N(3), OMEGA) == [(OMEGA, 2)]
    with pytest.raises(ValueError):
        restrict(f, N(5), N(2))


def test_json_round_trip():
    rng = random.Random(6)
    for _ in range(50):
        f = random_stepfn(rng, 3)
        assert StepFn.from_json(f.to_json()) == f
    moved = shift(random_stepfn(rng, 2), W2)
    assert StepFn.from_json(moved.to_json()) == moved
    pair = FnPair(random_stepfn(rng, 2), random_stepfn(rng, 3))
    assert FnPair.from_json(pair.to_json()) == pair
    assert pair.norm() == max(sup_norm(pair.left), sup_norm(pair.right))
    data = indicator(ZERO, OMEGA, W2).to_json()
    assert data == {
        "domain": [[2, 1]],
        "cells": [{"end": [[1, 1]], "value": "1"}, {"end": [[2, 1]], "value": "0"}],
    }


@pytest.mark.parametrize(
    "data",
    [
        {"cells": []},
        {"domain": [[2, 1]], "cells": [{"end": [[1, 1]], "value": "1"}]},
        {"domain": [[2, 1]], "cells": [{"end": [[2, 1]], "value": "1/0"}]},
        {"domain": [[2, 1]], "cells": [{"end": [[2, 1]]}]},
    ],
)
def test_json_rejects_malformed(data):
    with pytest.raises(ValueError):
        StepFn.from_json(data)
