import itertools
import random
from fractions import Fraction as F

import numpy as np
import pytest

from ordspr import _kernels
from ordspr.embeddings import T_glued, basis_x, self_embed_operator, self_embed_w2, urysohn_embed
from ordspr.ordinal import OMEGA, ZERO, add, omega_pow, parse
from ordspr.spr import (
    INFINITY,
    SprCertificate,
    adp_search,
    combination,
    meet_norm,
    property_star_check,
    spr_deficiency,
    spr_ratio,
    verify_spr_bound,
)
from ordspr.stepfn import (
    FnPair,
    constant,
    fn_abs,
    fn_sub,
    indicator,
    scale,
    sup_norm,
)

from helpers import normalized, random_stepfn, random_unit_stepfn

P = parse
W2 = omega_pow(2)
XB3 = [basis_x(n) for n in (1, 2, 3)]
DISJOINT = [indicator(ZERO, OMEGA, W2), indicator(OMEGA, P("w*2"), W2)]


def grid_oracle(basis, k):
    """Brute-force minimum meet norm over normalized grid pairs, in StepFn algebra."""
    funcs = []
    for c in itertools.product(range(-k, k + 1), repeat=len(basis)):
        f = combination(basis, [F(x, k) for x in c])
        if sup_norm(f):
            funcs.append(normalized(f))
    return min(meet_norm(f, g) for f, g in itertools.combinations(funcs, 2))


# -- metrics --------------------------------------------------------------------

def test_meet_norm_examples():
    assert meet_norm(*DISJOINT) == 0
    rng = random.Random(0)
    for _ in range(20):
        f = random_stepfn(rng, 3)
        assert meet_norm(f, f) == sup_norm(f)
    assert meet_norm(basis_x(1), basis_x(2)) == F(1, 2)
    assert meet_norm(FnPair(*DISJOINT), FnPair(DISJOINT[0], DISJOINT[0])) == 1
    with pytest.raises(ValueError):
        meet_norm(DISJOINT[0], constant(1, OMEGA))
    with pytest.raises(ValueError):
        meet_norm(FnPair(*DISJOINT), DISJOINT[0])


def test_spr_deficiency_and_ratio_examples():
    rng = random.Random(1)
    for _ in range(20):
        f = random_stepfn(rng, 2)
        assert spr_deficiency(f, f) == 0
        assert spr_deficiency(f, -f) == 0
        assert spr_ratio(f, f) == 0
        assert spr_ratio(f, -f) == 0
    assert spr_deficiency(*DISJOINT) == 1
    assert spr_ratio(*DISJOINT) == 1
    f = indicator(ZERO, OMEGA, W2)
    g = fn_sub(f, scale(2, indicator(ZERO, P("1"), W2)))
    # |f| == |g| but g is not +-f
    assert fn_abs(f) == fn_abs(g)
    assert spr_ratio(f, g) == INFINITY


# -- searches ---------------------------------------------------------------------

def test_adp_search_examples():
    cert = adp_search(DISJOINT, grid_step=F(1, 2))
    assert cert.min_value == 0
    assert sorted(map(abs, cert.witness_a + cert.witness_b)) == [0, 0, 1, 1]
    assert adp_search([constant(1, W2)], grid_step=F(1, 3)).min_value == 1
    assert adp_search([constant(1, W2)], budget=4, seed=1).min_value == 1
    cert = adp_search(DISJOINT, budget=8, seed=3)
    assert cert.min_value == 0 and cert.replay() == 0


def test_adp_search_rejects_bad_input():
    with pytest.raises(ValueError):
        adp_search([], grid_step=F(1, 2))
    with pytest.raises(ValueError):
        adp_search(XB3, grid_step=F(2, 3))
    with pytest.raises(ValueError):
        adp_search([basis_x(1), constant(1, OMEGA)], grid_step=F(1, 2))
    with pytest.raises(ValueError):
        adp_search(XB3, budget=0)


@pytest.mark.parametrize("k", [1, 2])
def test_exhaustive_matches_stepfn_oracle(k):
    assert adp_search(XB3, grid_step=F(1, k)).min_value == grid_oracle(XB3, k)
    rng = random.Random(k)
    for _ in range(3):
        basis = [random_stepfn(rng, 2, max_cells=5) for _ in range(3)]
        cert = adp_search(basis, grid_step=F(1, k))
        assert cert.min_value == grid_oracle(basis, k)
        assert cert.replay() == cert.min_value


def test_certificate_witnesses_are_normalized_and_replay():
    for basis, kw in [(XB3, {"grid_step": F(1, 4)}), (XB3, {"budget": 6, "seed": 5})]:
        cert = adp_search(basis, **kw)
        assert sup_norm(combination(basis, cert.witness_a)) == 1
        assert sup_norm(combination(basis, cert.witness_b)) == 1
        assert cert.replay() == cert.min_value
        again = SprCertificate.from_json(cert.to_json())
        assert again.replay() == cert.min_value
        assert again.to_json() == cert.to_json()


def test_random_search_is_deterministic():
    a = adp_search(XB3, budget=5, seed=42)
    b = adp_search(XB3, budget=5, seed=42)
    assert (a.min_value, a.witness_a, a.witness_b) == (b.min_value, b.witness_a, b.witness_b)
    assert a.min_value >= F(1, 3)


def test_monotone_refinement():
    rng = random.Random(2)
    for basis in [XB3, [random_stepfn(rng, 2, max_cells=6) for _ in range(3)]]:
        values = [adp_search(basis, grid_step=F(1, k)).min_value for k in (1, 2, 4)]
        assert values[0] >= values[1] >= values[2]


# -- the integer kernel -------------------------------------------------------------

def kernel_oracle(absvals, norms):
    best = (2, 1, -1, -1)
    for i, j in itertools.combinations(range(len(norms)), 2):
        v = F(max(min(a * norms[j], b * norms[i]) for a, b in zip(absvals[i], absvals[j])), norms[i] * norms[j])
        if v < F(best[0], best[1]):
            best = (v.numerator, v.denominator, i, j)
    return best


def test_kernel_paths_agree():
    rng = np.random.default_rng(0)
    for trial in range(30):
        n, cells = int(rng.integers(2, 25)), int(rng.integers(1, 6))
        absvals = rng.integers(0, 9, size=(n, cells))
        absvals[:, 0] += 1
        norms = absvals.max(axis=1)
        expected = kernel_oracle(absvals.tolist(), norms.tolist())
        got_fast = _kernels.grid_min_pair(absvals, norms)
        got_np = _kernels.grid_min_pair_numpy(absvals.astype(np.int64), norms.astype(np.int64))
        got_obj = _kernels.grid_min_pair_numpy(absvals.astype(object), norms.astype(object))
        for got in (got_fast, got_np, got_obj):
            assert F(got[0], got[1]) == F(expected[0], expected[1])
            i, j = got[2], got[3]
            assert F(int(max(min(a * norms[j], b * norms[i]) for a, b in zip(absvals[i], absvals[j]))),
                     int(norms[i] * norms[j])) == F(got[0], got[1])


def test_kernel_big_entries_use_python_ints():
    big = _kernels.INT64_SAFE_MAX * 10
    absvals = np.array([[big, 1], [1, big], [big, big]], dtype=np.int64)
    norms = absvals.max(axis=1)
    num, den, i, j = _kernels.grid_min_pair(absvals, norms)
    assert F(num, den) == F(1, big) and (i, j) == (0, 1)


def test_kernel_degenerate_input():
    assert _kernels.grid_min_pair(np.ones((1, 3), dtype=np.int64), np.ones(1, dtype=np.int64))[2] == -1


# -- verify ----------------------------------------------------------------------

def test_verify_examples():
    ok, cert = verify_spr_bound(XB3, 3, F(1, 4), basis_name="xbasis:3")
    assert ok and cert.passed and cert.min_value >= F(1, 3)
    ok, cert = verify_spr_bound(DISJOINT, 1000, F(1, 2))
    assert not ok and cert.min_value == 0 and cert.replay() == 0
    rng = random.Random(3)
    images = [self_embed_w2(random_stepfn(rng, 2, vanish=True, max_cells=4)) for _ in range(4)]
    ok, cert = verify_spr_bound(images[:3], 12, F(1, 4))
    assert ok
    with pytest.raises(ValueError):
        verify_spr_bound(XB3, 0, F(1, 2))
    with pytest.raises(ValueError):
        verify_spr_bound(XB3, 3, None)


# -- property (*) -----------------------------------------------------------------------

def test_property_star_examples():
    rng = random.Random(4)
    samples = [random_stepfn(rng, 3) for _ in range(10)]
    ident = urysohn_embed(3, omega_pow(3))
    pts = sorted({t for f in samples for t in f.ends})
    assert property_star_check(ident, {t: t for t in pts}, samples)
    op = T_glued(3)
    assert property_star_check(op, {t: add(W2, t) for t in pts}, samples)
    half = type(op)(name="half", source_domain=op.source_domain, target_domain=op.source_domain,
                    apply=lambda f: scale(F(1, 2), f))
    assert not property_star_check(half, {t: t for t in pts}, [constant(1, omega_pow(3))])
    with pytest.raises(ValueError):
        property_star_check(ident, {omega_pow(4): omega_pow(3)}, samples)


def test_property_star_implies_modulus_domination():
    rng = random.Random(5)
    for op, alpha in [(T_glued(3), 3), (self_embed_operator(), 2), (urysohn_embed(2, P("w^3")), 2)]:
        vanish = op.name == "self-w2"
        for _ in range(20):
            f = random_stepfn(rng, alpha, vanish=vanish)
            g = random_stepfn(rng, alpha, vanish=vanish)
            assert property_star_check(op, {t: op.witness(t) for t in f.ends + g.ends}, [f, g])
            lhs = sup_norm(fn_sub(fn_abs(f), fn_abs(g)))
            rhs = sup_norm(fn_sub(fn_abs(op(f)), fn_abs(op(g))))
            assert lhs <= rhs


def test_ratio_of_images_bounded_by_source_constant():
    # x-basis verified 3-SPR on the grid; the isometry keeps (*), so image ratios stay <= 3
    ok, _ = verify_spr_bound(XB3, 3, F(1, 2))
    assert ok
    op = urysohn_embed(2, P("w^3*2"))
    k = 2
    grid = [c for c in itertools.product(range(-k, k + 1), repeat=3) if any(c)]
    rng = random.Random(6)
    for _ in range(60):
        a, b = rng.sample(grid, 2)
        f = combination(XB3, [F(x, k) for x in a])
        g = combination(XB3, [F(x, k) for x in b])
        r = spr_ratio(op(f), op(g))
        assert r <= 3
        assert spr_ratio(f, g) == r


def test_meet_norm_of_unit_functions_is_at_most_one():
    rng = random.Random(7)
    for _ in range(30):
        f, g = random_unit_stepfn(rng, 2), random_unit_stepfn(rng, 2)
        assert 0 <= meet_norm(f, g) <= 1
