from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wallcross.arith import (
    GaussRational,
    PoleRemains,
    Q,
    VPoly,
    VRatFunc,
    jet_eval,
    limit_at_minus_one,
    qstr,
    ratfunc_normalize,
    var,
)

small = st.integers(-6, 6)
rats = st.builds(lambda a, b: Q(a, b), st.integers(-20, 20), st.integers(1, 9))


@st.composite
def vpolys(draw, max_terms=4):
    terms = draw(st.dictionaries(st.integers(-4, 6), rats, max_size=max_terms))
    return VPoly(terms)


@st.composite
def ratfuncs(draw):
    n = draw(vpolys())
    d = draw(vpolys().filter(bool))
    return VRatFunc.from_vpoly(n) / VRatFunc.from_vpoly(d)


def P(*coeffs, lo=0):
    return VPoly({lo + i: c for i, c in enumerate(coeffs) if c})


def test_q_and_qstr():
    assert Q("3/4") == Fraction(3, 4)
    assert qstr(Q(-6, 4)) == "-3/2"
    assert qstr(Q(5)) == "5"
    with pytest.raises(TypeError):
        Q(0.5)


def test_normalize_examples():
    # (v^2 - 1)/(v - 1) = v + 1
    assert ratfunc_normalize(P(-1, 0, 1), P(-1, 1)) == VRatFunc.from_vpoly(P(1, 1))
    assert ratfunc_normalize(P(0, 1), P(0, 1)) == VRatFunc.from_vpoly(P(1))
    # monic denominator: 2v^3 / 4v = v^2 / 2
    r = ratfunc_normalize(P(2, lo=3), P(4, lo=1))
    assert r.numerator == VPoly({2: Q(1, 2)})
    assert r.denominator == VPoly({0: 1})


def test_normalized_denominator_is_monic_with_nonzero_constant():
    r = ratfunc_normalize(P(1, 2, 3), P(0, 0, 6, 4))
    d = r.denominator
    assert d.low == 0
    assert d.coeff(d.high) == 1


def test_limit_examples():
    one = VRatFunc.from_vpoly(P(1))
    assert limit_at_minus_one(one / VRatFunc.from_vpoly(P(-1, 0, 1)), 1) == 1
    assert limit_at_minus_one(VRatFunc.from_vpoly(P(0, 1)) / VRatFunc.from_vpoly(P(-1, 0, 1)), 1) == -1
    with pytest.raises(PoleRemains) as e:
        limit_at_minus_one(one / VRatFunc.from_vpoly(P(-1, 0, 1) * P(-1, 0, 1)), 1)
    assert e.value.pole_order == 2


def test_jet_examples():
    x, y = var(0), var(1)
    j = jet_eval(x * y, [2, 3])
    assert (j.value, j.partials) == (6, (3, 2))
    j = jet_eval(1 / (1 - y), [0, 2])
    assert (j.value, j.partials[1]) == (-1, 1)
    # d/dy x(1-y)^2 = -2x(1-y) = 4 at (1, 3)
    j = jet_eval(x * (1 - y) ** 2, [1, 3])
    assert (j.value, j.partials) == (4, (4, 4))


def test_jet_callable_form():
    j = jet_eval(lambda a, b: a * a + b, [3, 5])
    assert (j.value, j.partials) == (14, (6, 1))


def test_gauss_rational():
    z = GaussRational(1, 2) * GaussRational(3, -1)
    assert z == GaussRational(5, 5)
    assert GaussRational.parse(["1/2", "-3"]) == GaussRational(Q(1, 2), -3)
    assert not GaussRational(0, 0)


def test_vratfunc_json_round_trip():
    f = VRatFunc.from_vpoly(P(1, 2, lo=-1)) / VRatFunc.from_vpoly(P(1, 0, 1))
    assert VRatFunc.from_json(f.to_json()) == f
    assert VRatFunc.from_json("3/2") == VRatFunc.from_scalar(Q(3, 2))


@given(ratfuncs(), ratfuncs())
def test_ratfunc_commutative(f, g):
    assert f * g == g * f
    assert f + g == g + f


@given(ratfuncs(), ratfuncs())
def test_ratfunc_add_sub(f, g):
    assert (f + g) - g == f


@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_ratfunc_distributive(f, g, h):
    assert f * (g + h) == f * g + f * h


@given(ratfuncs().filter(bool))
def test_ratfunc_inverse(f):
    assert f * f.inverse() == VRatFunc.from_scalar(1)


@given(vpolys(), vpolys(), rats)
def test_vpoly_evaluation_is_a_ring_map(p, q, x):
    if x == 0:
        return
    assert (p * q)(x) == p(x) * q(x)
    assert (p + q)(x) == p(x) + q(x)


@given(ratfuncs(), st.integers(-5, 5))
def test_shift_is_multiplication_by_monomial(f, k):
    assert f.shift(k) == f * VRatFunc.monomial(k)


@given(vpolys(), vpolys().filter(bool))
def test_normalize_is_canonical(n, d):
    # scaling numerator and denominator together does not change the normal form
    s = P(3, 0, 2)
    assert ratfunc_normalize(n, d) == ratfunc_normalize(n * s, d * s)


@given(vpolys(), st.integers(0, 3))
def test_limit_matches_evaluation_when_regular(p, k):
    # (v^2 - 1) p / (v + 1) -> p(-1) * (-2) as v -> -1, no pole
    f = VRatFunc.from_vpoly(p) / VRatFunc.from_vpoly(P(1, 1))
    assert limit_at_minus_one(f, 1) == -2 * p(Q(-1))
