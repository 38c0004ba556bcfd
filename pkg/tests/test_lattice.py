import pytest
from hypothesis import given
from hypothesis import strategies as st

from wallcross.arith import GaussRational as G
from wallcross.arith import Q
from wallcross.lattice import (
    Charge,
    Order,
    SkewLattice,
    SupportForm,
    Truncation,
    ZeroCharge,
    clockwise_cmp,
    double_lattice,
    enumerate_cone,
    sort_clockwise,
    support_check,
)
from wallcross.lattice import _det


def test_pairing_examples():
    L = SkewLattice([[0, 1], [-1, 0]])
    assert L.pair((1, 0), (0, 1)) == 1
    assert SkewLattice([[0, 3], [-3, 0]]).pair((1, 0), (0, 1)) == 3


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2), st.integers(-3, 3))
def test_pairing_skew(g, k):
    L = SkewLattice([[0, k], [-k, 0]])
    assert L.pair(g, g) == 0


def test_not_skew_rejected():
    with pytest.raises(ValueError):
        SkewLattice([[0, 1], [1, 0]])


def test_clockwise_examples():
    L = SkewLattice([[0, 1], [-1, 0]])
    Z = Charge(L, [G(-1, 1), G(1, 1)])
    assert clockwise_cmp(Z, (1, 0), (0, 1)) is Order.BEFORE
    Z = Charge(L, [G(1, 1), G(2, 2)])
    assert clockwise_cmp(Z, (1, 0), (0, 1)) is Order.SAME
    Z = Charge(L, [G(0, 1), G(-1, 1)])
    assert clockwise_cmp(Z, (1, 0), (0, 1)) is Order.AFTER
    with pytest.raises(ZeroCharge):
        clockwise_cmp(Charge(L, [G(0, 0), G(1, 1)]), (1, 0), (0, 1))


def test_sort_clockwise_decreasing_argument():
    L = SkewLattice([[0, 1], [-1, 0]])
    Z = Charge(L, [G(-1, 1), G(1, 1)])
    assert sort_clockwise(Z, [(0, 1), (1, 1), (1, 0)]) == [(1, 0), (1, 1), (0, 1)]


def test_double_lattice():
    D = double_lattice(SkewLattice([[0]]))
    assert D.form == ((0, 1), (-1, 0))
    D = double_lattice(SkewLattice([[0, 2], [-2, 0]]))
    assert abs(_det([[Q(x) for x in r] for r in D.form])) == 1


@given(st.lists(st.integers(-3, 3), min_size=9, max_size=9))
def test_double_lattice_unimodular(xs):
    B = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(i + 1, 3):
            B[i][j] = xs[3 * i + j]
            B[j][i] = -xs[3 * i + j]
    D = double_lattice(SkewLattice(B))
    assert abs(_det([[Q(x) for x in r] for r in D.form])) == 1


def test_truncation_examples():
    T = Truncation([(1, 0), (0, 1)], (1, 1), 2)
    assert [p for p, _ in enumerate_cone(T)] == [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert [p for p, _ in enumerate_cone(Truncation([(1, 0)], (1, 0), 3))] == [(1, 0), (2, 0), (3, 0)]
    pts = [p for p, _ in enumerate_cone(Truncation([(1, 1), (1, 2)], (0, 1), 3))]
    assert set(pts) == {(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)}
    degs = [d for _, d in enumerate_cone(Truncation([(1, 1), (1, 2)], (0, 1), 3))]
    assert degs == sorted(degs)


def test_truncation_requires_positive_degree():
    with pytest.raises(ValueError):
        Truncation([(1, -1)], (1, 1), 3)


@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 8))
def test_truncation_matches_brute_force(a, b, N):
    gens = [(1, 0), (a, b)]
    T = Truncation(gens, (1, 1), N)
    brute = set()
    for i in range(N + 1):
        for j in range(N + 1):
            if i + j and i * 1 + j * (a + b) <= N:
                brute.add((i + j * a, j * b))
    assert {p for p, _ in T.points()} == brute


def test_support_check_examples():
    L = SkewLattice([[0, 1], [-1, 0]])
    inj = Charge(L, [G(1, 0), G(0, 1)])
    assert support_check([(1, 0)], inj, SupportForm(L, [[1, 0], [0, 1]]))
    Z = Charge(L, [G(1, 0), G(1, 0)])
    assert not support_check([], Z, SupportForm(L, [[1, 0], [0, 1]]))
    assert support_check([(1, 1)], Z, SupportForm(L, [[1, 2], [2, 1]]))
