import random

import pytest

from wallcross import hall
from wallcross.arith import Q
from wallcross.hall import (
    BudgetExceeded,
    FqAlgebraSpec,
    FqModule,
    HallContext,
    enumerate_modules,
    gl_count,
    hall_constant,
    ideal_count_by_kernels,
    ideal_count_direct,
    ideal_side,
    subspaces,
    verify_ideal_sum,
)
from _paths import DATA

F2x3 = FqAlgebraSpec.truncated(2, 3)


def gaussian_binomial(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def test_group_orders_and_subspace_counts():
    assert gl_count(1, 3) == 2
    assert gl_count(2, 2) == 6
    assert gl_count(3, 2) == 168
    for n, k, p in ((3, 1, 2), (4, 2, 2), (3, 2, 3), (2, 0, 5)):
        assert sum(1 for _ in subspaces(n, k, p)) == gaussian_binomial(n, k, p)


def test_spec_validation_and_json():
    with pytest.raises(ValueError):
        FqAlgebraSpec(4, 1)
    with pytest.raises(ValueError):
        FqAlgebraSpec(2, 2, "truncated", 3)
    with pytest.raises(ValueError):
        FqAlgebraSpec(2, 1, "monomial", words=((1,),))
    assert FqAlgebraSpec.load(str(DATA / "f2x3.json")) == F2x3
    assert FqAlgebraSpec.load(str(DATA / "f3x3.json")) == FqAlgebraSpec.truncated(3, 3)
    assert FqAlgebraSpec.load(str(DATA / "free2.json")) == FqAlgebraSpec.free(2, 2)
    for s in (F2x3, FqAlgebraSpec.free(3, 2, True), FqAlgebraSpec(2, 2, "monomial", words=((0, 1),))):
        assert FqAlgebraSpec.from_json(s.to_json()) == s


def test_nilpotent_two_dimensional_modules():
    mods = enumerate_modules(F2x3, 2)
    # zero action and one Jordan block
    assert sorted((aut, gen) for _, aut, gen in mods) == [(2, 2), (6, 0)]
    assert [(aut, gen) for _, aut, gen in enumerate_modules(F2x3, 1)] == [(1, 1)]


def test_hall_constant_examples():
    S = FqModule(1, ((0,),), 2)
    SS = FqModule(2, ((0, 0, 0, 0),), 2)
    J = FqModule(2, ((0, 0, 1, 0),), 2)
    Z = FqModule(0, ((),), 2)
    assert hall_constant(S, S, SS, F2x3) == 3
    assert hall_constant(S, S, J, F2x3) == 1
    assert hall_constant(Z, J, J, F2x3) == 1
    assert hall_constant(J, Z, J, F2x3) == 1
    with pytest.raises(ValueError):
        hall_constant(S, S, S, F2x3)


@pytest.mark.parametrize("spec,N", [(F2x3, 3), (FqAlgebraSpec.truncated(3, 2), 3), (FqAlgebraSpec.free(2, 2), 2)])
def test_orbit_stabilizer(spec, N):
    ctx = HallContext(spec, N)
    for n in range(N + 1):
        assert sum(gl_count(n, spec.p) // c.aut for c in ctx.classes[n]) == ctx.valid_count[n]
        assert all(c.orbit * c.aut == gl_count(n, spec.p) for c in ctx.classes[n])


def test_submodule_counts_by_dimension():
    # summing c(E, F, G) over E, F of fixed dimensions counts submodules of G
    ctx = HallContext(F2x3, 3)
    for G in ctx.all_classes():
        by_dim = {}
        for (E, F), c in ctx.constants_into(G).items():
            by_dim[E[0]] = by_dim.get(E[0], 0) + c
        for d in range(G.dim + 1):
            direct = sum(1 for U in subspaces(G.dim, d, 2) if ctx.split(G.rep, U) is not None)
            assert by_dim.get(d, 0) == direct


@pytest.mark.parametrize("seed", range(5))
def test_product_is_associative(seed):
    ctx = HallContext(F2x3, 3)
    rng = random.Random(seed)
    keys = [c.key for c in ctx.all_classes()]

    def elt():
        return {k: Q(rng.randint(-4, 4), rng.randint(1, 3)) for k in rng.sample(keys, 4)}

    a, b, c = elt(), elt(), elt()
    lhs = ctx.product(ctx.product(a, b), c)
    rhs = ctx.product(a, ctx.product(b, c))
    keys = set(lhs) | set(rhs)
    assert all(lhs.get(k, 0) == rhs.get(k, 0) for k in keys)


def test_inverse():
    ctx = HallContext(F2x3, 3)
    A = hall.A_series(F2x3, 3)
    prod = ctx.product(A, hall.hall_inverse(ctx, A))
    assert {k: v for k, v in prod.items() if v} == {(0, 0): 1}


@pytest.mark.parametrize("p", [2, 3])
def test_ideal_oracles_agree(p):
    spec = FqAlgebraSpec.truncated(p, 3)
    ctx = HallContext(spec, 3)
    kern = ideal_count_by_kernels(spec, 3)
    direct = ideal_count_direct(spec, 3)
    assert kern == direct
    # 1, (x), (x^2), 0: one ideal per codimension
    assert sorted(k[0] for k in kern) == [0, 1, 2, 3]
    side = ideal_side(spec, 3)
    assert {k: Q(v) for k, v in kern.items()} == side


def test_polynomial_ring_ideal_count():
    # ideals of codimension n in F_p[x] are the p^n monic degree-n polynomials
    for p, N in ((2, 3), (3, 2)):
        counts = ideal_count_by_kernels(FqAlgebraSpec.free(p, 1), N)
        for n in range(N + 1):
            assert sum(c for k, c in counts.items() if k[0] == n) == p**n


@pytest.mark.parametrize(
    "spec,N",
    [(F2x3, 3), (FqAlgebraSpec.truncated(3, 3), 3), (FqAlgebraSpec.free(2, 1), 3), (FqAlgebraSpec.free(2, 2), 2)],
)
def test_ideal_sum_identity(spec, N):
    r = verify_ideal_sum(spec, N)
    assert r.passed, r.to_json()
    assert all(r.per_degree.values())


def test_identity_fails_without_the_q_shift(monkeypatch):
    real = hall.A_series
    monkeypatch.setattr(hall, "A_series", lambda spec, N, scale_q=False, budget=hall.DEFAULT_BUDGET: real(spec, N, False, budget))
    hall._CTX.clear()
    assert not verify_ideal_sum(FqAlgebraSpec.truncated(2, 2), 2).passed


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        HallContext(FqAlgebraSpec.free(3, 2), 3, budget=10_000)
