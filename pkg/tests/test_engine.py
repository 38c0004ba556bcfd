import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wallcross.arith import GaussRational as G
from wallcross.arith import Q, VRatFunc
from wallcross.engine import (
    HalfPlaneError,
    StabilityData,
    a_from_omega,
    a_q_from_omega_q,
    assemble,
    factorize,
    mobius,
    omega_from_a,
    omega_q_from_a,
    quasiclassical,
    transport,
)
from wallcross.lattice import Charge, SkewLattice, Truncation
from wallcross.qdilog import E_of
from wallcross.sampling import random_charge, random_stability_data
from wallcross.series import Flavor, T_auto, TorusAuto, arena, auto_compose, mul

L1 = SkewLattice([[0, 1], [-1, 0]])


def setup(N=8, k=1):
    L = SkewLattice([[0, k], [-k, 0]])
    T = Truncation([(1, 0), (0, 1)], (1, 1), N)
    z_in = Charge(L, [G(-1, 1), G(1, 1)])  # (1,0) has the larger argument
    z_out = Charge(L, [G(1, 1), G(-1, 1)])
    return L, T, z_in, z_out


def test_mobius():
    assert [mobius(n) for n in range(1, 13)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]


def test_a_from_omega_examples():
    a = a_from_omega({1: Q(1)}, 6)
    assert a == {m: Q(-1, m * m) for m in range(1, 7)}
    assert omega_from_a(a, 6) == {1: 1}
    a = a_from_omega({1: Q(1), 2: Q(-2)}, 2)
    assert a[1] == -1 and a[2] == Q(7, 4)


@given(st.dictionaries(st.integers(1, 10), st.integers(-5, 5).filter(bool), max_size=5))
def test_omega_a_round_trip(om):
    om = {n: Q(x) for n, x in om.items()}
    assert omega_from_a(a_from_omega(om, 10), 10) == om


def test_quantum_a_examples():
    one = VRatFunc.from_scalar(1)
    a = a_q_from_omega_q({1: one}, 5)
    assert omega_q_from_a(a, 5) == {1: one}
    assert omega_q_from_a({}, 5) == {}
    a = a_q_from_omega_q({1: one, 2: one}, 6)
    assert omega_q_from_a(a, 6) == {1: one, 2: one}


@given(st.dictionaries(st.integers(1, 6), st.integers(-3, 3).filter(bool), max_size=3))
def test_quantum_a_round_trip(om):
    om = {n: VRatFunc.from_scalar(x) for n, x in om.items()}
    assert omega_q_from_a(a_q_from_omega_q(om, 6), 6) == om


def test_assemble_is_clockwise_product():
    L, T, z_in, _ = setup()
    sd = StabilityData(L, T, z_in, {(1, 0): 1, (0, 1): 1})
    ar = arena(L, T)
    assert assemble(sd) == auto_compose(T_auto((1, 0), 1, ar), T_auto((0, 1), 1, ar))
    assert assemble(StabilityData(L, T, z_in, {})) == TorusAuto.identity(ar)


def test_assemble_quantum_single_ray():
    L, T, z_in, _ = setup()
    sd = StabilityData(L, T, z_in, {(1, 0): 1}, Flavor.QUANTUM)
    ar = arena(L, T, Flavor.QUANTUM)
    assert assemble(sd) == E_of(ar.monomial((1, 0)))


@pytest.mark.parametrize("N", [3, 6, 9])
def test_pentagon_factorization(N):
    L, T, z_in, z_out = setup(N)
    A = assemble(StabilityData(L, T, z_in, {(1, 0): 1, (0, 1): 1}))
    out = factorize(A, z_out).stability_data()
    assert out.omega == {(1, 0): 1, (0, 1): 1, (1, 1): 1}


def test_factorize_identity_is_empty():
    L, T, z_in, _ = setup()
    rd = factorize(TorusAuto.identity(arena(L, T)), z_in)
    assert rd.a_table() == {}


def test_transport_to_same_charge():
    L, T, z_in, _ = setup(6, 2)
    sd = StabilityData(L, T, z_in, {(1, 0): 1, (0, 1): 1, (1, 1): 3})
    assert transport(sd, z_in) == sd


def test_half_plane_enforced():
    L, T, _, _ = setup()
    Z = Charge(L, [G(1, 1), G(-1, -1)])
    with pytest.raises(HalfPlaneError):
        StabilityData(L, T, Z, {(0, 1): 1})


def test_quasiclassical_single_factor():
    L, T, z_in, _ = setup(6)
    sd = StabilityData(L, T, z_in, {(1, 0): 1}, Flavor.QUANTUM)
    qc = quasiclassical(sd)
    assert qc.poles == {}
    assert qc.data.omega == {(1, 0): 1}
    assert quasiclassical(StabilityData(L, T, z_in, {}, Flavor.QUANTUM)).data.omega == {}


def test_quasiclassical_kronecker_k1():
    L, T, z_in, z_out = setup(6)
    sd = StabilityData(L, T, z_in, {(1, 0): 1, (0, 1): 1}, Flavor.QUANTUM)
    out = factorize(assemble(sd), z_out).stability_data()
    assert quasiclassical(out).data.omega == {(1, 0): 1, (0, 1): 1, (1, 1): 1}


def test_quantum_factorize_detects_wrong_ordering():
    # E(x2) E(x1) != E(x1) E(x2) when the generators do not commute
    L, T, z_in, z_out = setup(5)
    ar = arena(L, T, Flavor.QUANTUM)
    x1, x2 = ar.monomial((1, 0)), ar.monomial((0, 1))
    A = mul(E_of(x1), E_of(x2))
    assert A != mul(E_of(x2), E_of(x1))
    table = factorize(A, z_out).stability_data().omega
    assert set(table) == {(1, 0), (0, 1), (1, 1)}


@pytest.mark.parametrize("flavor", ["classical", "quantum"])
def test_random_round_trips(flavor):
    rng = random.Random(7)
    for _ in range(15):
        sd = random_stability_data(rng, Flavor(flavor), max_N=6)
        A = assemble(sd)
        assert factorize(A, sd.charge).stability_data() == sd
        Z2 = random_charge(rng, sd.lattice)
        assert transport(transport(sd, Z2), sd.charge) == sd


@given(st.integers(0, 10_000))
def test_path_independence_property(seed):
    rng = random.Random(seed)
    sd = random_stability_data(rng, Flavor.CLASSICAL, max_N=5)
    Z2, Zm = random_charge(rng, sd.lattice), random_charge(rng, sd.lattice)
    assert transport(sd, Z2) == transport(transport(sd, Zm), Z2)


@given(st.integers(0, 10_000))
def test_transport_preserves_group_element(seed):
    rng = random.Random(seed)
    sd = random_stability_data(rng, Flavor.QUANTUM, max_N=5)
    Z2 = random_charge(rng, sd.lattice)
    assert assemble(transport(sd, Z2)) == assemble(sd)
