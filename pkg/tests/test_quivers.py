import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wallcross import quivers as qv
from wallcross.arith import Q
from wallcross.quivers import (
    NotCluster,
    Quiver,
    class_pairing_matrix,
    classical_cluster_map,
    cluster_map_classical_check,
    cluster_map_quantum,
    mutate_classes,
    mutate_matrix,
    on_N,
    point_on_N,
)
from _paths import DATA


def test_kronecker_mutation_reverses_arrows():
    for k in (1, 2, 3):
        K = Quiver.kronecker(k)
        assert mutate_matrix(K, 0).arrows == ((0, 0), (k, 0))
        assert mutate_matrix(K, 1).arrows == ((0, 0), (k, 0))


def test_A3_middle_mutation_gives_oriented_cycle():
    Qm = mutate_matrix(Quiver.linear_A(3), 1)
    # 0 -> 1 -> 2 becomes 1 -> 0, 2 -> 1 plus the composite 0 -> 2
    assert Qm.arrows == ((0, 0, 1), (1, 0, 0), (0, 1, 0))


def test_json_round_trip_and_vertex_check():
    A = Quiver.linear_A(3)
    assert Quiver.from_json(A.to_json()) == A
    with pytest.raises(ValueError):
        Quiver.from_json({"vertices": 4, "arrows": A.to_json()["arrows"]})
    with pytest.raises(ValueError):
        Quiver([[0, -1], [0, 0]])


def test_data_files_load():
    for name, n in (("kronecker1", 2), ("kronecker2", 2), ("a2", 2), ("a3", 3)):
        assert Quiver.load(str(DATA / f"{name}.json")).n == n


def skew_quivers(max_n=4, max_arrows=3):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                x = draw(st.integers(-max_arrows, max_arrows))
                a[i][j], a[j][i] = x, -x
        return Quiver.from_skew(a), draw(st.integers(0, n - 1))

    return build()


@given(skew_quivers())
def test_mutation_is_involutive(qk):
    Qv, k = qk
    assert mutate_matrix(mutate_matrix(Qv, k), k) == Qv


@given(skew_quivers())
def test_mutated_classes_carry_mutated_pairing(qk):
    Qv, k = qk
    std = [tuple(int(i == j) for j in range(Qv.n)) for i in range(Qv.n)]
    vp = mutate_classes(std, Qv, k)
    assert class_pairing_matrix(vp, Qv) == mutate_matrix(Qv, k).skew()


def _det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    return sum((-1) ** c * M[0][c] * _det([r[:c] + r[c + 1:] for r in M[1:]]) for c in range(n))


@given(skew_quivers())
def test_mutated_classes_form_a_basis(qk):
    Qv, k = qk
    std = [tuple(int(i == j) for j in range(Qv.n)) for i in range(Qv.n)]
    assert abs(_det([list(v) for v in mutate_classes(std, Qv, k)])) == 1


def test_non_cluster_quivers_rejected():
    loop = Quiver([[1, 0], [0, 0]])
    two_cycle = Quiver([[0, 1], [1, 0]])
    for bad in (loop, two_cycle):
        assert not bad.is_cluster()
        with pytest.raises(NotCluster):
            mutate_matrix(bad, 0)
        with pytest.raises(NotCluster):
            cluster_map_quantum(bad, 0, 3)
        with pytest.raises(NotCluster):
            cluster_map_classical_check(bad, 0, 1)


@pytest.mark.parametrize(
    "Qv", [Quiver.kronecker(1), Quiver.kronecker(2), Quiver.linear_A(2), Quiver.linear_A(3)], ids=["K1", "K2", "A2", "A3"]
)
def test_quantum_conjugation_matches_closed_forms(Qv):
    for k in range(Qv.n):
        rep = cluster_map_quantum(Qv, k, 6)
        assert rep.is_zero, rep.to_json()


def test_single_vertex_quiver():
    Qv = Quiver([[0]])
    assert cluster_map_quantum(Qv, 0, 8).is_zero
    assert cluster_map_classical_check(Qv, 0, 20).passed


@pytest.mark.parametrize("Qv", [Quiver.kronecker(1), Quiver.kronecker(3), Quiver.linear_A(3)], ids=["K1", "K3", "A3"])
def test_classical_map_is_poisson_and_maps_N(Qv):
    for k in range(Qv.n):
        rep = cluster_map_classical_check(Qv, k, 40, seed=k)
        assert rep.passed, rep.to_json()


def test_points_off_N_stay_off():
    Qv = Quiver.kronecker(2)
    Qp = mutate_matrix(Qv, 0)
    F = classical_cluster_map(Qv, 0)
    rng = random.Random(3)
    for _ in range(20):
        x = [Q(rng.randint(2, 9), rng.randint(1, 5)) for _ in range(2)]
        p = point_on_N(Qp, x)
        assert on_N(Qp, p) and on_N(Qv, F(p))
        p[0] = p[0] * 3
        assert not on_N(Qv, F(p))


def test_wrong_classical_map_is_caught(monkeypatch):
    real = qv.classical_cluster_map

    def broken(Qv, k):
        F = real(Qv, k)
        return lambda p: [c * (2 if i == 1 else 1) for i, c in enumerate(F(p))]

    monkeypatch.setattr(qv, "classical_cluster_map", broken)
    assert not cluster_map_classical_check(Quiver.kronecker(2), 0, 10).passed


def test_wrong_twist_in_quantum_closed_form_is_caught(monkeypatch):
    real = qv._shifted_product
    monkeypatch.setattr(qv, "_shifted_product", lambda m, M, inv: real(m + 1, M, inv))
    assert not cluster_map_quantum(Quiver.kronecker(2), 0, 6).is_zero
