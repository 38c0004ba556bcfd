import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wallcross import gln
from wallcross.arith import GaussRational as G
from wallcross.arith import Q
from wallcross.gln import (
    Collision,
    ConfigPath,
    GlnStability,
    NonTransversal,
    apply_crossing,
    assemble_matrix,
    braid_loop,
    detect_crossings,
    gln_transport,
    load_config,
    monodromy_check,
    single_wall_check,
    verify_matrix_identity,
)
from _paths import DATA

A = [[0, 1, Q(1, 2)], [-1, 0, 2], [Q(-1, 2), -2, 0]]


def through_middle():
    # z_2 passes between z_0 and z_1 at t = 1/2
    return ConfigPath([[G(0, 0), G(2, 0), G(1, 1)], [G(0, 0), G(2, 0), G(1, -1)]])


def test_single_crossing_at_half():
    (ev,) = detect_crossings(through_middle())
    assert ev.t.rational and ev.t.r == Q(1, 2)
    assert (ev.i, ev.j, ev.k) == (0, 2, 1)
    assert ev.direction == 1


def test_crossing_update_and_direction():
    p = through_middle()
    s = GlnStability(p.configs[0], A)
    out = gln_transport(s, p)
    # a_01 -> a_01 + a_02 a_21
    assert out.a[0][1] == 1 + Q(1, 2) * -2 == 0
    assert out.a[1][0] == 0
    assert out.a[0][2] == A[0][2] and out.a[1][2] == A[1][2]
    (rev,) = detect_crossings(p.reversed())
    assert rev.direction == -1
    back = gln_transport(out, p.reversed())
    assert back.a == s.a


def test_no_crossings_on_a_translation():
    z = [G(0, 0), G(3, 1), G(1, 4)]
    p = ConfigPath([z, [x + G(5, -2) for x in z]])
    assert detect_crossings(p) == []
    s = GlnStability(z, A)
    assert gln_transport(s, p).a == s.a


def test_irrational_crossing_times():
    # z_2 on a parabola-like chord; the collinearity time solves a quadratic
    p = ConfigPath([[G(0, 0), G(1, 0), G(0, 1)], [G(1, 1), G(0, 2), G(3, -2)]])
    evs = detect_crossings(p)
    assert evs
    s = GlnStability(p.configs[0], A)
    assert all(single_wall_check(s, p))


def test_invalid_inputs():
    with pytest.raises(ValueError):
        GlnStability([G(0, 0), G(0, 0)], [[0, 1], [-1, 0]])
    with pytest.raises(ValueError):
        GlnStability([G(0, 0), G(1, 0)], [[0, 1], [1, 0]])
    with pytest.raises(NonTransversal):
        ConfigPath([[G(0, 0), G(1, 0), G(2, 0)], [G(0, 0), G(1, 1), G(2, 0)]])
    with pytest.raises(Collision):
        detect_crossings(ConfigPath([[G(0, 0), G(2, 1), G(5, 7)], [G(2, 1), G(0, 0), G(5, 7)]]))


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12).map(lambda f: Q(f.numerator, f.denominator))


@given(rationals, rationals, rationals)
def test_three_factor_identity(a12, a13, a23):
    assert verify_matrix_identity(a12, a13, a23)


def test_identity_with_wrong_sign_fails():
    E = lambda i, j, x: gln.elementary(3, i, j, x)
    a12, a13, a23 = Q(2), Q(1, 3), Q(-5, 2)
    lhs = gln.mat_mul(gln.mat_mul(E(0, 1, a12), E(0, 2, a13)), E(1, 2, a23))
    rhs = gln.mat_mul(gln.mat_mul(E(1, 2, a23), E(0, 2, a13 - a12 * a23)), E(0, 1, a12))
    assert lhs != rhs


@pytest.mark.parametrize("n,seed", [(3, 0), (4, 1), (5, 2)])
def test_contractible_loops_have_trivial_monodromy(n, seed):
    rep = monodromy_check(n, 20, seed)
    assert rep.passed and rep.crossings > 0


def test_braid_loop_monodromy_is_nontrivial():
    # a loop that winds z_1 around z_0 is not contractible in configuration space
    s = GlnStability(braid_loop().configs[0], [[0, 1, 2], [-1, 0, -3], [-2, 3, 0]])
    log = []
    out = gln_transport(s, braid_loop(), log)
    assert len(log) == 2
    assert out.a != s.a
    s2, path2 = load_config(str(DATA / "gl3_braid.json"))
    assert gln_transport(s2, path2).a == out.a


def test_flipped_direction_is_caught_by_the_wall_matrices(monkeypatch):
    # flipping every direction is conjugate to the true rule under a -> -a,
    # so loop monodromy cannot see it; the ordered products can
    real = gln.apply_crossing

    def flipped(a, ev):
        ev = gln.Crossing(ev.segment, ev.t, ev.i, ev.j, ev.k, -ev.direction)
        return real(a, ev)

    monkeypatch.setattr(gln, "apply_crossing", flipped)
    assert monodromy_check(3, 20, 0).passed
    p = through_middle()
    assert not all(single_wall_check(GlnStability(p.configs[0], A), p))


def test_single_wall_matrices_agree_along_random_paths():
    rng = random.Random(5)
    checked = 0
    while checked < 15:
        n = rng.choice([3, 4])
        path = ConfigPath([gln.random_config(rng, n, 4) for _ in range(3)])
        s = GlnStability(path.configs[0], gln.random_skew(rng, n))
        try:
            res = single_wall_check(s, path)
        except (NonTransversal, Collision):
            continue
        checked += 1
        assert all(res)


def test_wrong_update_fails_single_wall(monkeypatch):
    p = through_middle()
    s = GlnStability(p.configs[0], A)
    monkeypatch.setattr(gln, "apply_crossing", lambda a, ev: a)
    assert not all(single_wall_check(s, p))


def test_assembled_matrix_is_unipotent():
    z = [G(0, 0), G(3, 1), G(1, 4)]
    M = assemble_matrix([gln._g(x) for x in z], GlnStability(z, A).a, G(1, 1))
    assert all(M[i][i] == 1 for i in range(3))


def test_load_wall_config():
    s, path = load_config(str(DATA / "gl3_wall.json"))
    assert s.n == 3 and len(path.configs) == 2
    assert all(single_wall_check(s, path))
    evs = detect_crossings(path)
    a = s.a
    for ev in evs:
        a = apply_crossing(a, ev)
    assert gln_transport(s, path).a == a
