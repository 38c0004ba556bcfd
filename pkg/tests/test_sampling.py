import random

import pytest

from wallcross import sampling
from wallcross.engine import StabilityData
from wallcross.lattice import SkewLattice
from wallcross.series import Flavor
from wallcross.sampling import path_independence, random_charge, random_stability_data, round_trip


@pytest.mark.parametrize("flavor", [Flavor.CLASSICAL, Flavor.QUANTUM])
def test_random_data_is_well_formed(flavor):
    rng = random.Random(11)
    for _ in range(30):
        sd = random_stability_data(rng, flavor)
        assert sd.flavor is flavor
        T = sd.truncation
        assert all(0 < T.delta(g) <= T.bound for g in sd.omega)
        z = sd.charge.values
        for i in range(len(z)):
            assert z[i].im > 0
            for j in range(i):
                assert z[i].re * z[j].im != z[i].im * z[j].re


def test_classical_rank_is_at_least_two():
    rng = random.Random(0)
    assert all(random_stability_data(rng, Flavor.CLASSICAL).lattice.rank >= 2 for _ in range(40))


def test_charges_have_distinct_rays():
    rng = random.Random(2)
    L = SkewLattice(sampling.FORMS[3][0])
    for _ in range(20):
        Z = random_charge(rng, L)
        assert len({(v.re / v.im) for v in Z.values}) == 3


def test_sampler_is_deterministic():
    a = random_stability_data(random.Random(7), Flavor.QUANTUM)
    b = random_stability_data(random.Random(7), Flavor.QUANTUM)
    assert a == b


@pytest.mark.parametrize("flavor", ["classical", "quantum"])
def test_round_trip(flavor):
    rep = round_trip(flavor, 25, seed=3, max_N=6)
    assert rep.passed, rep.to_json()
    assert rep.to_json()["flavor"] == flavor


def test_path_independence():
    assert path_independence(15, seed=4, max_N=6).passed
    assert path_independence(8, seed=5, flavor="quantum", max_N=5).passed


def test_round_trip_detects_a_broken_factorization(monkeypatch):
    real = sampling.factorize

    class Off:
        def __init__(self, inner):
            self.inner = inner

        def stability_data(self):
            sd = self.inner.stability_data()
            om = dict(sd.omega)
            g = next(iter(om))
            om[g] = om[g] + 1
            return StabilityData(sd.lattice, sd.truncation, sd.charge, om, sd.flavor)

    monkeypatch.setattr(sampling, "factorize", lambda A, Z: Off(real(A, Z)))
    rep = round_trip("classical", 10, seed=0, max_N=5)
    assert rep.sd_failures == 10 and rep.group_failures == 10
