"""Random stability data for round-trip and path-independence checks."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .arith import GaussRational, Rational, VPoly, VRatFunc
from .engine import StabilityData, assemble, factorize, transport
from .lattice import Charge, SkewLattice, Truncation
from .series import Flavor

# forms whose kernel misses the positive cone, so no cone point pairs to
# zero with every generator
FORMS = {
    1: [[[0]]],
    2: [[[0, 1], [-1, 0]], [[0, 2], [-2, 0]], [[0, -1], [1, 0]]],
    3: [[[0, 1, 1], [-1, 0, 1], [-1, -1, 0]], [[0, 2, 1], [-2, 0, 1], [-1, -1, 0]]],
}


def random_charge(rng: random.Random, L: SkewLattice) -> Charge:
    """Generator charges in the open upper half-plane with pairwise distinct rays."""
    while True:
        vals = [GaussRational(Rational(rng.randint(-6, 6), rng.randint(1, 3)), Rational(rng.randint(1, 6), rng.randint(1, 3))) for _ in range(L.rank)]
        ok = all(
            vals[i].re * vals[j].im != vals[i].im * vals[j].re for i in range(len(vals)) for j in range(i + 1, len(vals))
        )
        if ok:
            return Charge(L, vals)


def _random_coeff(rng: random.Random, flavor: Flavor):
    if flavor is Flavor.CLASSICAL:
        return Rational(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2, 3]))
    c = {e: rng.choice([-2, -1, 1, 2]) for e in rng.sample(range(-2, 3), rng.randint(1, 2))}
    return VRatFunc.from_vpoly(VPoly(c))


def random_stability_data(rng: random.Random, flavor: Flavor, max_rank: int = 3, max_support: int = 8, max_N: int = 8) -> StabilityData:
    rank = rng.randint(2 if flavor is Flavor.CLASSICAL else 1, max_rank)
    L = SkewLattice(rng.choice(FORMS[rank]))
    gens = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    N = rng.randint(2, max_N)
    T = Truncation(gens, (1,) * rank, N)
    Z = random_charge(rng, L)
    pts = [g for g, _ in T.points() if any(g)]
    support = rng.sample(pts, min(len(pts), rng.randint(1, max_support)))
    omega = {g: _random_coeff(rng, flavor) for g in support}
    return StabilityData(L, T, Z, omega, flavor)


@dataclass
class RoundTripReport:
    flavor: str
    trials: int
    sd_failures: int
    group_failures: int
    seed: int

    @property
    def passed(self) -> bool:
        return not (self.sd_failures or self.group_failures)

    def to_json(self) -> dict:
        return {
            "flavor": self.flavor,
            "trials": self.trials,
            "factorize_assemble_failures": self.sd_failures,
            "assemble_factorize_failures": self.group_failures,
            "seed": self.seed,
            "passed": self.passed,
        }


def round_trip(flavor: Flavor | str, trials: int, seed: int = 0, max_N: int = 8) -> RoundTripReport:
    flavor = Flavor(flavor) if isinstance(flavor, str) else flavor
    rng = random.Random(seed)
    bad_sd = bad_g = 0
    for _ in range(trials):
        sd = random_stability_data(rng, flavor, max_N=max_N)
        A = assemble(sd)
        back = factorize(A, sd.charge).stability_data()
        if back != sd:
            bad_sd += 1
        if assemble(back) != A:
            bad_g += 1
    return RoundTripReport(flavor.value, trials, bad_sd, bad_g, seed)


@dataclass
class PathReport:
    trials: int
    failures: int
    seed: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {"trials": self.trials, "failures": self.failures, "seed": self.seed, "passed": self.passed}


def path_independence(trials: int, seed: int = 0, flavor: Flavor | str = Flavor.CLASSICAL, max_N: int = 8) -> PathReport:
    """Transport Z1 -> Z2 directly and via a random intermediate charge."""
    flavor = Flavor(flavor) if isinstance(flavor, str) else flavor
    rng = random.Random(seed)
    bad = 0
    for _ in range(trials):
        sd = random_stability_data(rng, flavor, max_N=max_N)
        Z2 = random_charge(rng, sd.lattice)
        Zm = random_charge(rng, sd.lattice)
        direct = transport(sd, Z2)
        via = transport(transport(sd, Zm), Z2)
        if direct != via:
            bad += 1
    return PathReport(trials, bad, seed)


__all__ = [
    "random_stability_data",
    "random_charge",
    "round_trip",
    "RoundTripReport",
    "path_independence",
    "PathReport",
    "FORMS",
]
