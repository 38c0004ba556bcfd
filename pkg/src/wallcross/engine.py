"""Stability data, ordered ray products, and their unique factorization.

Group elements live in one of two torus arenas: classical automorphisms
(TorusAuto, product = composition, A*B applies B first) or quantum units
(TorusSeries, product = algebra product). The matrix arena for gl(n) is in
``gln``. A ray factor is exp of the Lie element sum a(gamma) e_gamma over
the cone points whose charge lies on that ray.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Callable, Mapping, Sequence

from . import univariate as uv
from .arith import (
    ONE_RF,
    ZERO_RF,
    PoleRemains,
    Q,
    Rational,
    VPoly,
    VRatFunc,
    limit_at_minus_one,
    qstr,
)
from .lattice import Charge, Order, SkewLattice, Truncation, Vector, ZeroCharge, clockwise_cmp, ray_id
from .series import (
    Flavor,
    SeriesArena,
    TorusAuto,
    TorusSeries,
    arena,
    auto_apply,
    auto_compose,
    coeff_json,
    exp_log,
    lie_auto,
    mul,
    primitive_of,
    ray_series,
)


class InconsistentDefect(ArithmeticError):
    """Degree-d coefficients of D(e_g)/e_g are not of the form <gamma, g> h_gamma."""


class DegenerateDirection(ArithmeticError):
    """A cone point pairs to zero with every generator; its exponent is invisible."""


class HalfPlaneError(ValueError):
    """A cone point has charge outside the working half-plane."""


# ---------------------------------------------------------------- Moebius


def mobius(n: int) -> int:
    res = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            res = -res
        p += 1
    if n > 1:
        res = -res
    return res


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def a_from_omega(omega: Mapping[int, object], M: int | None = None) -> dict[int, object]:
    """m^2 A_m = -sum_{d|m} d^2 Omega(d), for ray points m*g0."""
    M = max(omega, default=0) if M is None else M
    out = {}
    for m in range(1, M + 1):
        acc = None
        for d in divisors(m):
            w = omega.get(d)
            if w:
                t = w * (d * d)
                acc = t if acc is None else acc + t
        if acc is not None and acc:
            out[m] = -acc * Rational(1, m * m)
    return out


def omega_from_a(a: Mapping[int, object], M: int | None = None) -> dict[int, object]:
    """m^2 Omega(m) = -sum_{d|m} mu(m/d) d^2 A_d."""
    M = max(a, default=0) if M is None else M
    out = {}
    for m in range(1, M + 1):
        acc = None
        for d in divisors(m):
            mu = mobius(m // d)
            x = a.get(d)
            if mu and x:
                t = x * (mu * d * d)
                acc = t if acc is None else acc + t
        if acc is not None and acc:
            out[m] = -acc * Rational(1, m * m)
    return out


def log_E_coeff(k: int) -> VRatFunc:
    """Coefficient of x^k in log E(x): (-1)^k v^k / (k (1 - v^(2k)))."""
    den = VPoly({0: k, 2 * k: -k})
    return VRatFunc(VPoly({k: (-1) ** k}), den)


def a_q_from_omega_q(omega: Mapping[int, VRatFunc], M: int) -> dict[int, VRatFunc]:
    """a_q(n) = sum_{m|n} Omega_q(m) c_{n/m}, c_k the log E coefficients."""
    c = {k: log_E_coeff(k) for k in range(1, M + 1)}
    out = {}
    for n in range(1, M + 1):
        acc = ZERO_RF
        for m in divisors(n):
            w = omega.get(m)
            if w:
                acc = acc + _rf(w) * c[n // m]
        if acc:
            out[n] = acc
    return out


def omega_q_from_a(a: Mapping[int, object], M: int | None = None) -> dict[int, VRatFunc]:
    """Invert the triangular system a_q(n) = sum_{m|n} Omega_q(m) c_{n/m}."""
    M = max(a, default=0) if M is None else M
    c = {k: log_E_coeff(k) for k in range(1, M + 1)}
    c1inv = c[1].inverse() if M else None
    out: dict[int, VRatFunc] = {}
    for n in range(1, M + 1):
        acc = _rf(a.get(n, ZERO_RF))
        for m in divisors(n)[:-1]:
            w = out.get(m)
            if w:
                acc = acc - w * c[n // m]
        w = acc * c1inv
        if w:
            out[n] = w
    return out


def _rf(x) -> VRatFunc:
    if isinstance(x, VRatFunc):
        return x
    if isinstance(x, VPoly):
        return VRatFunc.from_vpoly(x)
    return VRatFunc.from_scalar(x)


def _group_by_primitive(table: Mapping[Vector, object]) -> dict[Vector, dict[int, object]]:
    out: dict[Vector, dict[int, object]] = {}
    for g, x in table.items():
        g0, m = primitive_of(g)
        out.setdefault(g0, {})[m] = x
    return out


def omega_to_a_table(omega: Mapping[Vector, object], T: Truncation, flavor: Flavor) -> dict[Vector, object]:
    """Lie coefficients a(gamma) at every cone point from an Omega table."""
    out = {}
    for g0, ray in _group_by_primitive({tuple(g): x for g, x in omega.items() if x}).items():
        d0 = T.delta(g0)
        M = T.bound // d0
        if flavor is Flavor.QUANTUM:
            a = a_q_from_omega_q(ray, M)
        else:
            a = a_from_omega(ray, M)
        for m, x in a.items():
            out[tuple(m * t for t in g0)] = x
    return out


def a_to_omega_table(a: Mapping[Vector, object], T: Truncation, flavor: Flavor) -> dict[Vector, object]:
    out = {}
    for g0, ray in _group_by_primitive({tuple(g): x for g, x in a.items() if x}).items():
        M = T.bound // T.delta(g0)
        if flavor is Flavor.QUANTUM:
            om = omega_q_from_a(ray, M)
        else:
            om = omega_from_a(ray, M)
        for m, x in om.items():
            out[tuple(m * t for t in g0)] = x
    return out


# ---------------------------------------------------------------- data types


@dataclass
class StabilityData:
    lattice: SkewLattice
    truncation: Truncation
    charge: Charge
    omega: dict
    flavor: Flavor = Flavor.CLASSICAL

    def __post_init__(self):
        if isinstance(self.flavor, str):
            self.flavor = Flavor(self.flavor)
        ar = arena(self.lattice, self.truncation, self.flavor)
        clean = {}
        for g, x in self.omega.items():
            g = tuple(g)
            x = ar.coerce(x)
            if not x:
                continue
            if g not in ar.index or not any(g):
                raise ValueError(f"support point {g} outside the truncated cone")
            if not self.charge.in_half_plane(g):
                raise HalfPlaneError(f"charge of {g} not in the working half-plane")
            clean[g] = x
        self.omega = clean

    @property
    def arena(self) -> SeriesArena:
        return arena(self.lattice, self.truncation, self.flavor)

    def table(self) -> list[tuple[Vector, object]]:
        T = self.truncation
        return sorted(self.omega.items(), key=lambda t: (T.delta(t[0]), tuple(-x for x in t[0])))

    def __eq__(self, o):
        if not isinstance(o, StabilityData):
            return NotImplemented
        return (
            self.lattice == o.lattice
            and self.truncation == o.truncation
            and self.flavor == o.flavor
            and self.omega == o.omega
        )

    def to_json(self) -> list[dict]:
        return [{"gamma": list(g), "omega": coeff_json(x)} for g, x in self.table()]


@dataclass
class Ray:
    direction: tuple[int, int]
    a: dict = field(default_factory=dict)


@dataclass
class RayData:
    """Rays in clockwise order, each carrying a(gamma) on its cone points."""

    lattice: SkewLattice
    truncation: Truncation
    charge: Charge
    flavor: Flavor
    rays: list

    def a_table(self) -> dict[Vector, object]:
        out = {}
        for r in self.rays:
            for g, x in r.a.items():
                if x:
                    out[g] = x
        return out

    def omega(self) -> dict[Vector, object]:
        return a_to_omega_table(self.a_table(), self.truncation, self.flavor)

    def stability_data(self) -> StabilityData:
        return StabilityData(self.lattice, self.truncation, self.charge, self.omega(), self.flavor)


def _ray_groups(points: Sequence[Vector], Z: Charge) -> list[tuple[tuple[int, int], list[Vector]]]:
    groups: dict[tuple[int, int], list[Vector]] = {}
    for g in points:
        z = Z(g)
        if not z:
            raise ZeroCharge(f"zero central charge at {g}")
        if not Z.in_half_plane(g):
            raise HalfPlaneError(f"charge of {g} not in the working half-plane")
        groups.setdefault(ray_id(z), []).append(g)
    keys = list(groups)

    def cmp(r1, r2):
        return clockwise_cmp(Z, groups[r1][0], groups[r2][0]).value

    keys.sort(key=cmp_to_key(cmp))
    return [(k, groups[k]) for k in keys]


# ---------------------------------------------------------------- arenas


class _TorusArena:
    def __init__(self, lattice: SkewLattice, truncation: Truncation):
        self.lattice = lattice
        self.truncation = truncation
        self.sa = arena(lattice, truncation, self.flavor)


class ClassicalArena(_TorusArena):
    """Group elements are TorusAuto; product = composition."""

    flavor = Flavor.CLASSICAL

    def identity(self) -> TorusAuto:
        return TorusAuto.identity(self.sa)

    def ray_element(self, a: Mapping[Vector, object]) -> TorusAuto:
        return lie_auto(self.sa, a)

    def product(self, x: TorusAuto, y: TorusAuto) -> TorusAuto:
        return auto_compose(x, y)

    def check_nondegenerate(self):
        gens = self.truncation.generators
        bad = [p for p, _ in self.truncation.points() if all(self.lattice.pair(p, g) == 0 for g in gens)]
        if bad:
            raise DegenerateDirection(
                f"cone point {bad[0]} pairs to zero with every generator; double the lattice first"
            )

    def factorize(self, A: TorusAuto, Z: Charge, check: bool = True) -> RayData:
        if A.arena is not self.sa:
            raise ValueError("element from a different arena")
        self.check_nondegenerate()
        sa = self.sa
        T = self.truncation
        groups = _ray_groups([p for p, _ in T.points()], Z)
        rays = [Ray(k, {}) for k, _ in groups]
        gens = T.generators
        L = self.lattice
        for d in range(1, T.bound + 1):
            pts_d = [p for p, dp in T.points() if dp == d]
            active = [r for r in rays if r.a]
            inv_rays = [_ClassicalRayInverse(sa, r.a, d) for r in active]
            defects = {}
            for gi, g in enumerate(gens):
                u = A.images[gi].truncate(d)
                for R in inv_rays:
                    u = R.apply_unit(u, g)
                defects[gi] = u
            where = {}
            for k, pts in groups:
                for p in pts:
                    where[p] = k
            ray_of = {r.direction: r for r in rays}
            for p in pts_d:
                h = None
                for gi, g in enumerate(gens):
                    s = L.pair(p, g)
                    c = defects[gi].coeff(p)
                    if s:
                        cand = c / s
                        if h is None:
                            h = cand
                        elif check and cand != h:
                            raise InconsistentDefect(f"inconsistent defect at {p}")
                    elif c and check:
                        raise InconsistentDefect(f"defect at {p} on a generator with zero pairing")
                if h:
                    ray_of[where[p]].a[p] = h
        return RayData(L, T, Z, Flavor.CLASSICAL, rays)


class _ClassicalRayInverse:
    """The inverse of one ray automorphism, acting on unit parts u (of u e_g)."""

    def __init__(self, sa: SeriesArena, a: Mapping[Vector, object], bound: int):
        self.sa = sa
        self.bound = bound
        g0 = None
        prims = {primitive_of(g)[0] for g in a}
        if len(prims) == 1:
            g0 = prims.pop()
        self.g0 = g0
        if g0 is not None:
            M = bound // sa.truncation.delta(g0)
            H = [Rational(0)] * (M + 1)
            for g, x in a.items():
                m = primitive_of(g)[1]
                if m <= M:
                    H[m] -= m * x
            self.H = H
            self.M = M
            self._pow: dict[int, TorusSeries] = {}
        else:
            self.auto = lie_auto(sa, {g: -x for g, x in a.items()})

    def _exp(self, s: int) -> TorusSeries:
        r = self._pow.get(s)
        if r is None:
            r = ray_series(self.sa, self.g0, uv.exp([h * s for h in self.H], self.M, Rational(0), Rational(1)))
            self._pow[s] = r
        return r

    def apply_unit(self, u: TorusSeries, g: Sequence[int]) -> TorusSeries:
        sa = self.sa
        if self.g0 is None:
            gens = sa.truncation.generators
            img = self.auto.images[gens.index(tuple(g))]
            return mul(auto_apply(self.auto, u, bound=self.bound), img, self.bound)
        cv = sa.lattice.row(self.g0)
        sg = sum(a * b for a, b in zip(cv, g))
        parts: dict[int, dict] = {}
        pts = sa.points
        for i, x in u.items():
            s = sum(a * b for a, b in zip(cv, pts[i])) + sg
            parts.setdefault(s, {})[i] = x
        out = TorusSeries._raw(sa, {})
        for s, c in parts.items():
            piece = TorusSeries._raw(sa, c)
            out = out + (mul(self._exp(s), piece, self.bound) if s else piece)
        return out


class QuantumArena(_TorusArena):
    """Group elements are unit quantum series; product = algebra product."""

    flavor = Flavor.QUANTUM

    def identity(self) -> TorusSeries:
        return self.sa.one_series()

    def ray_element(self, a: Mapping[Vector, object], bound: int | None = None) -> TorusSeries:
        sa = self.sa
        items = {tuple(g): _rf(x) for g, x in a.items() if x}
        if not items:
            return sa.one_series()
        prims = {primitive_of(g)[0] for g in items}
        N = sa.N if bound is None else bound
        if len(prims) == 1:
            g0 = prims.pop()
            M = N // sa.truncation.delta(g0)
            H = [ZERO_RF] * (M + 1)
            for g, x in items.items():
                m = primitive_of(g)[1]
                if m <= M:
                    H[m] = H[m] + x
            return ray_series(sa, g0, uv.exp(H, M, ZERO_RF, ONE_RF))
        return exp_log(TorusSeries(sa, items), "exp").truncate(N)

    def product(self, x: TorusSeries, y: TorusSeries) -> TorusSeries:
        return mul(x, y)

    def factorize(self, A: TorusSeries, Z: Charge, check: bool = True) -> RayData:
        if A.arena is not self.sa:
            raise ValueError("element from a different arena")
        if A.constant() != 1:
            raise ValueError("not a unit: constant term must be 1")
        T = self.truncation
        groups = _ray_groups([p for p, _ in T.points()], Z)
        rays = [Ray(k, {}) for k, _ in groups]
        where = {p: k for k, pts in groups for p in pts}
        ray_of = {r.direction: r for r in rays}
        for d in range(1, T.bound + 1):
            D = A.truncate(d)
            for r in rays:
                if r.a:
                    Rinv = self.ray_element({g: -x for g, x in r.a.items()}, bound=d)
                    D = mul(Rinv, D, d)
            for i, x in D.degree_part(d).items():
                p = self.sa.points[i]
                ray_of[where[p]].a[p] = x
        return RayData(self.lattice, T, Z, Flavor.QUANTUM, rays)


def make_arena(lattice: SkewLattice, truncation: Truncation, flavor: Flavor | str):
    if isinstance(flavor, str):
        flavor = Flavor(flavor)
    if flavor is Flavor.QUANTUM:
        return QuantumArena(lattice, truncation)
    return ClassicalArena(lattice, truncation)


# ---------------------------------------------------------------- operations


def assemble_rays(rd: RayData):
    ar = make_arena(rd.lattice, rd.truncation, rd.flavor)
    out = ar.identity()
    for r in rd.rays:
        if r.a:
            out = ar.product(out, ar.ray_element(r.a))
    return out


def ray_data_from(sd: StabilityData, charge: Charge | None = None) -> RayData:
    Z = sd.charge if charge is None else charge
    a = omega_to_a_table(sd.omega, sd.truncation, sd.flavor)
    groups = _ray_groups(list(a), Z) if a else []
    rays = [Ray(k, {p: a[p] for p in pts}) for k, pts in groups]
    return RayData(sd.lattice, sd.truncation, Z, sd.flavor, rays)


def assemble(sd: StabilityData, flavor: Flavor | str | None = None):
    """Clockwise ordered product of ray factors: TorusAuto or quantum TorusSeries."""
    if flavor is not None and Flavor(flavor if isinstance(flavor, str) else flavor.value) is not sd.flavor:
        raise ValueError("stability data flavor differs from the requested arena")
    return assemble_rays(ray_data_from(sd))


def factorize(A, Z: Charge, check: bool = True) -> RayData:
    if isinstance(A, TorusAuto):
        ar = ClassicalArena(A.arena.lattice, A.arena.truncation)
    elif isinstance(A, TorusSeries) and A.arena.quantum:
        ar = QuantumArena(A.arena.lattice, A.arena.truncation)
    else:
        raise TypeError("factorize expects a TorusAuto or a quantum TorusSeries")
    return ar.factorize(A, Z, check=check)


def transport(sd: StabilityData, Z_new: Charge) -> StabilityData:
    """Stability data at Z_new with the same total group element."""
    return factorize(assemble(sd), Z_new).stability_data()


@dataclass
class QuasiClassicalResult:
    data: StabilityData
    poles: dict


def quasiclassical(sd_q: StabilityData) -> QuasiClassicalResult:
    """Specialize (v^2 - 1) a_q(gamma) at v = -1 and convert back to Omega."""
    if sd_q.flavor is not Flavor.QUANTUM:
        raise ValueError("quasiclassical expects quantum stability data")
    a_q = omega_to_a_table(sd_q.omega, sd_q.truncation, Flavor.QUANTUM)
    a_cl = {}
    poles = {}
    for g, x in a_q.items():
        try:
            y = limit_at_minus_one(x, 1)
        except PoleRemains as e:
            poles[g] = e.pole_order
            continue
        if y:
            a_cl[g] = y
    om = a_to_omega_table(a_cl, sd_q.truncation, Flavor.CLASSICAL)
    sd = StabilityData(sd_q.lattice, sd_q.truncation, sd_q.charge, om, Flavor.CLASSICAL)
    return QuasiClassicalResult(sd, poles)


def classify_quantum(x) -> str:
    """'laurent', 'pole-free-at-minus-one', or 'other'."""
    x = _rf(x)
    if x.is_laurent:
        return "laurent"
    try:
        limit_at_minus_one(x, 0)
    except PoleRemains:
        return "other"
    return "pole-free-at-minus-one"


def omega_table_json(table: Mapping[Vector, object], T: Truncation) -> list[dict]:
    rows = sorted(table.items(), key=lambda t: (T.delta(t[0]), tuple(-x for x in t[0])))
    return [{"gamma": list(g), "omega": coeff_json(x)} for g, x in rows]


__all__ = [
    "InconsistentDefect",
    "DegenerateDirection",
    "HalfPlaneError",
    "mobius",
    "a_from_omega",
    "omega_from_a",
    "log_E_coeff",
    "a_q_from_omega_q",
    "omega_q_from_a",
    "omega_to_a_table",
    "a_to_omega_table",
    "StabilityData",
    "Ray",
    "RayData",
    "ClassicalArena",
    "QuantumArena",
    "make_arena",
    "assemble",
    "assemble_rays",
    "ray_data_from",
    "factorize",
    "transport",
    "quasiclassical",
    "QuasiClassicalResult",
    "classify_quantum",
    "omega_table_json",
]
