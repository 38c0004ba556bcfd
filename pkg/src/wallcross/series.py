"""Truncated series on the classical and quantum tori of a skew lattice.

Classical flavor: e_a e_b = (-1)^<a,b> e_{a+b}, commutative, with Poisson
bracket {e_a, e_b} = (-1)^<a,b> <a,b> e_{a+b}.
Quantum flavor: e_a e_b = v^<a,b> e_{a+b} with v = q^(1/2).

Series live in an arena (lattice, truncation, flavor) whose cone points are
indexed once; index 0 is the zero vector.
"""
from __future__ import annotations

import enum
from math import factorial
from typing import Iterable, Mapping, Sequence

from . import univariate as uv
from ._backend import kernel
from .arith import ONE_RF, ZERO_RF, Q, Rational, VPoly, VRatFunc, qstr
from .lattice import SkewLattice, Truncation, Vector


class Flavor(enum.Enum):
    CLASSICAL = "classical"
    QUANTUM = "quantum"


class ArenaMismatch(ValueError):
    pass


_ARENAS: dict = {}


class SeriesArena:
    """Shared indexing and multiplication tables for one (lattice, truncation, flavor)."""

    def __init__(self, lattice: SkewLattice, truncation: Truncation, flavor: Flavor):
        if lattice.rank != truncation.rank:
            raise ValueError("lattice and truncation ranks differ")
        self.lattice = lattice
        self.truncation = truncation
        self.flavor = flavor
        self.quantum = flavor is Flavor.QUANTUM
        zero = (0,) * lattice.rank
        pts = [zero] + [p for p, _ in truncation.points()]
        self.points: list[Vector] = pts
        self.degs: list[int] = [0] + [d for _, d in truncation.points()]
        self.index: dict[Vector, int] = {p: i for i, p in enumerate(pts)}
        self.N = truncation.bound
        self._rows: dict[int, tuple[list, list]] = {}
        self._covec = [lattice.row(p) for p in pts]
        if self.quantum:
            self.zero, self.one = ZERO_RF, ONE_RF
        else:
            self.zero, self.one = Rational(0), Rational(1)

    @classmethod
    def get(cls, lattice: SkewLattice, truncation: Truncation, flavor: Flavor) -> "SeriesArena":
        key = (lattice, truncation, flavor)
        a = _ARENAS.get(key)
        if a is None:
            a = cls(lattice, truncation, flavor)
            _ARENAS[key] = a
        return a

    def row(self, i: int) -> tuple[list, list]:
        r = self._rows.get(i)
        if r is None:
            p = self.points[i]
            cv = self._covec[i]
            di = self.degs[i]
            N = self.N
            index = self.index
            add = []
            pair = []
            for j, q in enumerate(self.points):
                if di + self.degs[j] > N:
                    add.append(-1)
                else:
                    add.append(index[tuple(a + b for a, b in zip(p, q))])
                pair.append(sum(a * b for a, b in zip(cv, q)))
            r = (add, pair)
            self._rows[i] = r
        return r

    def pair_idx(self, i: int, j: int) -> int:
        return sum(a * b for a, b in zip(self._covec[i], self.points[j]))

    def coerce(self, c):
        if self.quantum:
            if isinstance(c, VRatFunc):
                return c
            if isinstance(c, VPoly):
                return VRatFunc.from_vpoly(c)
            return VRatFunc.from_scalar(c)
        if isinstance(c, (VRatFunc, VPoly)):
            raise TypeError("classical series take rational coefficients")
        return Q(c)

    def series(self, coeffs: Mapping[Sequence[int], object] | None = None) -> "TorusSeries":
        return TorusSeries(self, coeffs or {})

    def monomial(self, g: Sequence[int], c=1) -> "TorusSeries":
        return TorusSeries(self, {tuple(g): c})

    def one_series(self) -> "TorusSeries":
        return TorusSeries._raw(self, {0: self.one})

    def __repr__(self):
        return f"SeriesArena({self.lattice!r}, {self.truncation!r}, {self.flavor.value})"


def arena(lattice: SkewLattice, truncation: Truncation, flavor: Flavor | str = Flavor.CLASSICAL) -> SeriesArena:
    if isinstance(flavor, str):
        flavor = Flavor(flavor)
    return SeriesArena.get(lattice, truncation, flavor)


class TorusSeries:
    __slots__ = ("arena", "_c")

    def __init__(self, ar: SeriesArena, coeffs: Mapping[Sequence[int], object]):
        self.arena = ar
        c = {}
        for g, x in coeffs.items():
            g = tuple(g)
            i = ar.index.get(g)
            if i is None:
                if ar.truncation.delta(g) > ar.N:
                    continue  # beyond the degree bound: truncated away
                raise ValueError(f"{g} is not a point of the truncated cone")
            x = ar.coerce(x)
            if x:
                c[i] = c[i] + x if i in c else x
                if not c[i]:
                    del c[i]
        self._c = c

    @classmethod
    def _raw(cls, ar: SeriesArena, c: dict) -> "TorusSeries":
        s = cls.__new__(cls)
        s.arena = ar
        s._c = c
        return s

    # -- views
    @property
    def coeffs(self) -> dict[Vector, object]:
        pts = self.arena.points
        return {pts[i]: x for i, x in sorted(self._c.items())}

    @property
    def lattice(self) -> SkewLattice:
        return self.arena.lattice

    @property
    def truncation(self) -> Truncation:
        return self.arena.truncation

    @property
    def flavor(self) -> Flavor:
        return self.arena.flavor

    def coeff(self, g: Sequence[int]):
        i = self.arena.index.get(tuple(g))
        if i is None:
            return self.arena.zero
        return self._c.get(i, self.arena.zero)

    def constant(self):
        return self._c.get(0, self.arena.zero)

    def items(self) -> list:
        return sorted(self._c.items())

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __len__(self):
        return len(self._c)

    def min_degree(self, include_constant: bool = False) -> int | None:
        degs = self.arena.degs
        ds = [degs[i] for i in self._c if include_constant or i]
        return min(ds) if ds else None

    def truncate(self, d: int) -> "TorusSeries":
        degs = self.arena.degs
        return TorusSeries._raw(self.arena, {i: x for i, x in self._c.items() if degs[i] <= d})

    def degree_part(self, d: int) -> "TorusSeries":
        degs = self.arena.degs
        return TorusSeries._raw(self.arena, {i: x for i, x in self._c.items() if degs[i] == d})

    # -- arithmetic
    def _check(self, o: "TorusSeries"):
        if o.arena is not self.arena:
            raise ArenaMismatch("series from different arenas")

    def __add__(self, o):
        if not isinstance(o, TorusSeries):
            o = self.arena.one_series().scale(o)
        self._check(o)
        c = dict(self._c)
        for i, x in o._c.items():
            if i in c:
                y = c[i] + x
                if y:
                    c[i] = y
                else:
                    del c[i]
            else:
                c[i] = x
        return TorusSeries._raw(self.arena, c)

    __radd__ = __add__

    def __neg__(self):
        return TorusSeries._raw(self.arena, {i: -x for i, x in self._c.items()})

    def __sub__(self, o):
        if not isinstance(o, TorusSeries):
            o = self.arena.one_series().scale(o)
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def scale(self, x) -> "TorusSeries":
        x = self.arena.coerce(x)
        if not x:
            return TorusSeries._raw(self.arena, {})
        return TorusSeries._raw(self.arena, {i: y * x for i, y in self._c.items()})

    def __mul__(self, o):
        if not isinstance(o, TorusSeries):
            return self.scale(o)
        return mul(self, o)

    def __rmul__(self, o):
        return self.scale(o)

    def __pow__(self, k: int):
        if k < 0:
            return inv(self) ** (-k)
        out = self.arena.one_series()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, o):
        if not isinstance(o, TorusSeries):
            return NotImplemented
        return self.arena is o.arena and self._c == o._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items(), key=lambda t: t[0])))

    def __repr__(self):
        if not self._c:
            return "TorusSeries(0)"
        pts = self.arena.points
        terms = [f"({_coeff_str(x)})*e{list(pts[i])}" for i, x in sorted(self._c.items())]
        return "TorusSeries(" + " + ".join(terms) + ")"

    def to_json(self) -> list[dict]:
        pts = self.arena.points
        return [{"gamma": list(pts[i]), "coeff": coeff_json(x)} for i, x in sorted(self._c.items())]


def _coeff_str(x) -> str:
    if isinstance(x, VRatFunc):
        return repr(x)
    return qstr(x)


def coeff_json(x):
    if isinstance(x, VRatFunc):
        return x.to_json()
    if isinstance(x, VPoly):
        return x.to_json()
    return qstr(x)


# ---------------------------------------------------------------- operations


def mul(a: TorusSeries, b: TorusSeries, bound: int | None = None) -> TorusSeries:
    """Twisted convolution truncated at delta <= bound (default: the arena bound)."""
    a._check(b)
    ar = a.arena
    N = ar.N if bound is None else min(bound, ar.N)
    out = kernel.mul_terms(a.items(), b.items(), ar.row, ar._rows, ar.degs, N, ar.quantum)
    return TorusSeries._raw(ar, {k: x for k, x in out.items() if x})


def inv(a: TorusSeries) -> TorusSeries:
    """Inverse of a series with invertible constant term, degree by degree."""
    ar = a.arena
    c0 = a.constant()
    if not c0:
        raise ZeroDivisionError("non-invertible constant term")
    c0inv = ar.one / c0
    x = a.scale(c0inv) - ar.one_series()  # a = c0 (1 + x)
    md = x.min_degree()
    out = ar.one_series()
    if md is not None:
        # 1 - x + x^2 - ...  via b <- 1 - x b, gaining md degrees per step
        for _ in range(ar.N // md):
            out = ar.one_series() - mul(x, out)
    return out.scale(c0inv)


class Direction(enum.Enum):
    EXP = "exp"
    LOG = "log"


def exp_log(a: TorusSeries, direction: Direction | str) -> TorusSeries:
    if isinstance(direction, str):
        direction = Direction(direction.lower())
    ar = a.arena
    if direction is Direction.EXP:
        if a.constant():
            raise ValueError("Exp needs zero constant term")
        md = a.min_degree()
        out = ar.one_series()
        if md is None:
            return out
        term = ar.one_series()
        for k in range(1, ar.N // md + 1):
            term = mul(term, a).scale(Rational(1, k))
            if not term:
                break
            out = out + term
        return out
    if a.constant() != 1:
        raise ValueError("Log needs constant term 1")
    x = a - ar.one_series()
    md = x.min_degree()
    out = TorusSeries._raw(ar, {})
    if md is None:
        return out
    term = ar.one_series()
    for k in range(1, ar.N // md + 1):
        term = mul(term, x)
        if not term:
            break
        out = out + term.scale(Rational((-1) ** (k + 1), k))
    return out


def poisson(a: TorusSeries, b: TorusSeries) -> TorusSeries:
    a._check(b)
    ar = a.arena
    if ar.quantum:
        raise TypeError("Poisson bracket is defined on the classical flavor only")
    out: dict = {}
    degs = ar.degs
    N = ar.N
    for i, x in a.items():
        add, pair = ar.row(i)
        for j, y in b.items():
            if degs[i] + degs[j] > N:
                break
            w = pair[j]
            if not w:
                continue
            k = add[j]
            p = x * y * (w if w % 2 == 0 else -w)
            out[k] = out[k] + p if k in out else p
    return TorusSeries._raw(ar, {k: x for k, x in out.items() if x})


# ---------------------------------------------------------------- ray series


def ray_series(ar: SeriesArena, g0: Sequence[int], coeffs: Sequence, start: int = 0) -> TorusSeries:
    """Embed sum_m coeffs[m] e_{m g0} (m from ``start``); powers beyond the cut are dropped."""
    c = {}
    for m, x in enumerate(coeffs):
        if not x:
            continue
        g = tuple(m * t for t in g0)
        i = ar.index.get(g)
        if i is None:
            continue
        c[i] = ar.coerce(x)
    return TorusSeries._raw(ar, c)


def ray_length(ar: SeriesArena, g0: Sequence[int]) -> int:
    d = ar.truncation.delta(g0)
    return ar.N // d if d > 0 else 0


# ---------------------------------------------------------------- automorphisms


class TorusAuto:
    """Classical formal automorphism: e_g -> u_g e_g on cone generators."""

    __slots__ = ("arena", "images")

    def __init__(self, ar: SeriesArena, images: Mapping[int, TorusSeries]):
        if ar.quantum:
            raise TypeError("automorphisms are classical; use conjugation in the quantum torus")
        self.arena = ar
        self.images = dict(images)
        for gi in range(len(ar.truncation.generators)):
            u = self.images.get(gi)
            if u is None:
                self.images[gi] = ar.one_series()
            elif u.constant() != 1:
                raise ValueError("unit factor must have constant term 1")

    @classmethod
    def identity(cls, ar: SeriesArena) -> "TorusAuto":
        return cls(ar, {})

    def image_of_generator(self, g: Sequence[int]) -> TorusSeries:
        gens = self.arena.truncation.generators
        return self.images[gens.index(tuple(g))]

    def unit_for(self, mu: Sequence[int], cache: dict | None = None) -> TorusSeries:
        """U_mu with phi(e_mu) = U_mu e_mu, from the fixed decomposition of mu."""
        ar = self.arena
        mu = tuple(mu)
        if cache is not None and mu in cache:
            return cache[mu]
        dec = ar.truncation.decomposition(mu)
        out = None
        gens = ar.truncation.generators
        # peel one generator and recurse so that shared prefixes are cached
        for gi, n in enumerate(dec):
            if n:
                rest = tuple(a - b for a, b in zip(mu, gens[gi]))
                if any(rest):
                    out = mul(self.unit_for(rest, cache), self.images[gi])
                else:
                    out = self.images[gi]
                break
        if out is None:
            out = ar.one_series()
        if cache is not None:
            cache[mu] = out
        return out

    def __eq__(self, o):
        if not isinstance(o, TorusAuto):
            return NotImplemented
        return self.arena is o.arena and self.images == o.images

    def __hash__(self):
        return hash(tuple(sorted(self.images.items())))

    def __repr__(self):
        gens = self.arena.truncation.generators
        return "TorusAuto(" + ", ".join(f"{list(gens[i])}: {u!r}" for i, u in sorted(self.images.items())) + ")"

    def __matmul__(self, o: "TorusAuto") -> "TorusAuto":
        return auto_compose(self, o)

    def to_json(self):
        gens = self.arena.truncation.generators
        return [{"generator": list(gens[i]), "unit": u.to_json()} for i, u in sorted(self.images.items())]


def auto_apply(phi: TorusAuto, a: TorusSeries, cache: dict | None = None, bound: int | None = None) -> TorusSeries:
    """phi(sum c_mu e_mu) = sum c_mu U_mu e_mu."""
    ar = phi.arena
    if a.arena is not ar:
        raise ArenaMismatch("series from a different arena")
    cache = {} if cache is None else cache
    pts = ar.points
    out = TorusSeries._raw(ar, {})
    for i, x in a.items():
        if i == 0:
            out = out + TorusSeries._raw(ar, {0: x})
            continue
        U = phi.unit_for(pts[i], cache)
        out = out + mul(U, TorusSeries._raw(ar, {i: x}), bound)
    return out


def auto_compose(phi: TorusAuto, psi: TorusAuto) -> TorusAuto:
    """(phi o psi)(e_g) = phi(u^psi_g) u^phi_g e_g: apply psi first."""
    if phi.arena is not psi.arena:
        raise ArenaMismatch("automorphisms from different arenas")
    cache: dict = {}
    imgs = {gi: mul(auto_apply(phi, u, cache), phi.images[gi]) for gi, u in psi.images.items()}
    return TorusAuto(phi.arena, imgs)


def auto_invert(phi: TorusAuto) -> TorusAuto:
    """Solve phi o psi = id degree by degree."""
    ar = phi.arena
    psi = TorusAuto.identity(ar)
    for _ in range(ar.N + 1):
        err = auto_compose(phi, psi)
        if all(u == ar.one_series() for u in err.images.values()):
            return psi
        psi = TorusAuto(ar, {gi: mul(psi.images[gi], inv(err.images[gi])) for gi in psi.images})
    return psi


def T_auto(gamma: Sequence[int], c, ar: SeriesArena) -> TorusAuto:
    """e_mu -> (1 - e_gamma)^(c <gamma, mu>) e_mu."""
    gamma = tuple(gamma)
    if ar.truncation.delta(gamma) < 1:
        raise ValueError("gamma must have positive degree")
    c = Q(c)
    M = ray_length(ar, gamma)
    imgs = {}
    for gi, g in enumerate(ar.truncation.generators):
        e = c * ar.lattice.pair(gamma, g)
        imgs[gi] = ray_series(ar, gamma, uv.binomial_one_minus(e, M)) if e else ar.one_series()
    return TorusAuto(ar, imgs)


def lie_auto(ar: SeriesArena, lie: Mapping[Sequence[int], object]) -> TorusAuto:
    """exp(ad_a) for a Lie element a = sum a_gamma e_gamma (Poisson bracket action).

    When all gamma are multiples of one primitive vector the terms commute
    and e_g -> exp(<g0, g> H) e_g with H = sum m a_m e_{m g0}; otherwise the
    exponential is summed from iterated brackets.
    """
    items = [(tuple(g), Q(x)) for g, x in lie.items() if x]
    if not items:
        return TorusAuto.identity(ar)
    g0 = _common_primitive([g for g, _ in items])
    if g0 is not None:
        M = ray_length(ar, g0)
        H = [Rational(0)] * (M + 1)
        for g, x in items:
            m = _multiple(g, g0)
            if m <= M:
                H[m] += m * x
        imgs = {}
        for gi, g in enumerate(ar.truncation.generators):
            s = ar.lattice.pair(g0, g)
            if s:
                imgs[gi] = ray_series(ar, g0, uv.exp([h * s for h in H], M, Rational(0), Rational(1)))
        return TorusAuto(ar, imgs)
    a = TorusSeries(ar, dict(items))
    md = a.min_degree()
    imgs = {}
    for gi, g in enumerate(ar.truncation.generators):
        # derivation on unit parts: L(u) = {a, u} + u * sum <gamma, g> a_gamma e_gamma
        shift = TorusSeries(ar, {gg: x * ar.lattice.pair(gg, g) for gg, x in items})
        term = ar.one_series()
        total = ar.one_series()
        for k in range(1, ar.N // md + 1):
            term = (poisson(a, term) + mul(term, shift)).scale(Rational(1, k))
            if not term:
                break
            total = total + term
        imgs[gi] = total
    return TorusAuto(ar, imgs)


def _common_primitive(vs: Iterable[Vector]) -> Vector | None:
    from math import gcd

    g0 = None
    for v in vs:
        g = 0
        for x in v:
            g = gcd(g, x)
        p = tuple(x // g for x in v)
        if g0 is None:
            g0 = p
        elif p != g0:
            return None
    return g0


def primitive_of(v: Sequence[int]) -> tuple[Vector, int]:
    from math import gcd

    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v), g


def _multiple(g: Vector, g0: Vector) -> int:
    for a, b in zip(g, g0):
        if b:
            return a // b
    return 0


__all__ = [
    "Flavor",
    "ArenaMismatch",
    "SeriesArena",
    "arena",
    "TorusSeries",
    "TorusAuto",
    "Direction",
    "mul",
    "inv",
    "exp_log",
    "poisson",
    "T_auto",
    "lie_auto",
    "auto_apply",
    "auto_compose",
    "auto_invert",
    "ray_series",
    "ray_length",
    "primitive_of",
    "coeff_json",
]
