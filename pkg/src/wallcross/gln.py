"""Stability data on gl(n): skew matrices a_ij attached to configurations z_1..z_n.

Roots gamma_ij carry a_ij E_ij with Z(gamma_ij) = z_i - z_j.  When z_j crosses
the segment (z_i, z_k) the entry a_ik changes by s a_ij a_jk, where s is the
sign of cross(z_j - z_k, z_i - z_j) just before the crossing.  Crossing times
along linear segments are roots of quadratics and are handled exactly in
Q(sqrt D).
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Sequence

from .arith import GaussRational, Q, Rational, qstr

Config = tuple  # tuple of GaussRational


class NonTransversal(ValueError):
    """Tangential or simultaneous crossings; perturb the path."""


class Collision(ValueError):
    """Two points coincide somewhere on the path."""


# ---------------------------------------------------------------- exact quadratic irrationals


def _sign_surd(u, w, D) -> int:
    """Sign of u + w sqrt(D), D > 0."""
    su = (u > 0) - (u < 0)
    sw = (w > 0) - (w < 0)
    if sw == 0:
        return su
    if su == 0 or su == sw:
        return sw
    a, b = u * u, w * w * D
    if a == b:
        return 0
    return su if a > b else sw


class Algebraic:
    """r + s sqrt(D) with rational r, s and D > 0 (s = 0 for rationals)."""

    __slots__ = ("r", "s", "D")

    def __init__(self, r, s=0, D=1):
        self.r, self.s, self.D = Q(r), Q(s), Q(D)

    @property
    def rational(self) -> bool:
        return self.s == 0

    def sign_minus(self, q) -> int:
        return _sign_surd(self.r - Q(q), self.s, self.D)

    def poly_sign(self, coeffs: Sequence) -> int:
        """Sign of sum c_k t^k at t = self."""
        u, w = Rational(0), Rational(0)
        pu, pw = Rational(1), Rational(0)
        for c in coeffs:
            u += c * pu
            w += c * pw
            pu, pw = pu * self.r + pw * self.s * self.D, pu * self.s + pw * self.r
        return _sign_surd(u, w, self.D)

    def bracket(self, lo, hi, eps) -> tuple:
        """Rational interval (lo, hi) containing self, narrowed below eps."""
        lo, hi = Q(lo), Q(hi)
        if self.rational:
            return self.r, self.r
        while hi - lo > eps:
            mid = (lo + hi) / 2
            if self.sign_minus(mid) > 0:
                lo = mid
            else:
                hi = mid
        return lo, hi

    def approx(self) -> float:
        return float(self.r) + float(self.s) * float(self.D) ** 0.5

    def __repr__(self):
        if self.rational:
            return qstr(self.r)
        return f"{qstr(self.r)} + {qstr(self.s)}*sqrt({qstr(self.D)})"


def _is_square(x) -> bool:
    x = Q(x)
    if x < 0:
        return False
    from math import isqrt

    n, d = int(x.numerator), int(x.denominator)
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


def _sqrt_rational(x):
    from math import isqrt

    x = Q(x)
    return Rational(isqrt(int(x.numerator)), isqrt(int(x.denominator)))


def quad_roots(c0, c1, c2) -> list[Algebraic]:
    """Real roots of c0 + c1 t + c2 t^2, not identically zero."""
    c0, c1, c2 = Q(c0), Q(c1), Q(c2)
    if c2 == 0:
        if c1 == 0:
            return []
        return [Algebraic(-c0 / c1)]
    D = c1 * c1 - 4 * c2 * c0
    if D < 0:
        return []
    r = -c1 / (2 * c2)
    if D == 0:
        return [Algebraic(r)]
    if _is_square(D):
        sq = _sqrt_rational(D) / (2 * c2)
        return [Algebraic(r - sq), Algebraic(r + sq)]
    s = 1 / (2 * c2)
    return [Algebraic(r, -s, D), Algebraic(r, s, D)]


def alg_equal(x: Algebraic, y: Algebraic) -> bool:
    if x.rational and y.rational:
        return x.r == y.r
    if x.rational != y.rational:
        return False
    if x.D == y.D:
        return x.r == y.r and x.s == y.s
    # sqrt(Dx) and sqrt(Dy) rationally related iff Dx/Dy is a square
    ratio = x.D / y.D
    if not _is_square(ratio):
        return False
    k = _sqrt_rational(ratio)
    return x.r == y.r and x.s * k == y.s


def alg_cmp(x: Algebraic, y: Algebraic) -> int:
    if alg_equal(x, y):
        return 0
    if y.rational:
        return x.sign_minus(y.r)
    if x.rational:
        return -y.sign_minus(x.r)
    lo, hi = Rational(-(2**64)), Rational(2**64)
    eps = Rational(1, 2)
    while True:
        xl, xh = x.bracket(lo, hi, eps)
        yl, yh = y.bracket(lo, hi, eps)
        if xh < yl:
            return -1
        if yh < xl:
            return 1
        lo, hi = min(xl, yl), max(xh, yh)
        eps /= 1024


# ---------------------------------------------------------------- data types


def _g(z) -> GaussRational:
    if isinstance(z, GaussRational):
        return z
    if isinstance(z, str):
        return GaussRational.parse(z)
    re, im = z
    return GaussRational(Q(re), Q(im))


def cross(a: GaussRational, b: GaussRational):
    return a.re * b.im - a.im * b.re


def dot(a: GaussRational, b: GaussRational):
    return a.re * b.re + a.im * b.im


def is_generic(z: Sequence[GaussRational]) -> bool:
    """Distinct points, no three on a real line."""
    n = len(z)
    for i in range(n):
        for j in range(i + 1, n):
            if z[i] == z[j]:
                return False
            for k in range(j + 1, n):
                if cross(z[j] - z[i], z[k] - z[i]) == 0:
                    return False
    return True


@dataclass(frozen=True)
class GlnStability:
    n: int
    z: tuple
    a: tuple

    def __init__(self, z: Sequence, a: Sequence[Sequence]):
        zz = tuple(_g(x) for x in z)
        n = len(zz)
        aa = tuple(tuple(Q(x) for x in row) for row in a)
        if len(aa) != n or any(len(r) != n for r in aa):
            raise ValueError("a must be n x n")
        for i in range(n):
            for j in range(n):
                if aa[i][j] != -aa[j][i]:
                    raise ValueError("a must be skew-symmetric")
        if len(set(zz)) != n:
            raise ValueError("z values must be pairwise distinct")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "z", zz)
        object.__setattr__(self, "a", aa)

    def with_a(self, a) -> "GlnStability":
        return GlnStability(self.z, a)

    def with_z(self, z) -> "GlnStability":
        return GlnStability(z, self.a)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "z": [[qstr(x.re), qstr(x.im)] for x in self.z],
            "a": [[qstr(x) for x in r] for r in self.a],
        }


@dataclass(frozen=True)
class ConfigPath:
    configs: tuple

    def __init__(self, configs: Sequence[Sequence]):
        cs = tuple(tuple(_g(x) for x in c) for c in configs)
        if len(cs) < 2:
            raise ValueError("a path needs at least two configurations")
        n = len(cs[0])
        if any(len(c) != n for c in cs):
            raise ValueError("configurations must have the same size")
        for c in cs:
            if not is_generic(c):
                raise NonTransversal("breakpoints must have no three collinear points")
        object.__setattr__(self, "configs", cs)

    @property
    def n(self) -> int:
        return len(self.configs[0])

    def reversed(self) -> "ConfigPath":
        return ConfigPath(self.configs[::-1])

    def segments(self):
        return list(zip(self.configs[:-1], self.configs[1:]))


# ---------------------------------------------------------------- crossing detection


@dataclass
class Crossing:
    segment: int
    t: Algebraic
    i: int
    j: int
    k: int
    direction: int

    def to_json(self) -> dict:
        return {"segment": self.segment, "t": repr(self.t), "i": self.i, "j": self.j, "k": self.k, "direction": self.direction}


def _lin(z0: GaussRational, z1: GaussRational):
    """(re0, re1, im0, im1): z(t) = z0 + t (z1 - z0)."""
    d = z1 - z0
    return (z0.re, d.re, z0.im, d.im)


def _diff(p, q):
    return tuple(x - y for x, y in zip(p, q))


def _cross_poly(u, w):
    """cross(u(t), w(t)) for linear u, w as coefficients c0, c1, c2."""
    ur0, ur1, ui0, ui1 = u
    wr0, wr1, wi0, wi1 = w
    return (
        ur0 * wi0 - ui0 * wr0,
        ur0 * wi1 + ur1 * wi0 - ui0 * wr1 - ui1 * wr0,
        ur1 * wi1 - ui1 * wr1,
    )


def _dot_poly(u, w):
    ur0, ur1, ui0, ui1 = u
    wr0, wr1, wi0, wi1 = w
    return (
        ur0 * wr0 + ui0 * wi0,
        ur0 * wr1 + ur1 * wr0 + ui0 * wi1 + ui1 * wi0,
        ur1 * wr1 + ui1 * wi1,
    )


def _check_collisions(z0, z1):
    n = len(z0)
    L = [_lin(z0[i], z1[i]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            re0, re1, im0, im1 = _diff(L[i], L[j])
            # both coordinates vanish at one t in [0, 1]
            ts = set()
            for c0, c1 in ((re0, re1), (im0, im1)):
                if c1 == 0:
                    if c0 != 0:
                        ts = None
                        break
                    ts.add("any")
                else:
                    ts.add(-c0 / c1)
            if ts is None:
                continue
            vals = [t for t in ts if t != "any"]
            if len(set(vals)) > 1:
                continue
            t = vals[0] if vals else Rational(0)
            if 0 <= t <= 1:
                raise Collision(f"z{i} and z{j} collide on the path")


def segment_crossings(z0: Sequence[GaussRational], z1: Sequence[GaussRational], seg: int = 0) -> list[Crossing]:
    n = len(z0)
    _check_collisions(z0, z1)
    L = [_lin(z0[i], z1[i]) for i in range(n)]
    events: list[Crossing] = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                u, w = _diff(L[j], L[i]), _diff(L[k], L[i])
                f = _cross_poly(u, w)
                if all(c == 0 for c in f):
                    raise NonTransversal("three points stay collinear along a segment")
                for t in quad_roots(*f):
                    if t.sign_minus(0) <= 0 or t.sign_minus(1) >= 0:
                        continue
                    mid = None
                    for m, (p, q) in ((i, (j, k)), (j, (i, k)), (k, (i, j))):
                        dp = _dot_poly(_diff(L[p], L[m]), _diff(L[q], L[m]))
                        if t.poly_sign(dp) < 0:
                            mid = (p, m, q)
                    if mid is None:
                        raise Collision("collinear event without a middle point")
                    a, b, c = mid
                    # g(t) = cross(z_b - z_c, z_a - z_b); s = sign of g just before t
                    g = _cross_poly(_diff(L[b], L[c]), _diff(L[a], L[b]))
                    dg = (g[1], 2 * g[2])
                    sd = t.poly_sign(dg)
                    if sd == 0:
                        raise NonTransversal("tangential crossing")
                    events.append(Crossing(seg, t, a, b, c, -sd))
    events.sort(key=cmp_to_key(lambda x, y: alg_cmp(x.t, y.t)))
    for x, y in zip(events, events[1:]):
        if alg_equal(x.t, y.t):
            raise NonTransversal("simultaneous crossings")
    return events


def detect_crossings(path: ConfigPath) -> list[Crossing]:
    out = []
    for s, (z0, z1) in enumerate(path.segments()):
        out.extend(segment_crossings(z0, z1, s))
    return out


# ---------------------------------------------------------------- transport


def apply_crossing(a: Sequence[Sequence], ev: Crossing) -> tuple:
    b = [list(r) for r in a]
    i, j, k = ev.i, ev.j, ev.k
    b[i][k] = a[i][k] + ev.direction * a[i][j] * a[j][k]
    b[k][i] = -b[i][k]
    return tuple(tuple(r) for r in b)


def gln_transport(s: GlnStability, path: ConfigPath, log: list | None = None) -> GlnStability:
    if tuple(path.configs[0]) != s.z:
        raise ValueError("path must start at the configuration of s")
    a = s.a
    for ev in detect_crossings(path):
        a = apply_crossing(a, ev)
        if log is not None:
            log.append(ev)
    return GlnStability(path.configs[-1], a)


# ---------------------------------------------------------------- matrix arena


def mat_mul(A, B):
    n = len(A)
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def unit(n: int):
    return tuple(tuple(Rational(int(i == j)) for j in range(n)) for i in range(n))


def elementary(n: int, i: int, j: int, x):
    m = [list(r) for r in unit(n)]
    m[i][j] = Q(x)
    return tuple(tuple(r) for r in m)


def assemble_matrix(z: Sequence[GaussRational], a: Sequence[Sequence], d: GaussRational) -> tuple:
    """Clockwise product of exp(a_ij E_ij) over roots with dot(z_i - z_j, d) > 0."""
    n = len(z)
    roots = []
    for i in range(n):
        for j in range(n):
            if i != j:
                Z = z[i] - z[j]
                s = dot(Z, d)
                if s == 0:
                    raise NonTransversal("root on the boundary of the half-plane")
                if s > 0:
                    roots.append((Z, i, j))

    def cmp(x, y):
        c = cross(y[0], x[0])  # x counterclockwise of y -> x first
        if c == 0:
            if {x[1], x[2]} & {y[1], y[2]}:
                raise NonTransversal("two roots share a ray")
            return -1 if x[1:] < y[1:] else 1  # disjoint roots commute
        return -1 if c > 0 else 1

    roots.sort(key=cmp_to_key(cmp))
    M = unit(n)
    for _, i, j in roots:
        M = mat_mul(M, elementary(n, i, j, a[i][j]))
    return M


def _at(z0, z1, t):
    return tuple(x + (y - x) * GaussRational(t, 0) for x, y in zip(z0, z1))


def single_wall_check(s: GlnStability, path: ConfigPath) -> list[bool]:
    """For every crossing, compare the ordered matrix products just before and after.

    The half-plane is centred on the colliding direction; the comparison
    times are chosen between all other events on that segment.
    """
    out = []
    a = s.a
    for ev in detect_crossings(path):
        z0, z1 = path.configs[ev.segment], path.configs[ev.segment + 1]
        # rational time close to t and the direction there
        lo, hi = ev.t.bracket(0, 1, Rational(1, 2**20))
        tm = lo if ev.t.rational else (lo + hi) / 2
        zm = _at(z0, z1, tm)
        base = zm[ev.i] - zm[ev.k]
        others = [e.t for e in segment_crossings(z0, z1) if not alg_equal(e.t, ev.t)]
        n = len(z0)
        # tilt the half-plane slightly if some root stays on its boundary
        for tilt in (0, Rational(1, 997), Rational(-1, 991), Rational(1, 499)):
            d = base * GaussRational(1, tilt)
            times = list(others)
            flat = False
            for i in range(n):
                for j in range(i + 1, n):
                    p = _diff(_lin(z0[i], z1[i]), _lin(z0[j], z1[j]))
                    c0 = p[0] * d.re + p[2] * d.im
                    c1 = p[1] * d.re + p[3] * d.im
                    flat = flat or (c0 == 0 and c1 == 0)
                    times.extend(quad_roots(c0, c1, 0))
            if not flat:
                break
        below = [Rational(0)] + [x.bracket(0, 1, Rational(1, 2**30))[1] for x in times if alg_cmp(x, ev.t) < 0]
        above = [Rational(1)] + [x.bracket(0, 1, Rational(1, 2**30))[0] for x in times if alg_cmp(x, ev.t) > 0]
        L, U = max(below), min(above)
        if ev.t.rational:
            tl, th = (L + ev.t.r) / 2, (U + ev.t.r) / 2
        else:
            eps = (U - L) / 4
            tl, th = ev.t.bracket(L, U, eps)
            while tl == L or th == U:
                eps /= 4
                tl, th = ev.t.bracket(L, U, eps)
        b = apply_crossing(a, ev)
        before = assemble_matrix(_at(z0, z1, tl), a, d)
        after = assemble_matrix(_at(z0, z1, th), b, d)
        out.append(before == after)
        a = b
    return out


def verify_matrix_identity(a12, a13, a23) -> bool:
    """exp(a12 E12) exp(a13 E13) exp(a23 E23) = exp(a23 E23) exp((a13 + a12 a23) E13) exp(a12 E12)."""
    a12, a13, a23 = Q(a12), Q(a13), Q(a23)
    E = lambda i, j, x: elementary(3, i, j, x)
    lhs = mat_mul(mat_mul(E(0, 1, a12), E(0, 2, a13)), E(1, 2, a23))
    rhs = mat_mul(mat_mul(E(1, 2, a23), E(0, 2, a13 + a12 * a23)), E(0, 1, a12))
    return lhs == rhs


# ---------------------------------------------------------------- loops


def triangle_avoids_collisions(c0, c1, c2) -> bool:
    """The 2-simplex of configurations spanned by c0, c1, c2 has no collisions."""
    n = len(c0)
    for i in range(n):
        for j in range(i + 1, n):
            p = c0[i] - c0[j]
            u = (c1[i] - c1[j]) - p
            w = (c2[i] - c2[j]) - p
            # p + s u + t w = 0 with s, t >= 0, s + t <= 1
            det = u.re * w.im - u.im * w.re
            if det == 0:
                # degenerate: fall back on a conservative test
                if p == GaussRational(0, 0) or cross(u, p) == 0 or cross(w, p) == 0:
                    return False
                continue
            s = (-p.re * w.im + p.im * w.re) / det
            t = (-u.re * p.im + u.im * p.re) / det
            if s >= 0 and t >= 0 and s + t <= 1:
                return False
    return True


def random_config(rng: random.Random, n: int, scale: int = 8) -> tuple:
    while True:
        z = tuple(GaussRational(Rational(rng.randint(-scale * 4, scale * 4), 4), Rational(rng.randint(-scale * 4, scale * 4), 4)) for _ in range(n))
        if is_generic(z):
            return z


def random_skew(rng: random.Random, n: int) -> tuple:
    a = [[Rational(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = Rational(rng.randint(-5, 5), rng.randint(1, 4))
            a[i][j], a[j][i] = x, -x
    return tuple(tuple(r) for r in a)


@dataclass
class MonodromyReport:
    n: int
    loops: int
    crossings: int
    failures: int
    seed: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {"n": self.n, "loops": self.loops, "crossings": self.crossings, "failures": self.failures, "seed": self.seed, "passed": self.passed}


def random_contractible_loop(rng: random.Random, n: int) -> ConfigPath:
    """A triangle loop c0 -> c1 -> c2 -> c0 whose filling avoids collisions."""
    while True:
        c0 = random_config(rng, n)
        c1 = random_config(rng, n)
        c2 = random_config(rng, n)
        if triangle_avoids_collisions(c0, c1, c2):
            return ConfigPath([c0, c1, c2, c0])


def monodromy_check(n: int, loops: int, seed: int = 0) -> MonodromyReport:
    rng = random.Random(seed)
    done = crossings = failures = 0
    while done < loops:
        path = random_contractible_loop(rng, n)
        s = GlnStability(path.configs[0], random_skew(rng, n))
        log: list = []
        try:
            out = gln_transport(s, path, log)
        except NonTransversal:
            continue
        done += 1
        crossings += len(log)
        if out.a != s.a:
            failures += 1
    return MonodromyReport(n, loops, crossings, failures, seed)


def braid_loop(n: int = 3) -> ConfigPath:
    """z_1 travels once around z_0 (a pure braid generator); the other points stay far away."""
    far = [GaussRational(10 * k, 7 * k + 1) for k in range(2, n)]

    def c(p):
        return [GaussRational(0, 0), GaussRational(*p)] + far

    pts = [(1, Rational(1, 3)), (Rational(-1, 5), 1), (-1, Rational(-1, 7)), (Rational(1, 9), -1), (1, Rational(1, 3))]
    return ConfigPath([c(p) for p in pts])


def load_config(path: str) -> tuple[GlnStability, ConfigPath]:
    with open(path) as fh:
        data = json.load(fh)
    z = [_g(x) for x in data["z"]]
    s = GlnStability(z, data["a"])
    configs = [[_g(x) for x in c] for c in data.get("path", [])]
    if not configs or configs[0] != z:
        configs = [z] + configs
    return s, ConfigPath(configs)


__all__ = [
    "GlnStability",
    "ConfigPath",
    "Crossing",
    "NonTransversal",
    "Collision",
    "Algebraic",
    "quad_roots",
    "detect_crossings",
    "segment_crossings",
    "gln_transport",
    "apply_crossing",
    "assemble_matrix",
    "single_wall_check",
    "verify_matrix_identity",
    "triangle_avoids_collisions",
    "random_contractible_loop",
    "monodromy_check",
    "MonodromyReport",
    "braid_loop",
    "load_config",
    "is_generic",
    "random_config",
    "random_skew",
]
