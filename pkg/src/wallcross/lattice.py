"""Charge lattices with skew forms, central charges, generated cones."""
from __future__ import annotations

import enum
from functools import cmp_to_key
from math import gcd as igcd
from typing import Iterable, Sequence

from .arith import GaussRational, Q, Rational, cross, qstr

Vector = tuple[int, ...]


class ZeroCharge(ValueError):
    """A lattice vector with vanishing central charge was given a ray."""


class Order(enum.Enum):
    BEFORE = -1
    SAME = 0
    AFTER = 1


class SkewLattice:
    __slots__ = ("rank", "form")

    def __init__(self, form: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in r) for r in form)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("form must be a nonempty square matrix")
        for i in range(n):
            for j in range(n):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError("form is not skew-symmetric")
        self.rank = n
        self.form = rows

    def pair(self, a: Sequence[int], b: Sequence[int]) -> int:
        return skew_pair(self, a, b)

    def row(self, a: Sequence[int]) -> Vector:
        """The covector a^T B, so that <a, b> = row(a) . b."""
        n = self.rank
        return tuple(sum(a[i] * self.form[i][j] for i in range(n)) for j in range(n))

    def __eq__(self, o):
        return isinstance(o, SkewLattice) and self.form == o.form

    def __hash__(self):
        return hash(self.form)

    def __repr__(self):
        return f"SkewLattice({[list(r) for r in self.form]})"


def skew_pair(L: SkewLattice, a: Sequence[int], b: Sequence[int]) -> int:
    n = L.rank
    if len(a) != n or len(b) != n:
        raise ValueError("dimension mismatch")
    B = L.form
    return sum(a[i] * B[i][j] * b[j] for i in range(n) if a[i] for j in range(n) if b[j])


def double_lattice(L: SkewLattice) -> SkewLattice:
    """Gamma + Gamma^dual with <(g1,n1),(g2,n2)> = <g1,g2> + n2(g1) - n1(g2)."""
    n = L.rank
    M = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            M[i][j] = L.form[i][j]
        M[i][n + i] = 1
        M[n + i][i] = -1
    return SkewLattice(M)


class Charge:
    """Central charge Z: values of the basis vectors as Gaussian rationals."""

    __slots__ = ("lattice", "values")

    def __init__(self, lattice: SkewLattice, values: Sequence):
        if len(values) != lattice.rank:
            raise ValueError("one charge per basis vector required")
        self.lattice = lattice
        self.values = tuple(v if isinstance(v, GaussRational) else GaussRational.parse(v) for v in values)

    def __call__(self, g: Sequence[int]) -> GaussRational:
        re = Rational(0)
        im = Rational(0)
        for c, z in zip(g, self.values):
            if c:
                re += c * z.re
                im += c * z.im
        return GaussRational(re, im)

    def in_half_plane(self, g: Sequence[int]) -> bool:
        """Arg Z(g) in [0, pi)."""
        z = self(g)
        return z.im > 0 or (z.im == 0 and z.re > 0)

    def to_json(self):
        return [z.to_json() for z in self.values]

    def __repr__(self):
        return f"Charge({[z.to_json() for z in self.values]})"


def clockwise_cmp(Z: Charge, a: Sequence[int], b: Sequence[int]) -> Order:
    """BEFORE iff Arg Z(a) > Arg Z(b), decided by the sign of cross(Z(b), Z(a))."""
    za, zb = Z(a), Z(b)
    if not za or not zb:
        raise ZeroCharge("zero central charge")
    c = cross(zb, za)
    if c > 0:
        return Order.BEFORE
    if c < 0:
        return Order.AFTER
    if za.re * zb.re + za.im * zb.im < 0:
        raise ValueError("charges on opposite rays; restrict to a half-plane")
    return Order.SAME


def ray_id(z: GaussRational) -> tuple[int, int]:
    """Primitive integer direction of a nonzero Gaussian rational."""
    if not z:
        raise ZeroCharge("zero central charge")
    d = int(z.re.denominator) * int(z.im.denominator)
    a = int(z.re * d)
    b = int(z.im * d)
    g = igcd(a, b)
    return a // g, b // g


def sort_clockwise(Z: Charge, vectors: Iterable[Sequence[int]]) -> list:
    def cmp(a, b):
        return clockwise_cmp(Z, a, b).value

    return sorted(vectors, key=cmp_to_key(cmp))


class Truncation:
    """Monoid generated by G, filtered by a positive covector delta, cut at N."""

    __slots__ = ("generators", "degree", "bound", "_points", "_decomp")

    def __init__(self, generators: Sequence[Sequence[int]], degree: Sequence[int], bound: int):
        gens = tuple(tuple(int(x) for x in g) for g in generators)
        deg = tuple(int(x) for x in degree)
        if not gens:
            raise ValueError("at least one generator required")
        n = len(deg)
        if any(len(g) != n for g in gens):
            raise ValueError("generator length differs from degree covector")
        for g in gens:
            # delta itself witnesses strictness: delta(g) >= 1 on G means no line fits
            if sum(a * b for a, b in zip(g, deg)) < 1:
                raise ValueError(f"degree of generator {g} must be at least 1")
        if bound < 1:
            raise ValueError("bound must be positive")
        self.generators = gens
        self.degree = deg
        self.bound = int(bound)
        self._points = None
        self._decomp = None

    @property
    def rank(self) -> int:
        return len(self.degree)

    def delta(self, g: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(g, self.degree))

    def with_bound(self, N: int) -> "Truncation":
        return Truncation(self.generators, self.degree, N)

    def _build(self):
        n = self.rank
        zero = (0,) * n
        decomp: dict[Vector, tuple[int, ...]] = {zero: (0,) * len(self.generators)}
        frontier = [zero]
        gdeg = [self.delta(g) for g in self.generators]
        while frontier:
            nxt = []
            for p in frontier:
                dp = self.delta(p)
                for gi, g in enumerate(self.generators):
                    if dp + gdeg[gi] > self.bound:
                        continue
                    s = tuple(a + b for a, b in zip(p, g))
                    cand = list(decomp[p])
                    cand[gi] += 1
                    cand = tuple(cand)
                    old = decomp.get(s)
                    if old is None:
                        decomp[s] = cand
                        nxt.append(s)
                    elif cand > old:
                        # lexicographically least sorted multiset of generator indices
                        decomp[s] = cand
            frontier = nxt
        pts = [p for p in decomp if p != zero]
        pts.sort(key=lambda p: (self.delta(p), tuple(-x for x in p)))
        self._points = [(p, self.delta(p)) for p in pts]
        self._decomp = decomp

    def points(self) -> list[tuple[Vector, int]]:
        if self._points is None:
            self._build()
        return self._points

    def decomposition(self, g: Sequence[int]) -> tuple[int, ...]:
        """Generator multiplicities of the fixed decomposition of a cone point."""
        if self._decomp is None:
            self._build()
        try:
            return self._decomp[tuple(g)]
        except KeyError:
            raise ValueError(f"{tuple(g)} is not in the truncated cone") from None

    def contains(self, g: Sequence[int]) -> bool:
        if self._decomp is None:
            self._build()
        return tuple(g) in self._decomp

    def __eq__(self, o):
        return (
            isinstance(o, Truncation)
            and self.generators == o.generators
            and self.degree == o.degree
            and self.bound == o.bound
        )

    def __hash__(self):
        return hash((self.generators, self.degree, self.bound))

    def __repr__(self):
        return f"Truncation({[list(g) for g in self.generators]}, {list(self.degree)}, {self.bound})"


def enumerate_cone(T: Truncation) -> list[tuple[Vector, int]]:
    """Cone points with 1 <= delta <= N, by degree then lexicographically descending."""
    return list(T.points())


class SupportForm:
    __slots__ = ("lattice", "Q")

    def __init__(self, lattice: SkewLattice, Qm: Sequence[Sequence]):
        rows = tuple(tuple(Q(x) for x in r) for r in Qm)
        n = lattice.rank
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError("quadratic form has wrong size")
        if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(n)):
            raise ValueError("quadratic form is not symmetric")
        self.lattice = lattice
        self.Q = rows

    def __call__(self, g: Sequence) -> Rational:
        n = len(g)
        return sum((g[i] * self.Q[i][j] * g[j] for i in range(n) for j in range(n)), Rational(0))


def nullspace(rows: Sequence[Sequence], n: int) -> list[list]:
    """Exact rational nullspace basis of a matrix with n columns."""
    M = [[Q(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        vec = [Rational(0)] * n
        vec[fcol] = Rational(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -M[i][fcol]
        basis.append(vec)
    return basis


def _det(M: list[list]) -> Rational:
    M = [list(r) for r in M]
    n = len(M)
    det = Rational(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Rational(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return det


def support_check(support: Iterable[Sequence[int]], Z: Charge, form: SupportForm) -> bool:
    """Q negative definite on ker Z (over Q) and Q >= 0 on every support vector."""
    n = Z.lattice.rank
    K = nullspace([[z.re for z in Z.values], [z.im for z in Z.values]], n)
    if K:
        r = len(K)
        M = [[-sum(K[a][i] * form.Q[i][j] * K[b][j] for i in range(n) for j in range(n)) for b in range(r)] for a in range(r)]
        for k in range(1, r + 1):
            if _det([row[:k] for row in M[:k]]) <= 0:
                return False
    return all(form(g) >= 0 for g in support)


__all__ = [
    "Vector",
    "ZeroCharge",
    "Order",
    "SkewLattice",
    "skew_pair",
    "double_lattice",
    "Charge",
    "clockwise_cmp",
    "ray_id",
    "sort_clockwise",
    "Truncation",
    "enumerate_cone",
    "SupportForm",
    "support_check",
    "nullspace",
    "qstr",
]
