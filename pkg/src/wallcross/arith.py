"""Exact scalars: rationals, Gaussian rationals, Laurent polynomials and
rational functions in v = q^(1/2), and first-order jets."""
from __future__ import annotations

from math import gcd as igcd
from typing import Iterable, Mapping, Sequence

from . import _intpoly as ip
from ._backend import RATIONAL_TYPES, Q, Rational, qstr

__all__ = [
    "Q",
    "qstr",
    "Rational",
    "GaussRational",
    "VPoly",
    "VRatFunc",
    "PoleRemains",
    "ratfunc_normalize",
    "limit_at_minus_one",
    "Jet1",
    "Expr",
    "var",
    "const",
    "jet_eval",
]


class PoleRemains(ArithmeticError):
    """A pole at v = -1 survives the requested (v^2 - 1) clearing factor."""

    def __init__(self, pole_order: int, order: int):
        super().__init__(f"pole of order {pole_order} at v=-1 exceeds clearing order {order}")
        self.pole_order = pole_order
        self.order = order


def _split(x) -> tuple[int, int]:
    return int(x.numerator), int(x.denominator)


# ---------------------------------------------------------------- Gaussian


class GaussRational:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Q(re)
        self.im = Q(im)

    @classmethod
    def parse(cls, pair: Sequence) -> "GaussRational":
        return cls(Q(pair[0]), Q(pair[1]))

    def __add__(self, o):
        o = _as_gauss(o)
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = _as_gauss(o)
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return _as_gauss(o) - self

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __mul__(self, o):
        o = _as_gauss(o)
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __eq__(self, o):
        if isinstance(o, RATIONAL_TYPES):
            o = GaussRational(o)
        if not isinstance(o, GaussRational):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussRational({qstr(self.re)}, {qstr(self.im)})"

    def to_json(self) -> list[str]:
        return [qstr(self.re), qstr(self.im)]


def _as_gauss(x) -> GaussRational:
    if isinstance(x, GaussRational):
        return x
    return GaussRational(x, 0)


def cross(a: GaussRational, b: GaussRational):
    """re a * im b - im a * re b; positive when b is counterclockwise of a."""
    return a.re * b.im - a.im * b.re


# ---------------------------------------------------------------- VPoly


class VPoly:
    """Finitely supported Laurent polynomial in v with rational coefficients.

    Stored as ``sum(c[i] v^(lo+i)) / den`` with integer c, c[0] and c[-1]
    nonzero, den > 0 and gcd(content(c), den) = 1.
    """

    __slots__ = ("lo", "c", "den", "_hash")

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        lo, c, den = 0, ip.ZERO, 1
        if coeffs:
            items = [(int(e), Q(x)) for e, x in coeffs.items() if x]
            if items:
                den = 1
                for _, x in items:
                    d = int(x.denominator)
                    den = den * d // igcd(den, d)
                lo = min(e for e, _ in items)
                hi = max(e for e, _ in items)
                arr = [0] * (hi - lo + 1)
                for e, x in items:
                    n, d = _split(x)
                    arr[e - lo] += n * (den // d)
                lo, c, den = _norm(lo, arr, den)
        self.lo, self.c, self.den = lo, c, den
        self._hash = None

    @classmethod
    def _raw(cls, lo: int, c: Iterable[int], den: int = 1) -> "VPoly":
        p = cls.__new__(cls)
        p.lo, p.c, p.den = _norm(lo, c, den)
        p._hash = None
        return p

    @classmethod
    def monomial(cls, e: int, coeff=1) -> "VPoly":
        return cls({e: coeff})

    @classmethod
    def const(cls, x) -> "VPoly":
        return cls({0: x})

    # -- accessors
    def coeffs(self) -> dict[int, object]:
        return {self.lo + i: Rational(x, self.den) for i, x in enumerate(self.c) if x}

    def coeff(self, e: int):
        i = e - self.lo
        if 0 <= i < len(self.c):
            return Rational(self.c[i], self.den)
        return Rational(0)

    @property
    def is_zero(self) -> bool:
        return not self.c

    @property
    def low(self) -> int:
        return self.lo

    @property
    def high(self) -> int:
        return self.lo + len(self.c) - 1

    def __bool__(self):
        return bool(self.c)

    # -- arithmetic
    def __add__(self, o):
        o = _as_vpoly(o)
        if o is NotImplemented:
            return o
        if not o.c:
            return self
        if not self.c:
            return o
        lo = min(self.lo, o.lo)
        den = self.den * o.den // igcd(self.den, o.den)
        a = (0,) * (self.lo - lo) + ip.scale(self.c, den // self.den)
        b = (0,) * (o.lo - lo) + ip.scale(o.c, den // o.den)
        return VPoly._raw(lo, _addlist(a, b), den)

    __radd__ = __add__

    def __neg__(self):
        return VPoly._raw(self.lo, tuple(-x for x in self.c), self.den)

    def __sub__(self, o):
        o = _as_vpoly(o)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, o):
        return _as_vpoly(o) - self

    def __mul__(self, o):
        if isinstance(o, RATIONAL_TYPES):
            n, d = _split(Q(o))
            return VPoly._raw(self.lo, ip.scale(self.c, n), self.den * d)
        if not isinstance(o, VPoly):
            return NotImplemented
        if not self.c or not o.c:
            return VPoly()
        return VPoly._raw(self.lo + o.lo, ip.mul(self.c, o.c), self.den * o.den)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a Laurent polynomial")
        out = VPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "VPoly":
        if not self.c:
            return self
        p = VPoly.__new__(VPoly)
        p.lo, p.c, p.den, p._hash = self.lo + k, self.c, self.den, None
        return p

    def __call__(self, x):
        x = Q(x)
        if self.lo < 0 and x == 0:
            raise ZeroDivisionError("Laurent polynomial evaluated at 0")
        return Rational(ip.evaluate(self.c, x), self.den) * (x ** self.lo)

    def __eq__(self, o):
        o = _as_vpoly(o)
        if o is NotImplemented:
            return o
        return self.lo == o.lo and self.c == o.c and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.lo, self.c, self.den))
        return self._hash

    def __repr__(self):
        if not self.c:
            return "VPoly(0)"
        terms = []
        for e, x in sorted(self.coeffs().items()):
            terms.append(f"{qstr(x)}*v^{e}")
        return "VPoly(" + " + ".join(terms) + ")"

    def to_json(self) -> dict[str, str]:
        return {str(e): qstr(x) for e, x in sorted(self.coeffs().items())}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "VPoly":
        return cls({int(k): Q(v) for k, v in data.items()})


def _addlist(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return out


def _norm(lo: int, c, den: int) -> tuple[int, tuple, int]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    k = 0
    while k < len(c) and c[k] == 0:
        k += 1
    if k == len(c):
        return 0, ip.ZERO, 1
    c = c[k:]
    lo += k
    g = igcd(ip.content(c), den)
    if g > 1:
        c = [x // g for x in c]
        den //= g
    return lo, tuple(c), den


def _as_vpoly(o):
    if isinstance(o, VPoly):
        return o
    if isinstance(o, RATIONAL_TYPES):
        return VPoly.const(o)
    return NotImplemented


# ---------------------------------------------------------------- VRatFunc


class VRatFunc:
    """Reduced rational function in v.

    Internally ``s * v^e * N(v) / D(v)`` with N, D primitive integer
    polynomials, positive leading coefficients, N(0) != 0, D(0) != 0 and
    gcd(N, D) = 1. This form is canonical, so equality is componentwise.
    """

    __slots__ = ("s", "e", "N", "D", "_hash")

    def __init__(self, num=0, den=None):
        f = ratfunc_normalize(_as_vpoly(num), VPoly.const(1) if den is None else _as_vpoly(den))
        self.s, self.e, self.N, self.D, self._hash = f.s, f.e, f.N, f.D, None

    @classmethod
    def _raw(cls, s, e: int, N: tuple, D: tuple) -> "VRatFunc":
        f = cls.__new__(cls)
        if not s or not N:
            f.s, f.e, f.N, f.D = Rational(0), 0, ip.ZERO, ip.ONE
        else:
            f.s, f.e, f.N, f.D = s, e, N, D
        f._hash = None
        return f

    @classmethod
    def from_scalar(cls, x) -> "VRatFunc":
        x = Q(x)
        if not x:
            return cls._raw(x, 0, ip.ZERO, ip.ONE)
        return cls._raw(x, 0, ip.ONE, ip.ONE)

    @classmethod
    def monomial(cls, e: int, coeff=1) -> "VRatFunc":
        coeff = Q(coeff)
        return cls._raw(coeff, e, ip.ONE, ip.ONE)

    @classmethod
    def from_vpoly(cls, p: VPoly) -> "VRatFunc":
        if not p.c:
            return ZERO_RF
        lead, prim = ip.primitive(p.c)
        return cls._raw(Rational(lead, p.den), p.lo, prim, ip.ONE)

    # -- views
    @property
    def numerator(self) -> VPoly:
        lc = self.D[-1]
        n, d = _split(self.s)
        return VPoly._raw(self.e, ip.scale(self.N, n), d * lc)

    @property
    def denominator(self) -> VPoly:
        lc = self.D[-1]
        return VPoly._raw(0, self.D, lc)

    @property
    def is_zero(self) -> bool:
        return not self.N

    @property
    def is_laurent(self) -> bool:
        return self.D == ip.ONE

    def __bool__(self):
        return bool(self.N)

    def as_vpoly(self) -> VPoly:
        if self.D != ip.ONE:
            raise ValueError("not a Laurent polynomial")
        return self.numerator

    # -- arithmetic
    def __mul__(self, o):
        o = _as_rf(o)
        if o is NotImplemented:
            return o
        if not self.N or not o.N:
            return ZERO_RF
        N1, D1, N2, D2 = self.N, self.D, o.N, o.D
        if D2 != ip.ONE and N1 != ip.ONE:
            g = ip.gcd(N1, D2)
            if g != ip.ONE:
                N1 = ip.divexact(N1, g)
                D2 = ip.divexact(D2, g)
        if D1 != ip.ONE and N2 != ip.ONE:
            g = ip.gcd(N2, D1)
            if g != ip.ONE:
                N2 = ip.divexact(N2, g)
                D1 = ip.divexact(D1, g)
        return VRatFunc._raw(self.s * o.s, self.e + o.e, ip.mul(N1, N2), ip.mul(D1, D2))

    __rmul__ = __mul__

    def scale(self, x) -> "VRatFunc":
        x = Q(x)
        if not x or not self.N:
            return ZERO_RF
        return VRatFunc._raw(self.s * x, self.e, self.N, self.D)

    def shift(self, k: int) -> "VRatFunc":
        """Multiply by v^k."""
        if not self.N or not k:
            return self
        return VRatFunc._raw(self.s, self.e + k, self.N, self.D)

    def __neg__(self):
        if not self.N:
            return self
        return VRatFunc._raw(-self.s, self.e, self.N, self.D)

    def __add__(self, o):
        o = _as_rf(o)
        if o is NotImplemented:
            return o
        if not o.N:
            return self
        if not self.N:
            return o
        return _rf_add(self, o)

    __radd__ = __add__

    def __sub__(self, o):
        o = _as_rf(o)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, o):
        return _as_rf(o) - self

    def inverse(self) -> "VRatFunc":
        if not self.N:
            raise ZeroDivisionError("inverse of zero rational function")
        return VRatFunc._raw(1 / self.s, -self.e, self.D, self.N)

    def __truediv__(self, o):
        o = _as_rf(o)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, o):
        return _as_rf(o) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE_RF
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, x):
        x = Q(x)
        d = ip.evaluate(self.D, x)
        if d == 0:
            raise ZeroDivisionError("rational function evaluated at a pole")
        if self.e < 0 and x == 0:
            raise ZeroDivisionError("rational function evaluated at a pole")
        return self.s * (x ** self.e) * ip.evaluate(self.N, x) / d

    def __eq__(self, o):
        o = _as_rf(o)
        if o is NotImplemented:
            return o
        return self.s == o.s and self.e == o.e and self.N == o.N and self.D == o.D

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.s, self.e, self.N, self.D))
        return self._hash

    def __repr__(self):
        if self.D == ip.ONE:
            return f"VRatFunc({self.numerator!r})"
        return f"VRatFunc({self.numerator!r} / {self.denominator!r})"

    def to_json(self):
        if self.D == ip.ONE:
            return self.numerator.to_json()
        return {"num": self.numerator.to_json(), "den": self.denominator.to_json()}

    @classmethod
    def from_json(cls, data) -> "VRatFunc":
        """Inverse of to_json; a bare rational string is a constant."""
        if isinstance(data, (str, int)):
            return cls.from_vpoly(VPoly({0: Q(data)}))
        if "num" in data:
            return cls.from_vpoly(VPoly.from_json(data["num"])) / cls.from_vpoly(VPoly.from_json(data["den"]))
        return cls.from_vpoly(VPoly.from_json(data))


def _rf_add(a: VRatFunc, b: VRatFunc) -> VRatFunc:
    e = min(a.e, b.e)
    Na = (0,) * (a.e - e) + a.N if a.e > e else a.N
    Nb = (0,) * (b.e - e) + b.N if b.e > e else b.N
    if a.D == b.D:
        D = a.D
        Xa, Xb = Na, Nb
    else:
        g = ip.gcd(a.D, b.D)
        if g == ip.ONE:
            Xa, Xb, D = ip.mul(Na, b.D), ip.mul(Nb, a.D), ip.mul(a.D, b.D)
        else:
            qb = ip.divexact(b.D, g)
            Xa, Xb, D = ip.mul(Na, qb), ip.mul(Nb, ip.divexact(a.D, g)), ip.mul(a.D, qb)
    pa, qa = _split(a.s)
    pb, qb_ = _split(b.s)
    num = ip.add(ip.scale(Xa, pa * qb_), ip.scale(Xb, pb * qa))
    if not num:
        return ZERO_RF
    k = 0
    while num[k] == 0:
        k += 1
    num = num[k:]
    c, num = ip.primitive(num)
    h = ip.gcd(num, D) if D != ip.ONE and num != ip.ONE else ip.ONE
    if h != ip.ONE:
        num = ip.divexact(num, h)
        D = ip.divexact(D, h)
    return VRatFunc._raw(Rational(c, qa * qb_), e + k, num, D)


def _as_rf(o):
    if isinstance(o, VRatFunc):
        return o
    if isinstance(o, RATIONAL_TYPES):
        return VRatFunc.from_scalar(o)
    if isinstance(o, VPoly):
        return VRatFunc.from_vpoly(o)
    return NotImplemented


def ratfunc_normalize(n: VPoly, d: VPoly) -> VRatFunc:
    """Reduce n/d to canonical form (monic denominator with d(0) != 0)."""
    if not d.c:
        raise ZeroDivisionError("zero denominator")
    if not n.c:
        return VRatFunc._raw(Rational(0), 0, ip.ZERO, ip.ONE)
    cn, N = ip.primitive(n.c)
    cd, D = ip.primitive(d.c)
    g = ip.gcd(N, D)
    if g != ip.ONE:
        N = ip.divexact(N, g)
        D = ip.divexact(D, g)
    s = Rational(cn * d.den, n.den * cd)
    return VRatFunc._raw(s, n.lo - d.lo, N, D)


ZERO_RF = VRatFunc._raw(Rational(0), 0, ip.ZERO, ip.ONE)
ONE_RF = VRatFunc._raw(Rational(1), 0, ip.ONE, ip.ONE)

_V_PLUS_1 = (1, 1)


def _mult_at_minus_one(c: tuple) -> tuple[int, tuple]:
    m = 0
    while c:
        q = ip.divexact(c, _V_PLUS_1)
        if q is None:
            break
        c = q
        m += 1
    return m, c


def limit_at_minus_one(f: VRatFunc, order: int = 1):
    """lim_{v -> -1} (v^2 - 1)^order * f(v), exactly."""
    if not f.N:
        return Rational(0)
    mN, N = _mult_at_minus_one(f.N)
    mD, D = _mult_at_minus_one(f.D)
    pole = mD - mN
    if pole > order:
        raise PoleRemains(pole, order)
    if pole < order:
        return Rational(0)
    sign = -1 if f.e % 2 else 1
    val = f.s * sign * ip.evaluate(N, -1) * (-2) ** order
    return val / ip.evaluate(D, -1)


# ---------------------------------------------------------------- jets


class Jet1:
    """Value and exact first partials with respect to a fixed variable list."""

    __slots__ = ("value", "partials")

    def __init__(self, value, partials: Sequence):
        self.value = Q(value)
        self.partials = tuple(Q(p) for p in partials)

    @classmethod
    def variable(cls, value, index: int, n: int) -> "Jet1":
        p = [0] * n
        p[index] = 1
        return cls(value, p)

    @classmethod
    def constant(cls, value, n: int) -> "Jet1":
        return cls(value, [0] * n)

    def _lift(self, o) -> "Jet1":
        if isinstance(o, Jet1):
            if len(o.partials) != len(self.partials):
                raise ValueError("jets over different variable sets")
            return o
        return Jet1.constant(o, len(self.partials))

    def __add__(self, o):
        o = self._lift(o)
        return Jet1(self.value + o.value, [a + b for a, b in zip(self.partials, o.partials)])

    __radd__ = __add__

    def __neg__(self):
        return Jet1(-self.value, [-a for a in self.partials])

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        u, w = self.value, o.value
        return Jet1(u * w, [a * w + u * b for a, b in zip(self.partials, o.partials)])

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet1":
        if self.value == 0:
            raise ZeroDivisionError("jet reciprocal at a zero value")
        r = 1 / self.value
        r2 = r * r
        return Jet1(r, [-a * r2 for a in self.partials])

    def __truediv__(self, o):
        return self * self._lift(o).reciprocal()

    def __rtruediv__(self, o):
        return self._lift(o) * self.reciprocal()

    def __pow__(self, k: int):
        k = int(k)
        if k < 0:
            return self.reciprocal() ** (-k)
        if k == 0:
            return Jet1.constant(1, len(self.partials))
        base = self.value ** (k - 1)
        return Jet1(base * self.value, [k * base * a for a in self.partials])

    def __repr__(self):
        return f"Jet1({qstr(self.value)}, [{', '.join(qstr(p) for p in self.partials)}])"


class Expr:
    """Rational expression tree over indexed variables."""

    __slots__ = ("op", "args")

    def __init__(self, op: str, *args):
        self.op = op
        self.args = args

    def _wrap(self, o) -> "Expr":
        return o if isinstance(o, Expr) else const(o)

    def __add__(self, o):
        return Expr("+", self, self._wrap(o))

    def __radd__(self, o):
        return Expr("+", self._wrap(o), self)

    def __sub__(self, o):
        return Expr("-", self, self._wrap(o))

    def __rsub__(self, o):
        return Expr("-", self._wrap(o), self)

    def __mul__(self, o):
        return Expr("*", self, self._wrap(o))

    def __rmul__(self, o):
        return Expr("*", self._wrap(o), self)

    def __truediv__(self, o):
        return Expr("/", self, self._wrap(o))

    def __rtruediv__(self, o):
        return Expr("/", self._wrap(o), self)

    def __neg__(self):
        return Expr("neg", self)

    def __pow__(self, k: int):
        return Expr("^", self, int(k))

    def __repr__(self):
        if self.op == "var":
            return f"x{self.args[0]}"
        if self.op == "const":
            return qstr(self.args[0])
        if self.op == "neg":
            return f"-({self.args[0]!r})"
        if self.op == "^":
            return f"({self.args[0]!r})^{self.args[1]}"
        return f"({self.args[0]!r} {self.op} {self.args[1]!r})"


def var(i: int) -> Expr:
    return Expr("var", i)


def const(x) -> Expr:
    return Expr("const", Q(x))


def jet_eval(expr, point: Sequence) -> Jet1:
    """Evaluate an expression (tree or callable on jets) with exact first partials."""
    n = len(point)
    xs = [Jet1.variable(Q(p), i, n) for i, p in enumerate(point)]
    if not isinstance(expr, Expr):
        out = expr(*xs)
        return out if isinstance(out, Jet1) else Jet1.constant(out, n)
    memo: dict[int, Jet1] = {}

    def ev(e: Expr) -> Jet1:
        key = id(e)
        if key in memo:
            return memo[key]
        op = e.op
        if op == "var":
            r = xs[e.args[0]]
        elif op == "const":
            r = Jet1.constant(e.args[0], n)
        elif op == "neg":
            r = -ev(e.args[0])
        elif op == "^":
            r = ev(e.args[0]) ** e.args[1]
        else:
            a, b = ev(e.args[0]), ev(e.args[1])
            if op == "+":
                r = a + b
            elif op == "-":
                r = a - b
            elif op == "*":
                r = a * b
            else:
                r = a / b
        memo[key] = r
        return r

    return ev(expr)
