"""DT invariant tables: Kronecker quivers, the diagonal series F_k,
m-loop quivers, and the D0-D6 MacMahon check."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from . import univariate as uv
from .arith import GaussRational, Q, Rational, qstr
from .engine import (
    StabilityData,
    a_from_omega,
    assemble,
    divisors,
    factorize,
    mobius,
    quasiclassical,
)
from .lattice import Charge, SkewLattice, Truncation
from .series import Flavor, TorusSeries


def is_integer(x) -> bool:
    return Q(x).denominator == 1


# ---------------------------------------------------------------- Kronecker


def kronecker_setup(k: int, N: int, flavor: Flavor | str = Flavor.CLASSICAL):
    """Lattice Z^2 with <(1,0),(0,1)> = k, the positive quadrant, and two charges.

    z_in(a, b) = (b - a) + (a + b)i puts (1,0) before (0,1) clockwise;
    z_out(a, b) = (a - b) + (a + b)i reverses them.
    """
    L = SkewLattice([[0, k], [-k, 0]])
    T = Truncation([(1, 0), (0, 1)], (1, 1), N)
    z_in = Charge(L, [GaussRational(-1, 1), GaussRational(1, 1)])
    z_out = Charge(L, [GaussRational(1, 1), GaussRational(-1, 1)])
    return L, T, z_in, z_out


@dataclass
class KroneckerResult:
    k: int
    N: int
    direction: str
    table: dict
    integral: dict
    recomposes: bool

    @property
    def all_integral(self) -> bool:
        return all(self.integral.values())

    def rows(self) -> list[tuple[int, int, object]]:
        return [(a, b, x) for (a, b), x in sorted(self.table.items(), key=lambda t: (t[0][0] + t[0][1], -t[0][0]))]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "deg": self.N,
            "direction": self.direction,
            "recomposes": self.recomposes,
            "entries": [
                {"a": a, "b": b, "omega": qstr(x), "integral": self.integral[(a, b)]} for a, b, x in self.rows()
            ],
        }


def kronecker_dt(k: int, N: int, direction: str = "increasing") -> KroneckerResult:
    """Exponents d(a, b, k) with a + b <= N.

    ``increasing``: T_(1,0) o T_(0,1) refactorized with (0,1) first.
    ``decreasing``: T_(0,1) o T_(1,0) refactorized with (1,0) first.
    """
    if k < 1 or N < 1:
        raise ValueError("k and N must be positive")
    L, T, z_in, z_out = kronecker_setup(k, N)
    if direction == "increasing":
        start, end = z_in, z_out
    elif direction == "decreasing":
        start, end = z_out, z_in
    else:
        raise ValueError("direction must be 'increasing' or 'decreasing'")
    sd = StabilityData(L, T, start, {(1, 0): 1, (0, 1): 1})
    A = assemble(sd)
    out = factorize(A, end).stability_data()
    table = dict(out.omega)
    back = assemble(StabilityData(L, T, end, table))
    return KroneckerResult(
        k, N, direction, table, {g: is_integer(x) for g, x in table.items()}, back == A
    )


@dataclass
class QuantumKroneckerResult:
    k: int
    N: int
    data: StabilityData
    limit: StabilityData
    poles: dict
    classical: dict

    @property
    def matches(self) -> bool:
        return not self.poles and dict(self.limit.omega) == self.classical

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "deg": self.N,
            "quantum": self.data.to_json(),
            "limit": self.limit.to_json(),
            "poles": [{"gamma": list(g), "order": o} for g, o in sorted(self.poles.items())],
            "matches_classical": self.matches,
        }


def kronecker_quantum(k: int, N: int) -> QuantumKroneckerResult:
    """Quantum refactorization of E(x_(1,0)) E(x_(0,1)) and its v = -1 limit."""
    L, T, z_in, z_out = kronecker_setup(k, N, Flavor.QUANTUM)
    sd = StabilityData(L, T, z_in, {(1, 0): 1, (0, 1): 1}, Flavor.QUANTUM)
    out = factorize(assemble(sd), z_out).stability_data()
    qc = quasiclassical(out)
    return QuantumKroneckerResult(k, N, out, qc.data, qc.poles, kronecker_dt(k, N).table)


def xy_chart(s: TorusSeries, k: int) -> dict:
    """Coefficients in x^a y^b with x = e_(1,0), y = e_(0,1): e_(a,b) = (-1)^(kab) x^a y^b."""
    return {g: (c if (k * g[0] * g[1]) % 2 == 0 else -c) for g, c in s.coeffs.items()}


# ---------------------------------------------------------------- F_k


def F_k_series(k: int, N: int) -> list:
    if k < 3:
        raise ValueError("F_k is defined for k >= 3")
    return [Rational(comb((k - 1) ** 2 * n + k - 1, n), (k - 2) * n + 1) for n in range(N + 1)]


def F_k_exp_form(k: int, N: int) -> list:
    lg = [Rational(0)] + [Rational(comb((k - 1) ** 2 * n, n) * k, (k - 1) ** 2 * n) for n in range(1, N + 1)]
    return uv.exp(lg, N, Rational(0), Rational(1))



@dataclass
class FkCheck:
    equation: list
    exp_form: list

    @property
    def is_zero(self) -> bool:
        return not any(self.equation) and not any(self.exp_form)


def check_F_k(k: int, N: int, N_exp: int | None = None) -> FkCheck:
    """Residuals of F(1 - t F^(k-2))^k - 1 and of F minus its exp form."""
    N_exp = N if N_exp is None else N_exp
    zero, one = Rational(0), Rational(1)
    F = F_k_series(k, N)
    P = [one] + [zero] * N
    for _ in range(k - 2):
        P = uv.mul(P, F, N, zero)
    inner = [one] + [-x for x in P[:N]]  # 1 - t F^(k-2)
    lhs = F
    for _ in range(k):
        lhs = uv.mul(lhs, inner, N, zero)
    eq = list(lhs)
    eq[0] -= 1
    ef = F_k_exp_form(k, N_exp)
    ex = [F[n] - ef[n] for n in range(N_exp + 1)] if N_exp <= N else [a - b for a, b in zip(F_k_series(k, N_exp), ef)]
    return FkCheck(eq, ex)


@dataclass
class SlopeOneReport:
    k: int
    N: int
    derived: list
    expected: list
    residual: list

    @property
    def matches(self) -> bool:
        return not any(self.residual)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "deg": self.N,
            "matches": self.matches,
            "derived": [qstr(x) for x in self.derived],
            "expected": [qstr(x) for x in self.expected],
        }


def check_slope_one(k: int, N: int, table: dict | None = None) -> SlopeOneReport:
    """Compose the slope-1 factors of the Kronecker table and compare with F_k.

    The slope-1 ray acts as x -> x F(xy)^(-k), y -> y F(xy)^k with
    log F(t) = sum_n n a_n (-1)^(kn) t^n, a_n the Lie coefficients on (n, n).
    """
    if table is None:
        table = kronecker_dt(k, N).table
    M = N // 2
    om = {n: table.get((n, n), 0) for n in range(1, M + 1)}
    a = a_from_omega({n: Q(x) for n, x in om.items() if x}, M)
    lg = [Rational(0)] + [n * a.get(n, 0) * (-1) ** (k * n) for n in range(1, M + 1)]
    derived = uv.exp([Q(x) for x in lg], M, Rational(0), Rational(1))
    expected = F_k_series(k, M)
    return SlopeOneReport(k, N, derived, expected, [x - y for x, y in zip(derived, expected)])


# ---------------------------------------------------------------- m-loop quivers


def loop_omega(m: int, n: int) -> Rational:
    """(1/(m n^2)) sum_{d|n} mu(n/d) C(md, d) (-1)^((m-1)d+1)."""
    s = 0
    for d in divisors(n):
        s += mobius(n // d) * comb(m * d, d) * (-1) ** ((m - 1) * d + 1)
    return Rational(s, m * n * n)


def G_m_series(m: int, N: int) -> list:
    """sum_n (-1)^(n(1-m)) C(mn, n) t^n / ((m-1)n + 1); equals 1/(1-t) for m = 1."""
    return [Rational((-1 if (n * (m - 1)) % 2 else 1) * comb(m * n, n), (m - 1) * n + 1) for n in range(N + 1)]


def loop_product(m: int, N: int) -> list:
    """prod_{n<=N} (1 - t^n)^(n Omega(n)) mod t^(N+1)."""
    zero, one = Rational(0), Rational(1)
    out = [one] + [zero] * N
    for n in range(1, N + 1):
        e = n * loop_omega(m, n)
        if not e:
            continue
        f = uv.binomial_one_minus(e, N // n)
        spread = [zero] * (N + 1)
        for j, c in enumerate(f):
            spread[j * n] = c
        out = uv.mul(out, spread, N, zero)
    return out


@dataclass
class LoopCheck:
    m: int
    N: int
    omegas: list
    product_residual: list
    equation_residual: list

    @property
    def integral(self) -> bool:
        return all(is_integer(x) for x in self.omegas)

    @property
    def is_zero(self) -> bool:
        return not any(self.product_residual) and not any(self.equation_residual)


def check_G_m(m: int, N: int) -> LoopCheck:
    zero = Rational(0)
    G = G_m_series(m, N)
    P = loop_product(m, N)
    Gm = [Rational(1)] + [zero] * N
    for _ in range(m):
        Gm = uv.mul(Gm, G, N, zero)
    sgn = (-1) ** m
    eq = [G[n] + (sgn * Gm[n - 1] if n else 0) for n in range(N + 1)]
    eq[0] -= 1
    return LoopCheck(
        m,
        N,
        [loop_omega(m, n) for n in range(1, N + 1)],
        [p - g for p, g in zip(P, G)],
        eq,
    )


def one_loop_potential_series(d: int) -> list:
    """(1 - t)^(d-1): the expected generating series for W = Tr X^d."""
    if d < 3:
        raise ValueError("d must be at least 3")
    return [Rational((-1) ** n * comb(d - 1, n)) for n in range(d)]


@dataclass
class OneLoopPairing:
    d: int
    N: int
    p: int
    series: list
    ideals: list
    cyclic_coefficients: list

    @property
    def consistent(self) -> bool:
        """Nonzero coefficients of (1-t)^(d-1) sit exactly at the codimensions with one ideal."""
        for n in range(self.N + 1):
            c = self.series[n] if n < len(self.series) else 0
            if (c != 0) != (self.ideals[n] == 1) or self.ideals[n] > 1:
                return False
            if self.ideals[n] and self.cyclic_coefficients[n] != 1:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "deg": self.N,
            "p": self.p,
            "series": [qstr(x) for x in self.series],
            "ideals_per_codim": self.ideals,
            "consistent": self.consistent,
        }


def one_loop_hall_pairing(d: int, N: int = 3, p: int = 2) -> OneLoopPairing:
    """Pair (1-t)^(d-1) with the left ideals of F_p[x]/(x^(d-1)) of codimension <= N.

    Each codimension n <= d-1 has exactly one ideal (x^n), whose quotient is
    cyclic with coefficient genCount/autCount = 1 in F; the series has its
    support on the same degrees.
    """
    from .hall import FqAlgebraSpec, ideal_count_direct, ideal_side

    series = one_loop_potential_series(d)
    spec = FqAlgebraSpec.truncated(p, d - 1)
    direct = ideal_count_direct(spec, N)
    ideals = [sum(c for k, c in direct.items() if k[0] == n) for n in range(N + 1)]
    side = ideal_side(spec, N)
    coeff = [sum(v for k, v in side.items() if k[0] == n and direct.get(k)) for n in range(N + 1)]
    return OneLoopPairing(d, N, p, series, ideals, coeff)


# ---------------------------------------------------------------- MacMahon / D0-D6


def macmahon(N: int) -> list:
    """M(x) = prod (1 - x^n)^(-n) mod x^(N+1)."""
    zero, one = Rational(0), Rational(1)
    out = [one] + [zero] * N
    for n in range(1, N + 1):
        f = uv.binomial_one_minus(-n, N // n)
        spread = [zero] * (N + 1)
        for j, c in enumerate(f):
            spread[j * n] = c
        out = uv.mul(out, spread, N, zero)
    return out


def series_power(f: list, e: int, N: int) -> list:
    return uv.power(f, Q(e), N, Rational(0), Rational(1))


@dataclass
class D0D6Report:
    chi: int
    N: int
    sign: int
    computed: list
    expected: list
    tried: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.computed == self.expected

    def to_json(self) -> dict:
        return {
            "chi": self.chi,
            "deg": self.N,
            "pairing_sign": self.sign,
            "passed": self.passed,
            "computed": [qstr(x) for x in self.computed],
            "expected": [qstr(x) for x in self.expected],
            "tried": {str(s): ok for s, ok in self.tried.items()},
        }


def d0d6_table(chi: int, N: int, sign: int) -> list:
    """Omega(g2 - n g1), n = 0..N, after crossing from the side where D0 precedes D6.

    Basis (g1, g2) with <g1, g2> = sign; the cone is generated by -g1 and g2.
    """
    L = SkewLattice([[0, sign], [-sign, 0]])
    T = Truncation([(-1, 0), (0, 1)], (-1, 1), N + 1)
    before = Charge(L, [GaussRational(1, -10), GaussRational(0, 1)])
    after = Charge(L, [GaussRational(-1, 0), GaussRational(0, 1)])
    omega = {(-n, 0): -chi for n in range(1, N + 1)}
    omega[(0, 1)] = 1
    sd = StabilityData(L, T, before, omega)
    out = factorize(assemble(sd), after).stability_data()
    return [out.omega.get((-n, 1), Rational(0)) for n in range(N + 1)]


def d0d6_check(chi: int, N: int, sign: int | None = None) -> D0D6Report:
    """Compare the transported table with the coefficients of M(-t)^chi.

    With ``sign`` None both pairing signs are tried and the validating one
    is reported (the first that matches, +1 preferred on ties).
    """
    M = macmahon(N)
    Mneg = [c * (-1) ** n for n, c in enumerate(M)]
    expected = series_power(Mneg, chi, N)
    signs = [sign] if sign is not None else [1, -1]
    tried = {}
    best = None
    for s in signs:
        comp = d0d6_table(chi, N, s)
        tried[s] = comp == expected
        if best is None or (tried[s] and not tried[best[0]]):
            best = (s, comp)
    return D0D6Report(chi, N, best[0], best[1], expected, tried)


__all__ = [
    "kronecker_setup",
    "kronecker_dt",
    "KroneckerResult",
    "kronecker_quantum",
    "QuantumKroneckerResult",
    "xy_chart",
    "F_k_series",
    "F_k_exp_form",
    "check_F_k",
    "FkCheck",
    "check_slope_one",
    "SlopeOneReport",
    "loop_omega",
    "G_m_series",
    "loop_product",
    "check_G_m",
    "LoopCheck",
    "one_loop_potential_series",
    "one_loop_hall_pairing",
    "OneLoopPairing",
    "macmahon",
    "series_power",
    "d0d6_table",
    "d0d6_check",
    "D0D6Report",
    "is_integer",
]
