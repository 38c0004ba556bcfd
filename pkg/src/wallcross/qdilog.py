"""The quantum dilogarithm E(x) = sum_l eps_l x^l and its identities.

eps_l = v^(l^2) / prod_{j<l} (v^(2l) - v^(2j)), with v = q^(1/2).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .arith import ONE_RF, ZERO_RF, VPoly, VRatFunc
from .lattice import SkewLattice, Truncation
from .series import Flavor, TorusSeries, arena, inv, mul, primitive_of, ray_series


@lru_cache(maxsize=None)
def eps(l: int) -> VRatFunc:
    if l == 0:
        return ONE_RF
    den = VPoly.const(1)
    for j in range(l):
        den = den * VPoly({2 * l: 1, 2 * j: -1})
    return VRatFunc(VPoly.monomial(l * l), den)


class ESeries:
    """Coefficients eps_0..eps_N of the quantum dilogarithm."""

    def __init__(self, N: int):
        self.N = N
        self.coeffs = [eps(l) for l in range(N + 1)]

    def __getitem__(self, l: int) -> VRatFunc:
        return self.coeffs[l]

    def __len__(self):
        return self.N + 1


class MultiRayArgument(ValueError):
    """E was applied to something other than a scalar multiple of one monomial."""


def E_of(a: TorusSeries, N: int | None = None) -> TorusSeries:
    """sum_l eps_l a^l for a = c * e_gamma."""
    ar = a.arena
    if not ar.quantum:
        raise TypeError("E needs the quantum flavor")
    if a.constant():
        raise ValueError("argument must have zero constant term")
    items = a.items()
    if not items:
        return ar.one_series()
    if len(items) != 1:
        raise MultiRayArgument("E argument must be a single monomial")
    (i, c), = items
    g = ar.points[i]
    N = ar.N if N is None else min(N, ar.N)
    M = N // ar.degs[i]
    g0, m = primitive_of(g)
    coeffs = [ZERO_RF] * (m * M + 1)
    cl = ONE_RF
    for l in range(M + 1):
        coeffs[l * m] = eps(l) * cl
        cl = cl * c
    return ray_series(ar, g0, coeffs).truncate(N)


def E_power(ar, g: Sequence[int], omega) -> TorusSeries:
    """E(e_g)^omega via exp(omega log E)."""
    from .engine import QuantumArena, a_q_from_omega_q

    g0, m = primitive_of(g)
    M = ar.N // ar.truncation.delta(g0)
    a = a_q_from_omega_q({m: VRatFunc.from_scalar(omega) if not isinstance(omega, VRatFunc) else omega}, M)
    qa = QuantumArena(ar.lattice, ar.truncation)
    return qa.ray_element({tuple(k * t for t in g0): x for k, x in a.items()})


def _plane(N: int):
    L = SkewLattice([[0, 1], [-1, 0]])
    T = Truncation([(1, 0), (0, 1)], (1, 1), max(N, 1))
    return arena(L, T, Flavor.QUANTUM)


def _line(N: int):
    L = SkewLattice([[0]])
    T = Truncation([(1,)], (1,), max(N, 1))
    return arena(L, T, Flavor.QUANTUM)


def _cut(s: TorusSeries, N: int) -> TorusSeries:
    return s.truncate(N)


def check_pentagon(N: int) -> TorusSeries:
    """E(x1)E(x2) - E(x2)E(x12)E(x1), x12 = v^-1 x1 x2, with x1 x2 = q x2 x1."""
    ar = _plane(N)
    x1 = ar.monomial((1, 0))
    x2 = ar.monomial((0, 1))
    x12 = mul(x1, x2).scale(VRatFunc.monomial(-1))
    E1, E2, E12 = E_of(x1), E_of(x2), E_of(x12)
    return _cut(mul(E1, E2) - mul(mul(E2, E12), E1), N)


def power_sum_E(s: TorusSeries) -> TorusSeries:
    """sum_l eps_l s^l for a general series s with zero constant term."""
    ar = s.arena
    md = s.min_degree()
    out = ar.one_series()
    if md is None:
        return out
    term = ar.one_series()
    for l in range(1, ar.N // md + 1):
        term = mul(term, s)
        out = out + term.scale(eps(l))
    return out


def check_exp_sum(N: int) -> TorusSeries:
    """E(x2)E(x1) - E(x1 + x2) with x1 x2 = q x2 x1."""
    ar = _plane(N)
    x1 = ar.monomial((1, 0))
    x2 = ar.monomial((0, 1))
    return _cut(mul(E_of(x2), E_of(x1)) - power_sum_E(x1 + x2), N)


def check_functional_eq(N: int) -> TorusSeries:
    """E(qx) - (1 + v x) E(x) in one variable."""
    ar = _line(N)
    x = ar.monomial((1,))
    lhs = E_of(x.scale(VRatFunc.monomial(2)))
    rhs = mul(ar.one_series() + x.scale(VRatFunc.monomial(1)), E_of(x))
    return _cut(lhs - rhs, N)


def vadic_truncate(f: VRatFunc, K: int) -> VPoly:
    """The expansion of f in Q((v)) with all terms of exponent >= K dropped."""
    if not f:
        return VPoly()
    num = f.numerator
    den = f.denominator  # den(0) = 1 after normalization
    lo = num.low
    if lo >= K:
        return VPoly()
    L = K - lo
    d = [den.coeff(i) for i in range(L)]
    n = [num.coeff(lo + i) for i in range(L)]
    out = []
    for k in range(L):
        acc = n[k]
        for j in range(1, k + 1):
            if d[j]:
                acc -= d[j] * out[k - j]
        out.append(acc / d[0])
    return VPoly({lo + k: c for k, c in enumerate(out)})


@dataclass
class ProductCheck:
    residual: TorusSeries
    precision: int

    @property
    def is_zero(self) -> bool:
        return not self.residual


def check_product_formula(N: int) -> ProductCheck:
    """prod_{n<=N} (1 + v^(2n+1) x)^-1 against sum eps_l x^l.

    The finite product differs from E by a factor 1 + O(v^(2N+3)), so the
    coefficients must agree as Laurent series in v below that order; the
    residual is the difference expanded and cut at v^(2N+3).
    """
    ar = _line(N)
    x = ar.monomial((1,))
    P = ar.one_series()
    for n in range(N + 1):
        P = mul(P, inv(ar.one_series() + x.scale(VRatFunc.monomial(2 * n + 1))))
    diff = _cut(P - E_of(x), N)
    K = 2 * N + 3
    res = {}
    for g, c in diff.coeffs.items():
        t = vadic_truncate(c, K)
        if t:
            res[g] = t
    return ProductCheck(TorusSeries(ar, res), K)


@dataclass
class ConjugationCheck:
    on_x2: TorusSeries
    on_x1: TorusSeries
    on_product: TorusSeries

    @property
    def is_zero(self) -> bool:
        return not (self.on_x2 or self.on_x1 or self.on_product)


def adjoint(E: TorusSeries, y: TorusSeries, inverse: bool = False) -> TorusSeries:
    """E y E^-1, or E^-1 y E when ``inverse``."""
    Ei = inv(E)
    if inverse:
        return mul(mul(Ei, y), E)
    return mul(mul(E, y), Ei)


def check_conjugation(N: int) -> ConjugationCheck:
    """Ad_E(x1)(x2) = x2 (1 + v x1), Ad_E(x1)(x1) = x1, Ad multiplicative."""
    ar = _plane(N)
    x1 = ar.monomial((1, 0))
    x2 = ar.monomial((0, 1))
    E1 = E_of(x1)
    ad2 = adjoint(E1, x2)
    r2 = ad2 - mul(x2, ar.one_series() + x1.scale(VRatFunc.monomial(1)))
    r1 = adjoint(E1, x1) - x1
    prod = mul(x2, x2)
    rp = adjoint(E1, prod) - mul(ad2, ad2)
    return ConjugationCheck(_cut(r2, N), _cut(r1, N), _cut(rp, N))


class CyclicQuiver(ValueError):
    pass


def compatible_order(arrows: Sequence[Sequence[int]]) -> list[int]:
    """Vertex order with E(e_i) before E(e_j) whenever there is an arrow j -> i."""
    n = len(arrows)
    remaining = set(range(n))
    order: list[int] = []
    while remaining:
        # a vertex is ready when all targets of its arrows are already placed
        ready = [j for j in sorted(remaining) if all(arrows[j][i] == 0 or i in order for i in range(n) if i != j)]
        if not ready:
            raise CyclicQuiver("quiver has an oriented cycle")
        order.append(ready[0])
        remaining.discard(ready[0])
    return order


def quiver_arena(arrows: Sequence[Sequence[int]], N: int, flavor: Flavor = Flavor.QUANTUM):
    n = len(arrows)
    form = [[arrows[j][i] - arrows[i][j] for j in range(n)] for i in range(n)]
    L = SkewLattice(form)
    gens = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    T = Truncation(gens, (1,) * n, N)
    return arena(L, T, flavor)


def E_Q_acyclic(arrows: Sequence[Sequence[int]], N: int, order: Sequence[int] | None = None) -> TorusSeries:
    """Ordered product of E(e_i) for an acyclic quiver given by its arrow matrix."""
    if hasattr(arrows, "arrows"):
        arrows = arrows.arrows
    ar = quiver_arena(arrows, N)
    n = len(arrows)
    if order is None:
        order = compatible_order(arrows)
    else:
        pos = {v: k for k, v in enumerate(order)}
        for j in range(n):
            for i in range(n):
                if arrows[j][i] and pos[i] > pos[j]:
                    raise ValueError("order is not compatible with the arrows")
        compatible_order(arrows)  # still reject cyclic quivers
    out = ar.one_series()
    for i in order:
        g = tuple(1 if k == i else 0 for k in range(n))
        out = mul(out, E_of(ar.monomial(g)))
    return out


__all__ = [
    "eps",
    "ESeries",
    "E_of",
    "E_power",
    "MultiRayArgument",
    "check_pentagon",
    "check_exp_sum",
    "check_functional_eq",
    "check_product_formula",
    "check_conjugation",
    "adjoint",
    "vadic_truncate",
    "power_sum_E",
    "CyclicQuiver",
    "compatible_order",
    "quiver_arena",
    "E_Q_acyclic",
    "ProductCheck",
    "ConjugationCheck",
]
