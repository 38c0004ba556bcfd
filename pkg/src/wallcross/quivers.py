"""Quivers, mutation, and cluster transformations on the double torus.

Conventions: ``arrows[i][j]`` counts arrows i -> j; the skew matrix is
a = arrows - arrows^T and the class pairing is <v_i, v_j> = -a_ij.
Relative to a mutation vertex k, i "< 0" means a_ik > 0 and i "> 0"
means i != k with a_ik <= 0.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import univariate as uv
from .arith import Jet1, Q, Rational, VRatFunc, ONE_RF, ZERO_RF
from .lattice import SkewLattice, Truncation, double_lattice
from .qdilog import E_of, adjoint
from .series import Flavor, TorusSeries, arena

Vector = tuple


class NotCluster(ValueError):
    """Loops or 2-cycles: mutation is not defined on this presentation."""


@dataclass(frozen=True)
class Quiver:
    arrows: tuple

    def __init__(self, arrows: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in r) for r in arrows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("arrow matrix must be square")
        if any(x < 0 for r in rows for x in r):
            raise ValueError("arrow counts must be non-negative")
        object.__setattr__(self, "arrows", rows)

    @property
    def n(self) -> int:
        return len(self.arrows)

    @classmethod
    def from_skew(cls, a: Sequence[Sequence[int]]) -> "Quiver":
        n = len(a)
        for i in range(n):
            for j in range(n):
                if a[i][j] != -a[j][i]:
                    raise ValueError("matrix is not skew-symmetric")
        return cls([[max(a[i][j], 0) for j in range(n)] for i in range(n)])

    @classmethod
    def kronecker(cls, k: int) -> "Quiver":
        return cls([[0, k], [0, 0]])

    @classmethod
    def linear_A(cls, n: int) -> "Quiver":
        return cls([[1 if j == i + 1 else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_json(cls, data: dict) -> "Quiver":
        q = cls(data["arrows"])
        if "vertices" in data and int(data["vertices"]) != q.n:
            raise ValueError("vertex count does not match the arrow matrix")
        return q

    @classmethod
    def load(cls, path: str) -> "Quiver":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        return {"vertices": self.n, "arrows": [list(r) for r in self.arrows]}

    def is_cluster(self) -> bool:
        A = self.arrows
        return all(A[i][i] == 0 for i in range(self.n)) and all(
            min(A[i][j], A[j][i]) == 0 for i in range(self.n) for j in range(self.n)
        )

    def require_cluster(self):
        if not self.is_cluster():
            raise NotCluster("quiver has loops or 2-cycles")

    def skew(self) -> list[list[int]]:
        A = self.arrows
        return [[A[i][j] - A[j][i] for j in range(self.n)] for i in range(self.n)]

    def form(self) -> list[list[int]]:
        """<v_i, v_j> = -a_ij."""
        return [[-x for x in r] for r in self.skew()]

    def lattice(self) -> SkewLattice:
        return SkewLattice(self.form())

    def split(self, k: int) -> tuple[list[int], list[int]]:
        """(vertices < 0, vertices > 0) relative to k."""
        a = self.skew()
        neg = [i for i in range(self.n) if i != k and a[i][k] > 0]
        pos = [i for i in range(self.n) if i != k and a[i][k] <= 0]
        return neg, pos


def mutate_matrix(Q: Quiver, k: int) -> Quiver:
    Q.require_cluster()
    if not 0 <= k < Q.n:
        raise ValueError("vertex out of range")
    a = Q.skew()
    neg, pos = Q.split(k)
    b = [r[:] for r in a]
    for i in neg:
        for j in pos:
            d = a[i][k] * a[k][j]
            b[i][j] += d
            b[j][i] -= d
    for i in range(Q.n):
        if i != k:
            b[i][k] = -a[i][k]
            b[k][i] = -a[k][i]
    return Quiver.from_skew(b)


def mutate_classes(basis: Sequence[Sequence[int]], Q: Quiver, k: int) -> list[Vector]:
    """v'_k = -v_k; v'_i = v_i + a_ki v_k for i > 0; v'_i = v_i for i < 0."""
    Q.require_cluster()
    a = Q.skew()
    neg, pos = Q.split(k)
    v0 = tuple(basis[k])
    out = []
    for i, v in enumerate(basis):
        v = tuple(v)
        if i == k:
            out.append(tuple(-x for x in v0))
        elif i in pos:
            out.append(tuple(x + a[k][i] * y for x, y in zip(v, v0)))
        else:
            out.append(v)
    return out


def class_pairing_matrix(basis: Sequence[Sequence[int]], Q: Quiver) -> list[list[int]]:
    """-<b_i, b_j> for the given basis, in the original lattice of Q."""
    L = Q.lattice()
    return [[-L.pair(u, w) for w in basis] for u in basis]


def _inverse_transpose(rows: Sequence[Sequence[int]]) -> list[Vector]:
    """Rows d_j with d_j . rows_i = delta_ij."""
    n = len(rows)
    M = [[Fraction(rows[j][i]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    inv = [row[n:] for row in M]  # inverse of rows^T
    out = []
    for j in range(n):
        d = inv[j]
        if any(x.denominator != 1 for x in d):
            raise ArithmeticError("mutated classes are not a lattice basis")
        out.append(tuple(int(x) for x in d))
    return out


# ---------------------------------------------------------------- quantum


def _double_arena(Q: Quiver, N: int):
    D = double_lattice(Q.lattice())
    m = 2 * Q.n
    gens = [tuple(int(i == j) for j in range(m)) for i in range(m)]
    return arena(D, Truncation(gens, (1,) * m, N), Flavor.QUANTUM)


def _monomial_product(D: SkewLattice, factors: Sequence[Vector]) -> tuple[int, Vector]:
    """e_f1 e_f2 ... = v^s e_(sum f)."""
    s = 0
    acc = tuple(0 for _ in range(D.rank))
    for f in factors:
        s += D.pair(acc, f)
        acc = tuple(x + y for x, y in zip(acc, f))
    return s, acc


def _series_from_closed_form(ar, prefactor: Sequence[Vector], X: Vector, coeffs: Sequence[VRatFunc]) -> TorusSeries:
    """sum_j c_j * (prod prefactor) * e_X^j, keeping the terms inside the truncation."""
    D = ar.lattice
    s, base = _monomial_product(D, prefactor)
    out = {}
    for j, c in enumerate(coeffs):
        if not c:
            continue
        pt = tuple(b + j * x for b, x in zip(base, X))
        if not ar.truncation.contains(pt):
            continue
        w = s + D.pair(base, tuple(j * x for x in X))
        out[pt] = c.shift(w)
    return TorusSeries(ar, out)


def _shifted_product(m: int, M: int, invert: bool) -> list[VRatFunc]:
    """prod_{n<m} (1 + q^(n+1/2) X), or its inverse, as coefficients up to X^M."""
    f = [ONE_RF] + [ZERO_RF] * M
    for n in range(m):
        lin = [ONE_RF, VRatFunc.monomial(2 * n + 1)] + [ZERO_RF] * max(0, M - 1)
        f = uv.mul(f, lin[: M + 1], M, ZERO_RF)
    if invert:
        f = uv.inverse(f, M, ZERO_RF, ONE_RF)
    return f


@dataclass
class ClusterQuantumReport:
    quiver: Quiver
    vertex: int
    N: int
    residuals: dict

    @property
    def is_zero(self) -> bool:
        return not any(bool(r) for r in self.residuals.values())

    def to_json(self) -> dict:
        return {
            "quiver": self.quiver.to_json(),
            "vertex": self.vertex,
            "deg": self.N,
            "passed": self.is_zero,
            "residual_terms": {k: len(r) for k, r in self.residuals.items()},
        }


def cluster_map_quantum(Q: Quiver, k: int, N: int) -> ClusterQuantumReport:
    """Conjugate every generator of the double quantum torus by E(e_k)^-1 and
    compare with the closed forms written in the mutated monomials."""
    Q.require_cluster()
    n = Q.n
    ar = _double_arena(Q, N)
    a = Q.skew()
    neg, pos = Q.split(k)
    std = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    vp = mutate_classes(std, Q, k)
    dual = _inverse_transpose(vp)
    z = (0,) * n

    def cls(v):  # class vector in the double lattice
        return tuple(v) + z

    def dl(d):  # dual vector in the double lattice
        return z + tuple(d)

    e0p = cls(vp[k])
    e0p_inv = tuple(-x for x in e0p)
    E = E_of(ar.monomial(cls(std[k])))
    res = {}
    for i in range(n):
        lhs = adjoint(E, ar.monomial(cls(std[i])), inverse=True)
        if i == k:
            rhs = _series_from_closed_form(ar, [e0p_inv], e0p, [ONE_RF])
        elif i in pos:
            m = a[k][i]
            rhs = _series_from_closed_form(ar, [cls(vp[i])], e0p, _shifted_product(m, m, False))
        else:
            m = a[i][k]
            rhs = _series_from_closed_form(ar, [cls(vp[i])], e0p_inv, _shifted_product(m, N, True))
        res[f"e{i}"] = lhs - rhs
    for i in range(n):
        lhs = adjoint(E, ar.monomial(dl(std[i])), inverse=True)
        if i != k:
            rhs = _series_from_closed_form(ar, [dl(dual[i])], e0p, [ONE_RF])
        else:
            pre = [tuple(-x for x in dl(dual[k]))] + [
                tuple(a[k][j] * x for x in dl(dual[j])) for j in pos if a[k][j]
            ]
            rhs = _series_from_closed_form(ar, pre, e0p_inv, _shifted_product(1, N, True))
        res[f"e{i}_dual"] = lhs - rhs
    return ClusterQuantumReport(Q, k, N, res)


# ---------------------------------------------------------------- classical


def classical_cluster_map(Q: Quiver, k: int):
    """The quasi-classical map as a callable on (y'_0..y'_n-1, x'_0..x'_n-1).

    Works on plain rationals and on Jet1 values alike.
    """
    Q.require_cluster()
    n = Q.n
    a = Q.skew()
    neg, pos = Q.split(k)

    def F(point):
        y, x = list(point[:n]), list(point[n:])
        y0 = y[k]
        one_minus_inv = 1 - 1 / y0
        ys, xs = [], []
        for i in range(n):
            if i == k:
                ys.append(1 / y0)
            elif i in neg:
                ys.append(y[i] / one_minus_inv ** a[i][k])
            else:
                ys.append(y[i] * (1 - y0) ** a[k][i])
        for i in range(n):
            if i != k:
                xs.append(x[i])
            else:
                t = 1 / x[k]
                for j in pos:
                    if a[k][j]:
                        t = t * x[j] ** a[k][j]
                xs.append(t / one_minus_inv)
        return ys + xs

    return F


def double_poisson_matrix(Q: Quiver, point: Sequence) -> list[list]:
    """{z_a, z_b} for z = (y, x) with {y_i,y_j} = b_ij y_i y_j, {y_i,x_j} = delta_ij y_i x_j."""
    D = double_lattice(Q.lattice()).form
    m = len(D)
    return [[D[r][c] * point[r] * point[c] for c in range(m)] for r in range(m)]


def on_N(Q: Quiver, point: Sequence) -> bool:
    """y_i = -prod_j x_j^(a_ij) for every i."""
    n = Q.n
    a = Q.skew()
    y, x = point[:n], point[n:]
    for i in range(n):
        p = Rational(1)
        for j in range(n):
            if a[i][j]:
                p = p * Q_pow(x[j], a[i][j])
        if y[i] != -p:
            return False
    return True


def Q_pow(x, e: int):
    return Q(x) ** e if e >= 0 else 1 / Q(x) ** (-e)


def point_on_N(Q: Quiver, x: Sequence) -> list:
    n = Q.n
    a = Q.skew()
    ys = []
    for i in range(n):
        p = Rational(1)
        for j in range(n):
            if a[i][j]:
                p = p * Q_pow(x[j], a[i][j])
        ys.append(-p)
    return ys + list(x)


def _rand_q(rng: random.Random):
    while True:
        num = rng.randint(-9, 9)
        den = rng.randint(1, 7)
        if num:
            return Rational(num, den)


@dataclass
class ClusterClassicalReport:
    quiver: Quiver
    vertex: int
    trials: int
    seed: int
    poisson_failures: int = 0
    N_failures: int = 0
    off_N_failures: int = 0
    resampled: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not (self.poisson_failures or self.N_failures or self.off_N_failures)

    def to_json(self) -> dict:
        return {
            "quiver": self.quiver.to_json(),
            "vertex": self.vertex,
            "trials": self.trials,
            "seed": self.seed,
            "passed": self.passed,
            "poisson_failures": self.poisson_failures,
            "N_failures": self.N_failures,
            "off_N_failures": self.off_N_failures,
            "resampled": self.resampled,
        }


def cluster_map_classical_check(Q: Quiver, k: int, trials: int = 100, seed: int = 0) -> ClusterClassicalReport:
    """Poisson preservation by exact jets, and N' -> N with an off-N' control, at random points."""
    Q.require_cluster()
    n = Q.n
    m = 2 * n
    Qp = mutate_matrix(Q, k)
    F = classical_cluster_map(Q, k)
    rng = random.Random(seed)
    rep = ClusterClassicalReport(Q, k, trials, seed)
    done = 0
    while done < trials:
        p = [_rand_q(rng) for _ in range(m)]
        try:
            jets = F([Jet1.variable(p[i], i, m) for i in range(m)])
            img = [j.value for j in jets]
            if any(v == 0 for v in img):
                raise ZeroDivisionError
            xq = [_rand_q(rng) for _ in range(n)]
            pn = point_on_N(Qp, xq)
            on = F(pn)
            off = list(pn)
            off[rng.randrange(n)] *= 2
            offimg = F(off)
        except ZeroDivisionError:
            rep.resampled += 1
            continue
        done += 1
        J = [j.partials for j in jets]
        P1 = double_poisson_matrix(Qp, p)
        P0 = double_poisson_matrix(Q, img)
        ok = True
        for r in range(m):
            JP = [sum(J[r][s] * P1[s][c] for s in range(m)) for c in range(m)]
            for c in range(m):
                if sum(JP[s] * J[c][s] for s in range(m)) != P0[r][c]:
                    ok = False
        if not ok:
            rep.poisson_failures += 1
            rep.failures.append(("poisson", p))
        if not on_N(Q, on):
            rep.N_failures += 1
            rep.failures.append(("N", pn))
        if on_N(Q, offimg):
            rep.off_N_failures += 1
            rep.failures.append(("off_N", off))
    return rep


__all__ = [
    "Quiver",
    "NotCluster",
    "mutate_matrix",
    "mutate_classes",
    "class_pairing_matrix",
    "cluster_map_quantum",
    "ClusterQuantumReport",
    "classical_cluster_map",
    "cluster_map_classical_check",
    "ClusterClassicalReport",
    "double_poisson_matrix",
    "on_N",
    "point_on_N",
]
