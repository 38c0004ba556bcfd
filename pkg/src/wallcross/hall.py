"""Hall algebras of module categories over prime fields, by brute force.

Modules are tuples of m square matrices over F_p acting on column vectors.
Elements of the Hall algebra are kept in the basis h_M = [M] / #Aut(M),
where h_E h_F = sum_G c(E, F, G) h_G and c counts submodules of G
isomorphic to E with quotient isomorphic to F.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .arith import Rational, qstr

Matrix = tuple  # flat row-major tuple of length n*n
ModTuple = tuple  # tuple of m matrices


class BudgetExceeded(RuntimeError):
    pass


DEFAULT_BUDGET = 2**24


# ---------------------------------------------------------------- F_p linear algebra


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def mat_mul(A: Matrix, B: Matrix, n: int, p: int) -> Matrix:
    return tuple(
        sum(A[i * n + k] * B[k * n + j] for k in range(n)) % p for i in range(n) for j in range(n)
    )


def mat_vec(A: Matrix, v: Sequence[int], n: int, p: int) -> tuple:
    return tuple(sum(A[i * n + k] * v[k] for k in range(n)) % p for i in range(n))


def identity(n: int) -> Matrix:
    return tuple(int(i == j) for i in range(n) for j in range(n))


def mat_inv(A: Matrix, n: int, p: int) -> Matrix | None:
    M = [[A[i * n + j] for j in range(n)] + [int(i == j) for j in range(n)] for i in range(n)]
    for c in range(n):
        r = next((r for r in range(c, n) if M[r][c] % p), None)
        if r is None:
            return None
        M[c], M[r] = M[r], M[c]
        inv = pow(M[c][c], p - 2, p)
        M[c] = [x * inv % p for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [(x - f * y) % p for x, y in zip(M[r], M[c])]
    return tuple(M[i][n + j] for i in range(n) for j in range(n))


def rref(rows: Iterable[Sequence[int]], p: int) -> tuple:
    """Reduced row echelon basis of the span, as a tuple of tuples."""
    M = [list(r) for r in rows]
    if not M:
        return ()
    n = len(M[0])
    out = []
    col = 0
    for col in range(n):
        r = next((r for r in range(len(M)) if M[r][col] % p), None)
        if r is None:
            continue
        row = M.pop(r)
        inv = pow(row[col], p - 2, p)
        row = [x * inv % p for x in row]
        M = [[(x - m[col] * y) % p for x, y in zip(m, row)] for m in M]
        out = [[(x - o[col] * y) % p for x, y in zip(o, row)] for o in out]
        out.append(row)
    out.sort(key=lambda r: next(i for i, x in enumerate(r) if x))
    return tuple(tuple(r) for r in out)


def gl_count(n: int, p: int) -> int:
    c = 1
    for j in range(n):
        c *= p**n - p**j
    return c


@lru_cache(maxsize=None)
def gl_group(n: int, p: int) -> tuple:
    """All (g, g^-1) in GL(n, F_p)."""
    out = []
    for entries in itertools.product(range(p), repeat=n * n):
        g = tuple(entries)
        gi = mat_inv(g, n, p)
        if gi is not None:
            out.append((g, gi))
    return tuple(out)


def subspaces(n: int, d: int, p: int) -> Iterable[tuple]:
    """All d-dimensional subspaces of F_p^n as RREF bases."""
    for pivots in itertools.combinations(range(n), d):
        free = [(r, c) for r in range(d) for c in range(n) if c > pivots[r] and c not in pivots]
        for vals in itertools.product(range(p), repeat=len(free)):
            rows = [[0] * n for _ in range(d)]
            for r, c in enumerate(pivots):
                rows[r][c] = 1
            for (r, c), x in zip(free, vals):
                rows[r][c] = x
            yield tuple(tuple(r) for r in rows)


# ---------------------------------------------------------------- algebra specs


@dataclass(frozen=True)
class FqAlgebraSpec:
    """F_p<x_1..x_m> modulo relations.

    kind: "free" (no relations), "truncated" (m = 1, x^d = 0) or
    "monomial" (each listed word acts as zero).  ``nilpotent`` keeps only
    modules on which every generator acts nilpotently.
    """

    p: int
    m: int
    kind: str = "free"
    d: int | None = None
    words: tuple = ()
    nilpotent: bool = False

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError("p must be prime")
        if self.m < 0:
            raise ValueError("m must be non-negative")
        if self.kind not in ("free", "truncated", "monomial"):
            raise ValueError(f"unknown relation kind {self.kind!r}")
        if self.kind == "truncated" and (self.m != 1 or self.d is None or self.d < 2):
            raise ValueError("truncated specs need m = 1 and d >= 2")
        object.__setattr__(self, "words", tuple(tuple(w) for w in self.words))
        if any(not w or any(not 0 <= i < self.m for i in w) for w in self.words):
            raise ValueError("bad relation word")

    @classmethod
    def truncated(cls, p: int, d: int) -> "FqAlgebraSpec":
        return cls(p, 1, "truncated", d)

    @classmethod
    def free(cls, p: int, m: int, nilpotent: bool = False) -> "FqAlgebraSpec":
        return cls(p, m, "free", nilpotent=nilpotent)

    @classmethod
    def from_json(cls, data: dict) -> "FqAlgebraSpec":
        rel = data.get("relations", "free")
        if isinstance(rel, str):
            rel = {"kind": rel}
        return cls(
            int(data["p"]),
            int(data["m"]),
            rel.get("kind", "free"),
            rel.get("d"),
            tuple(tuple(w) for w in rel.get("words", ())),
            bool(data.get("nilpotent", False)),
        )

    @classmethod
    def load(cls, path: str) -> "FqAlgebraSpec":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        rel: dict = {"kind": self.kind}
        if self.kind == "truncated":
            rel["d"] = self.d
        if self.kind == "monomial":
            rel["words"] = [list(w) for w in self.words]
        return {"p": self.p, "m": self.m, "relations": rel, "nilpotent": self.nilpotent}

    def satisfies(self, mats: ModTuple, n: int) -> bool:
        p = self.p
        if n == 0:
            return True
        zero = (0,) * (n * n)
        if self.kind == "truncated":
            X = mats[0]
            P = X
            for _ in range(self.d - 1):
                P = mat_mul(P, X, n, p)
            if P != zero:
                return False
        elif self.kind == "monomial":
            for w in self.words:
                P = identity(n)
                for i in w:
                    P = mat_mul(P, mats[i], n, p)
                if P != zero:
                    return False
        if self.nilpotent:
            for X in mats:
                P = X
                for _ in range(n - 1):
                    P = mat_mul(P, X, n, p)
                if P != zero:
                    return False
        return True


@dataclass(frozen=True)
class FqModule:
    dim: int
    mats: ModTuple
    p: int

    def act(self, i: int, v: Sequence[int]) -> tuple:
        return mat_vec(self.mats[i], v, self.dim, self.p)

    def cyclic_span(self, v: Sequence[int]) -> tuple:
        """RREF basis of R v."""
        basis = rref([v], self.p)
        while True:
            new = rref(list(basis) + [self.act(i, b) for b in basis for i in range(len(self.mats))], self.p)
            if new == basis:
                return basis
            basis = new

    def to_json(self) -> dict:
        n = self.dim
        return {"dim": n, "matrices": [[list(X[i * n : (i + 1) * n]) for i in range(n)] for X in self.mats]}


@dataclass
class ModuleClass:
    dim: int
    index: int
    rep: FqModule
    aut: int
    gen: int
    orbit: int

    @property
    def key(self) -> tuple:
        return (self.dim, self.index)

    @property
    def label(self) -> str:
        return f"d{self.dim}.{self.index}"

    @property
    def cyclic(self) -> bool:
        return self.gen > 0


def vectors(n: int, p: int) -> Iterable[tuple]:
    return itertools.product(range(p), repeat=n)


def _gen_count(M: FqModule) -> int:
    n = M.dim
    if n == 0:
        return 1
    return sum(1 for v in vectors(n, M.p) if any(v) and len(M.cyclic_span(v)) == n)


class HallContext:
    """Module classes, lookup tables and structure constants up to dimension N."""

    def __init__(self, spec: FqAlgebraSpec, N: int, budget: int = DEFAULT_BUDGET):
        self.spec = spec
        self.N = N
        self.budget = budget
        self.classes: dict[int, list[ModuleClass]] = {}
        self.lookup: dict[int, dict] = {}
        self.valid_count: dict[int, int] = {}
        self._c: dict[tuple, dict] = {}
        for n in range(N + 1):
            self._enumerate(n)

    def _enumerate(self, n: int):
        spec, p, m = self.spec, self.spec.p, self.spec.m
        if p ** (m * n * n) > self.budget:
            raise BudgetExceeded(f"{p}^{m * n * n} tuples in dimension {n} exceed the budget {self.budget}")
        valid = [
            t for t in itertools.product(itertools.product(range(p), repeat=n * n), repeat=m) if spec.satisfies(t, n)
        ]
        self.valid_count[n] = len(valid)
        table: dict = {}
        orbits: list[tuple] = []
        G = gl_group(n, p)
        for t in valid:
            if t in table:
                continue
            orb = {tuple(mat_mul(mat_mul(g, X, n, p), gi, n, p) for X in t) for g, gi in G}
            rep = min(orb)
            idx = len(orbits)
            orbits.append((rep, len(orb)))
            for u in orb:
                table[u] = idx
        order = sorted(range(len(orbits)), key=lambda i: orbits[i][0])
        renum = {old: new for new, old in enumerate(order)}
        self.lookup[n] = {t: renum[i] for t, i in table.items()}
        gl = gl_count(n, p)
        cls = []
        for new, old in enumerate(order):
            rep, size = orbits[old]
            M = FqModule(n, rep, p)
            cls.append(ModuleClass(n, new, M, gl // size, _gen_count(M), size))
        self.classes[n] = cls

    def all_classes(self) -> list[ModuleClass]:
        return [c for n in range(self.N + 1) for c in self.classes[n]]

    def cls(self, key: tuple) -> ModuleClass:
        return self.classes[key[0]][key[1]]

    def identify(self, M: FqModule) -> tuple:
        return (M.dim, self.lookup[M.dim][M.mats])

    # sub and quotient modules

    def split(self, M: FqModule, U: tuple) -> tuple[FqModule, FqModule] | None:
        """(U, M/U) if U is a submodule, else None."""
        n, p = M.dim, M.p
        d = len(U)
        for X in M.mats:
            for u in U:
                if len(rref(list(U) + [mat_vec(X, u, n, p)], p)) != d:
                    return None
        pivots = [next(i for i, x in enumerate(r) if x) for r in U]
        comp = [tuple(int(i == c) for i in range(n)) for c in range(n) if c not in pivots]
        cols = list(U) + comp
        P = tuple(cols[j][i] for i in range(n) for j in range(n))
        Pi = mat_inv(P, n, p)
        subs, quos = [], []
        for X in M.mats:
            Y = mat_mul(mat_mul(Pi, X, n, p), P, n, p)
            subs.append(tuple(Y[i * n + j] for i in range(d) for j in range(d)))
            quos.append(tuple(Y[i * n + j] for i in range(d, n) for j in range(d, n)))
        return FqModule(d, tuple(subs), p), FqModule(n - d, tuple(quos), p)

    def constants_into(self, G: ModuleClass) -> dict:
        """{(E, F): c(E, F, G)} over all splittings of G."""
        if G.key in self._c:
            return self._c[G.key]
        out: dict = {}
        n = G.dim
        for d in range(n + 1):
            for U in subspaces(n, d, G.rep.p):
                sq = self.split(G.rep, U)
                if sq is None:
                    continue
                k = (self.identify(sq[0]), self.identify(sq[1]))
                out[k] = out.get(k, 0) + 1
        self._c[G.key] = out
        return out

    def hall_constant(self, E: tuple, F: tuple, G: tuple) -> int:
        if E[0] + F[0] != G[0]:
            raise ValueError("dimensions do not add up")
        return self.constants_into(self.cls(G)).get((E, F), 0)

    def product(self, a: dict, b: dict) -> dict:
        """Product of Hall elements in the h basis, truncated at dimension N."""
        out: dict = {}
        if not a or not b:
            return out
        dims = {E[0] + F[0] for E in a for F in b}
        for n in dims:
            if n > self.N:
                continue
            for G in self.classes[n]:
                acc = Rational(0)
                for (E, F), c in self.constants_into(G).items():
                    if E in a and F in b:
                        acc += a[E] * b[F] * c
                if acc:
                    out[G.key] = out.get(G.key, Rational(0)) + acc
        return out


# ---------------------------------------------------------------- public operations


def enumerate_modules(spec: FqAlgebraSpec, n: int, budget: int = DEFAULT_BUDGET) -> list[tuple[FqModule, int, int]]:
    ctx = HallContext(spec, n, budget)
    return [(c.rep, c.aut, c.gen) for c in ctx.classes[n]]


def hall_constant(E: FqModule, F: FqModule, G: FqModule, spec: FqAlgebraSpec) -> int:
    if E.dim + F.dim != G.dim:
        raise ValueError("dim E + dim F must equal dim G")
    ctx = _context(spec, G.dim)
    return ctx.hall_constant(ctx.identify(E), ctx.identify(F), ctx.identify(G))


_CTX: dict = {}


def _context(spec: FqAlgebraSpec, N: int, budget: int = DEFAULT_BUDGET) -> HallContext:
    for (s, M), ctx in _CTX.items():
        if s == spec and M >= N and ctx.budget >= budget:
            return ctx
    ctx = HallContext(spec, N, budget)
    _CTX[(spec, N)] = ctx
    return ctx


def A_series(spec: FqAlgebraSpec, N: int, scale_q: bool = False, budget: int = DEFAULT_BUDGET) -> dict:
    """A(t) in the h basis; t^dim M is implicit in the class key. ``scale_q`` gives A(qt)."""
    ctx = _context(spec, N, budget)
    return {
        c.key: Rational(spec.p ** c.dim if scale_q else 1) for c in ctx.all_classes()
    }


def hall_inverse(ctx: HallContext, a: dict) -> dict:
    """Inverse of 1 + (positive dimensions), degree by degree."""
    zero = (0, 0)
    if a.get(zero) != 1:
        raise ValueError("constant term must be 1")
    out = {zero: Rational(1)}
    for n in range(1, ctx.N + 1):
        a_pos = {k: v for k, v in a.items() if 0 < k[0] <= n}
        prev = {k: v for k, v in out.items() if k[0] < n}
        acc = ctx.product(a_pos, prev)
        for k, v in acc.items():
            if k[0] == n and v:
                out[k] = -v
    return out


def F_series(spec: FqAlgebraSpec, N: int, budget: int = DEFAULT_BUDGET) -> dict:
    """A(qt) A(t)^-1 in the h basis."""
    ctx = _context(spec, N, budget)
    Aq = A_series(spec, N, True, budget)
    Ai = hall_inverse(ctx, A_series(spec, N, False, budget))
    return {k: v for k, v in ctx.product(Aq, Ai).items() if v}


def to_bracket_basis(ctx: HallContext, h: dict) -> dict:
    """Coefficients of [M] from coefficients of h_M = [M] / #Aut(M)."""
    return {k: v / ctx.cls(k).aut for k, v in h.items() if v}


def ideal_side(spec: FqAlgebraSpec, N: int, budget: int = DEFAULT_BUDGET) -> dict:
    """Sum over cyclic M of (genCount / autCount) [M], in the [.] basis."""
    ctx = _context(spec, N, budget)
    return {c.key: Rational(c.gen, c.aut) for c in ctx.all_classes() if c.gen}


# independent oracles


def _words(m: int, L: int) -> list[tuple]:
    out = [()]
    for length in range(1, L + 1):
        out.extend(itertools.product(range(m), repeat=length))
    return out


def ideal_count_by_kernels(spec: FqAlgebraSpec, N: int, budget: int = DEFAULT_BUDGET) -> dict:
    """Count left ideals of finite codimension <= N by their quotient class.

    Each pair (module tuple, cyclic vector) gives the map r -> r v on words
    of length <= dim; ideals are the distinct kernels of these maps.
    """
    ctx = _context(spec, N, budget)
    p, m = spec.p, spec.m
    counts: dict = {}
    for n in range(N + 1):
        W = _words(m, n)
        seen: dict = {}
        for t in ctx.lookup[n]:
            M = FqModule(n, t, p)
            for v in vectors(n, p):
                if n and (not any(v) or len(M.cyclic_span(v)) != n):
                    continue
                cols = []
                for w in W:
                    x = v
                    for i in reversed(w):
                        x = mat_vec(t[i], x, n, p)
                    cols.append(x)
                # kernel of the n x |W| matrix with these columns
                ker = _kernel(cols, n, p)
                if ker not in seen:
                    seen[ker] = ctx.lookup[n][t]
        for ker, idx in seen.items():
            k = (n, idx)
            counts[k] = counts.get(k, 0) + 1
    return counts


def _kernel(cols: list, n: int, p: int) -> tuple:
    W = len(cols)
    if n == 0:
        return tuple(tuple(int(i == j) for j in range(W)) for i in range(W))
    rows = [[cols[j][i] for j in range(W)] for i in range(n)]
    R = rref(rows, p)
    pivots = [next(i for i, x in enumerate(r) if x) for r in R]
    basis = []
    for f in range(W):
        if f in pivots:
            continue
        vec = [0] * W
        vec[f] = 1
        for r, pc in zip(R, pivots):
            vec[pc] = (-r[f]) % p
        basis.append(vec)
    return rref(basis, p) if basis else ()


def regular_module(spec: FqAlgebraSpec) -> FqModule:
    """F_p[x]/(x^d) acting on itself, basis 1, x, ..., x^(d-1)."""
    if spec.kind != "truncated":
        raise ValueError("regular module only for truncated specs")
    d, p = spec.d, spec.p
    X = tuple(int(i == j + 1) for i in range(d) for j in range(d))
    return FqModule(d, (X,), p)


def ideal_count_direct(spec: FqAlgebraSpec, N: int) -> dict:
    """Ideals of F_p[x]/(x^d) found as x-stable subspaces, grouped by quotient class."""
    R = regular_module(spec)
    ctx = _context(spec, N)
    d = R.dim
    out: dict = {}
    for codim in range(min(N, d) + 1):
        for U in subspaces(d, d - codim, spec.p):
            sq = ctx.split(R, U)
            if sq is None:
                continue
            k = ctx.identify(sq[1])
            out[k] = out.get(k, 0) + 1
    return out


@dataclass
class IdealSumReport:
    spec: FqAlgebraSpec
    N: int
    per_degree: dict
    mismatches: list
    non_cyclic_support: list
    table: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches and not self.non_cyclic_support

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "deg": self.N,
            "passed": self.passed,
            "per_degree": {str(k): v for k, v in self.per_degree.items()},
            "mismatches": self.mismatches,
            "non_cyclic_support": self.non_cyclic_support,
            "cyclic_classes": self.table,
        }


def verify_ideal_sum(spec: FqAlgebraSpec, N: int, budget: int = DEFAULT_BUDGET) -> IdealSumReport:
    """F = A(qt)A(t)^-1 against the ideal sum, coefficient by coefficient."""
    ctx = _context(spec, N, budget)
    F = to_bracket_basis(ctx, F_series(spec, N, budget))
    I = ideal_side(spec, N, budget)
    mismatches = []
    per = {n: True for n in range(N + 1)}
    for k in sorted(set(F) | set(I)):
        if F.get(k, 0) != I.get(k, 0):
            mismatches.append({"class": ctx.cls(k).label, "F": qstr(F.get(k, 0)), "ideals": qstr(I.get(k, 0))})
            per[k[0]] = False
    noncyc = [ctx.cls(k).label for k in F if not ctx.cls(k).cyclic]
    for lab in noncyc:
        per[int(lab[1 : lab.index(".")])] = False
    table = [
        {
            "class": c.label,
            "module": c.rep.to_json(),
            "aut": c.aut,
            "gen": c.gen,
            "coefficient": qstr(F.get(c.key, 0)),
        }
        for c in ctx.all_classes()
        if c.cyclic
    ]
    return IdealSumReport(spec, N, per, mismatches, noncyc, table)


__all__ = [
    "BudgetExceeded",
    "FqAlgebraSpec",
    "FqModule",
    "ModuleClass",
    "HallContext",
    "enumerate_modules",
    "hall_constant",
    "A_series",
    "F_series",
    "hall_inverse",
    "to_bracket_basis",
    "ideal_side",
    "ideal_count_by_kernels",
    "ideal_count_direct",
    "regular_module",
    "verify_ideal_sum",
    "IdealSumReport",
    "gl_count",
    "subspaces",
]
