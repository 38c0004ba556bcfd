"""Dense integer polynomials as tuples, lowest degree first.

All functions take and return tuples of Python ints with no trailing zeros;
the empty tuple is the zero polynomial. Multiplication switches to Kronecker
substitution for long inputs, and gcd uses the heuristic evaluation method
with a primitive-remainder fallback.
"""
from __future__ import annotations

from math import gcd as igcd
from math import isqrt

ZERO: tuple = ()
ONE: tuple = (1,)


def trim(c) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def add(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return trim(out)


def sub(a: tuple, b: tuple) -> tuple:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, x in enumerate(b):
        out[i] -= x
    return trim(out)


def scale(a: tuple, k: int) -> tuple:
    if k == 0:
        return ZERO
    return tuple(k * x for x in a)


def content(a: tuple) -> int:
    g = 0
    for x in a:
        g = igcd(g, x)
        if g == 1:
            break
    return g


def primitive(a: tuple) -> tuple[int, tuple]:
    """Split ``a`` as ``c * p`` with p primitive and positive leading coefficient."""
    if not a:
        return 0, ZERO
    g = content(a)
    if a[-1] < 0:
        g = -g
    if g == 1:
        return 1, a
    return g, tuple(x // g for x in a)


def _maxnorm(a: tuple) -> int:
    return max(abs(x) for x in a)


def _pack(a: tuple, nbytes: int) -> int:
    pos = bytearray()
    neg = bytearray()
    have_neg = False
    for x in a:
        if x >= 0:
            pos += x.to_bytes(nbytes, "little")
            neg += bytes(nbytes)
        else:
            pos += bytes(nbytes)
            neg += (-x).to_bytes(nbytes, "little")
            have_neg = True
    p = int.from_bytes(pos, "little")
    if have_neg:
        p -= int.from_bytes(neg, "little")
    return p


def _unpack(x: int, n: int, nbytes: int) -> tuple:
    # digits are offset by half the base so no borrows occur
    half = 1 << (8 * nbytes - 1)
    offset = int.from_bytes(half.to_bytes(nbytes, "little") * n, "little")
    raw = (x + offset).to_bytes(n * nbytes + 1, "little")
    out = [
        int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half
        for i in range(n)
    ]
    return trim(out)


def mul(a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ZERO
    la, lb = len(a), len(b)
    if la == 1:
        return scale(b, a[0])
    if lb == 1:
        return scale(a, b[0])
    if la * lb <= 256:
        out = [0] * (la + lb - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return trim(out)
    bound = _maxnorm(a) * _maxnorm(b) * min(la, lb)
    nbytes = (bound.bit_length() + 2) // 8 + 1
    prod = _pack(a, nbytes) * _pack(b, nbytes)
    return _unpack(prod, la + lb - 1, nbytes)


def evaluate(a: tuple, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def divexact(a: tuple, b: tuple):
    """Return q with a = b*q over the integers, or None if no such q exists."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return ZERO
    if len(a) < len(b):
        return None
    r = list(a)
    lb = b[-1]
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + db]
        if c == 0:
            continue
        qk, rem = divmod(c, lb)
        if rem:
            return None
        q[k] = qk
        for j, y in enumerate(b):
            r[k + j] -= qk * y
    if any(r[:db]):
        return None
    return trim(q)


def _interpolate(h: int, x: int) -> tuple:
    out = []
    half = x // 2
    while h:
        g = h % x
        if g > half:
            g -= x
        out.append(g)
        h = (h - g) // x
    return tuple(out)


def _prem_gcd(a: tuple, b: tuple) -> tuple:
    # primitive pseudo-remainder sequence; inputs primitive
    while b:
        r = list(a)
        db = len(b) - 1
        lb = b[-1]
        while len(r) - 1 >= db and r:
            c = r[-1]
            shift = len(r) - 1 - db
            r = [lb * x for x in r]
            for j, y in enumerate(b):
                r[shift + j] -= c * y
            r = list(trim(r))
        a, b = b, primitive(tuple(r))[1]
    return primitive(a)[1]


def gcd(a: tuple, b: tuple) -> tuple:
    """Primitive gcd with positive leading coefficient (ONE when coprime)."""
    if not a:
        return primitive(b)[1] if b else ZERO
    if not b:
        return primitive(a)[1]
    _, a = primitive(a)
    _, b = primitive(b)
    if len(a) == 1 or len(b) == 1:
        return ONE
    if a == b:
        return a
    # strip common powers of the variable first
    za = next(i for i, x in enumerate(a) if x)
    zb = next(i for i, x in enumerate(b) if x)
    z = min(za, zb)
    a = a[za:]
    b = b[zb:]
    core = _heu_gcd(a, b)
    if z:
        core = (0,) * z + core
    return core


def _heu_gcd(a: tuple, b: tuple) -> tuple:
    if len(a) == 1 or len(b) == 1:
        return ONE
    na, nb = _maxnorm(a), _maxnorm(b)
    bound = 2 * min(na, nb) + 29
    x = max(min(bound, 99 * isqrt(bound)), 2 * min(na // abs(a[-1]), nb // abs(b[-1])) + 2)
    for _ in range(6):
        fa = evaluate(a, x)
        fb = evaluate(b, x)
        if fa and fb:
            h = igcd(fa, fb)
            cand = primitive(_interpolate(h, x))[1]
            if cand and divexact(a, cand) is not None and divexact(b, cand) is not None:
                return cand
            ca = _interpolate(fa // h, x)
            if ca:
                cand = divexact(a, ca)
                if cand is not None:
                    cand = primitive(cand)[1]
                    if divexact(b, cand) is not None:
                        return cand
        x = 73794 * x * isqrt(isqrt(x)) // 27011
    return _prem_gcd(a, b)
