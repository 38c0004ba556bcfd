"""Truncated one-variable power series as coefficient lists.

Coefficients may be any ring elements supporting +, -, * and scaling by
rationals (Rational or VRatFunc); ``zero``/``one`` fix the ring.
"""
from __future__ import annotations

from .arith import Q, Rational


def mul(a: list, b: list, M: int, zero) -> list:
    out = [zero] * (M + 1)
    for i, x in enumerate(a[: M + 1]):
        if not x:
            continue
        for j, y in enumerate(b[: M + 1 - i]):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def exp(a: list, M: int, zero, one) -> list:
    """exp of a series with zero constant term: n f_n = sum k a_k f_{n-k}."""
    if a and a[0]:
        raise ValueError("exp needs a zero constant term")
    a = list(a[: M + 1]) + [zero] * max(0, M + 1 - len(a))
    f = [zero] * (M + 1)
    f[0] = one
    for n in range(1, M + 1):
        acc = zero
        for k in range(1, n + 1):
            if a[k] and f[n - k]:
                acc = acc + a[k] * f[n - k] * k
        f[n] = acc * Rational(1, n)
    return f


def log(f: list, M: int, zero) -> list:
    """log of a series with constant term 1."""
    if not f or f[0] != 1:
        raise ValueError("log needs constant term 1")
    f = list(f[: M + 1]) + [zero] * max(0, M + 1 - len(f))
    a = [zero] * (M + 1)
    for n in range(1, M + 1):
        acc = zero
        for k in range(1, n):
            if a[k] and f[n - k]:
                acc = acc + a[k] * f[n - k] * k
        a[n] = f[n] - acc * Rational(1, n)
    return a


def power(f: list, e, M: int, zero, one) -> list:
    """f^e for constant term 1 and any scalar exponent e."""
    lg = log(f, M, zero)
    return exp([x * e for x in lg], M, zero, one)


def inverse(f: list, M: int, zero, one) -> list:
    if not f or not f[0]:
        raise ZeroDivisionError("non-invertible constant term")
    f = list(f[: M + 1]) + [zero] * max(0, M + 1 - len(f))
    c = one / f[0]
    g = [zero] * (M + 1)
    g[0] = c
    for n in range(1, M + 1):
        acc = zero
        for k in range(1, n + 1):
            if f[k] and g[n - k]:
                acc = acc + f[k] * g[n - k]
        g[n] = -(acc * c)
    return g


def binomial_one_minus(e, M: int) -> list:
    """Coefficients of (1 - t)^e for rational e, up to t^M."""
    e = Q(e)
    out = [Rational(1)]
    c = Rational(1)
    for k in range(1, M + 1):
        c = c * (e - (k - 1)) / k
        out.append(c * (-1) ** k)
    return out
