"""Backend selection for scalar arithmetic and the series kernel.

Set ``WALLCROSS_PURE=1`` to force the pure-Python fallbacks (``fractions``
rationals and the interpreted kernel). ``WALLCROSS_KERNEL=python`` swaps
only the kernel. Otherwise gmpy2 rationals and the compiled kernel are
used when they import.
"""
from __future__ import annotations

import os
from fractions import Fraction

PURE = os.environ.get("WALLCROSS_PURE", "").strip() not in ("", "0")

_mpq = None
if not PURE:
    try:
        from gmpy2 import mpq as _mpq
    except ImportError:  # pragma: no cover
        _mpq = None

if _mpq is not None:
    Rational = _mpq
    RATIONAL_BACKEND = "gmpy2"
else:
    Rational = Fraction
    RATIONAL_BACKEND = "fractions"

RATIONAL_TYPES = (Fraction, int) if _mpq is None else (Fraction, int, _mpq)

kernel = None
KERNEL_BACKEND = "python"
if not PURE and os.environ.get("WALLCROSS_KERNEL", "").strip().lower() != "python":
    try:
        from . import _kernels as kernel  # type: ignore[no-redef]

        KERNEL_BACKEND = "cython"
    except ImportError:
        kernel = None
if kernel is None:
    from . import _kernels_py as kernel  # type: ignore[no-redef]


def Q(x, y=None):
    """Build an exact rational from ints, strings like ``"3/4"``, or rationals."""
    if y is not None:
        return Rational(x, y)
    if isinstance(x, str):
        return Rational(Fraction(x))
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals")
    return Rational(x)


def qstr(x) -> str:
    """Serialize a rational as ``"p/q"`` or ``"p"``."""
    x = Fraction(int(x.numerator), int(x.denominator)) if not isinstance(x, int) else Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def threads() -> int:
    raw = os.environ.get("WALLCROSS_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)
