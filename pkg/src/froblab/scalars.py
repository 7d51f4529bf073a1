"""Uniform helpers over the coefficient types used by polynomials and points.

Supported scalars: int and Fraction (exact rationals, read p-adically),
PadicNumber, FqElement (trivial absolute value) and TiltElement.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .local import PadicNumber
from .residue import FqElement
from .tilt import TiltElement


def is_zero(c):
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_zero()


def is_exact_zero(c):
    if isinstance(c, PadicNumber):
        return c.is_exact_zero()
    if isinstance(c, TiltElement):
        return not c.terms and c.cutoff == math.inf
    return is_zero(c)


def _vp_int(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def valuation(c, p):
    """Valuation normalized with v(p) = 1 (v(t) = 1 on the tilt side)."""
    if isinstance(c, bool):
        c = int(c)
    if isinstance(c, int):
        return math.inf if c == 0 else Fraction(_vp_int(c, p))
    if isinstance(c, Fraction):
        if c == 0:
            return math.inf
        return Fraction(_vp_int(c.numerator, p) - _vp_int(c.denominator, p))
    if isinstance(c, FqElement):
        return math.inf if c.is_zero() else Fraction(0)
    return c.valuation()


def valuation_bound(c, p):
    """Valuation, or the precision when the value is zero to its precision."""
    if isinstance(c, PadicNumber):
        return c.valuation_bound()
    if isinstance(c, TiltElement):
        if c.terms:
            return c.terms[0][0]
        return c.cutoff
    return valuation(c, p)


def frobenius_coeff(c, k):
    """a -> a^(p^k) on characteristic-p scalars (k may be negative)."""
    if isinstance(c, (FqElement, TiltElement)):
        return c.frobenius(k)
    if isinstance(c, int):
        return c
    raise TypeError(f"Frobenius twist needs characteristic-p coefficients, got {type(c).__name__}")


def scalar_str(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return str(c.numerator)
    if isinstance(c, TiltElement):
        return "(" + str(c).split(";")[0] + ")"
    return str(c)
