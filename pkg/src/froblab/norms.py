"""Exact nonarchimedean norms p^(-v) with rational v."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering


@total_ordering
class Norm:
    """The real number p^(-val); ``val = inf`` encodes the norm 0.

    Kept symbolic so that norms like 2^(-1/2) compare and print exactly.
    """

    __slots__ = ("p", "val")

    def __init__(self, p, val):
        self.p = p
        self.val = val if val == math.inf else Fraction(val)

    @classmethod
    def zero(cls, p):
        return cls(p, math.inf)

    def is_zero(self):
        return self.val == math.inf

    def __mul__(self, other):
        if isinstance(other, Norm):
            return Norm(self.p, self.val + other.val)
        return NotImplemented

    def _key(self, other):
        if isinstance(other, Norm):
            if other.p != self.p:
                return float(self), float(other)
            # larger valuation means smaller norm
            return -self.val, -other.val
        if isinstance(other, (int, Fraction, float)):
            return float(self), float(other)
        return None

    def __eq__(self, other):
        k = self._key(other)
        if k is None:
            return NotImplemented
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.as_fraction() == other if self.is_rational() else False
        return k[0] == k[1]

    def __lt__(self, other):
        k = self._key(other)
        if k is None:
            return NotImplemented
        return k[0] < k[1]

    def __hash__(self):
        return hash((self.p, self.val))

    def is_rational(self):
        return self.val == math.inf or self.val.denominator == 1

    def as_fraction(self):
        if self.val == math.inf:
            return Fraction(0)
        if self.val.denominator != 1:
            raise ValueError(f"{self} is irrational")
        v = int(self.val)
        return Fraction(1, self.p**v) if v >= 0 else Fraction(self.p ** (-v))

    def __float__(self):
        if self.val == math.inf:
            return 0.0
        return float(self.p) ** float(-self.val)

    def __str__(self):
        if self.val == math.inf:
            return "0"
        if self.val == 0:
            return "1"
        v = -self.val
        exp = str(v) if v.denominator == 1 else f"({v})"
        return f"{self.p}^{exp}"

    def __repr__(self):
        return f"Norm({self})"
