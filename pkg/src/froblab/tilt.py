"""Truncated elements of the completed perfection of F̄_p((t)).

An element is a finite sum of terms a_j t^(e_j) with exponents in Z[1/p]
and coefficients in finite fields, together with a cutoff: nothing is known
about exponents >= cutoff.  |t| = 1/p.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DivisionByZero, IncompatibleFields, NegativeValuation, PrecisionLoss
from .norms import Norm
from .residue import FqElement, GF, common_field, format_fq

INF = math.inf
DEFAULT_TILT_PREC = 32


def _is_p_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def _exp(e, p):
    e = Fraction(e)
    if not _is_p_power(e.denominator, p):
        raise ValueError(f"exponent {e} is not in Z[1/{p}]")
    return e


def _min_cut(a, b):
    return a if a <= b else b


class TiltElement:
    """Σ a_j t^(e_j) + O(t^cutoff) with exponents in Z[1/p]."""

    __slots__ = ("p", "terms", "cutoff")

    __hash__ = None

    def __init__(self, p, terms=(), cutoff=INF):
        self.p = p
        cutoff = cutoff if cutoff == INF else Fraction(cutoff)
        acc = {}
        for e, c in terms:
            e = _exp(e, p)
            if e >= cutoff:
                continue
            if isinstance(c, int):
                c = GF(p)(c)
            if c.field.p != p:
                raise IncompatibleFields(f"coefficient {c} not in characteristic {p}")
            acc[e] = acc[e] + c if e in acc else c
        self.terms = tuple(sorted(((e, c) for e, c in acc.items() if not c.is_zero()),
                                  key=lambda t: t[0]))
        self.cutoff = cutoff

    @classmethod
    def _trusted(cls, p, terms, cutoff):
        self = object.__new__(cls)
        self.p = p
        self.terms = terms
        self.cutoff = cutoff
        return self

    # -- constructors -----------------------------------------------------------
    @classmethod
    def constant(cls, c, cutoff=INF):
        return cls(c.field.p, [(0, c)], cutoff)

    @classmethod
    def t_power(cls, p, e, coeff=None, cutoff=INF):
        return cls(p, [(e, coeff if coeff is not None else GF(p).one)], cutoff)

    @classmethod
    def zero(cls, p, cutoff=INF):
        return cls._trusted(p, (), cutoff)

    # -- accessors --------------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_exact(self):
        return self.cutoff == INF

    def leading(self):
        if not self.terms:
            raise PrecisionLoss("no known terms")
        return self.terms[0]

    def valuation(self):
        if not self.terms:
            if self.cutoff == INF:
                return INF
            raise PrecisionLoss(f"value is zero below cutoff {self.cutoff}")
        return self.terms[0][0]

    def norm(self):
        return Norm(self.p, self.valuation())

    def coefficient(self, e):
        e = Fraction(e)
        if e >= self.cutoff:
            raise PrecisionLoss(f"t^{e} lies beyond the cutoff {self.cutoff}")
        for ex, c in self.terms:
            if ex == e:
                return c
        return None

    def truncate(self, cutoff):
        cutoff = _min_cut(self.cutoff, cutoff if cutoff == INF else Fraction(cutoff))
        return TiltElement._trusted(self.p, tuple(t for t in self.terms if t[0] < cutoff), cutoff)

    def _coerce(self, other):
        if isinstance(other, TiltElement):
            if other.p != self.p:
                raise IncompatibleFields("tilt elements of different characteristic")
            return other
        if isinstance(other, FqElement):
            return TiltElement.constant(other)
        if isinstance(other, int) and not isinstance(other, bool):
            return TiltElement(self.p, [(0, GF(self.p)(other))])
        return None

    # -- arithmetic -------------------------------------------------------------
    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        cut = _min_cut(self.cutoff, b.cutoff)
        return TiltElement(self.p, list(self.terms) + list(b.terms), cut)

    __radd__ = __add__

    def __neg__(self):
        return TiltElement._trusted(self.p, tuple((e, -c) for e, c in self.terms), self.cutoff)

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        a = self
        va = a.terms[0][0] if a.terms else a.cutoff
        vb = b.terms[0][0] if b.terms else b.cutoff
        if (not a.terms and a.cutoff == INF) or (not b.terms and b.cutoff == INF):
            return TiltElement.zero(a.p)
        cut = _min_cut(va + b.cutoff, vb + a.cutoff)
        prods = [(ea + eb, ca * cb) for ea, ca in a.terms for eb, cb in b.terms if ea + eb < cut]
        return TiltElement(a.p, prods, cut)

    __rmul__ = __mul__

    def inverse(self, prec=DEFAULT_TILT_PREC):
        """1/a; exact inputs with more than one term are inverted to relative precision ``prec``."""
        if not self.terms:
            raise DivisionByZero("inverse of a value with no known terms")
        e0, c0 = self.terms[0]
        rel = self.cutoff - e0 if self.cutoff != INF else INF
        c0inv = c0.inverse()
        # a = c0 t^e0 (1 + h)
        h = [(e - e0, c * c0inv) for e, c in self.terms[1:]]
        if not h:
            return TiltElement(self.p, [(-e0, c0inv)], rel - e0 if rel != INF else INF)
        if rel == INF:
            rel = Fraction(prec)
        mu = h[0][0]
        H = TiltElement(self.p, h, rel)
        series = TiltElement(self.p, [(0, GF(self.p).one)], rel)
        power = TiltElement(self.p, [(0, GF(self.p).one)], rel)
        k = 1
        while k * mu < rel:
            power = (power * (-H)).truncate(rel)
            series = series + power
            k += 1
        scale = TiltElement(self.p, [(-e0, c0inv)])
        return (scale * series.truncate(rel))

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return self * b.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = TiltElement(self.p, [(0, GF(self.p).one)])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return (self - b).is_zero()

    # -- Frobenius / reduction ---------------------------------------------
    def frobenius(self, s=1):
        """Apply x -> x^(p^s); negative s applies the inverse map."""
        scale = Fraction(self.p) ** s
        cut = self.cutoff * scale if self.cutoff != INF else INF
        return TiltElement._trusted(
            self.p, tuple((e * scale, c.frobenius(s)) for e, c in self.terms), cut)

    def reduce(self):
        """Coefficient of t^0 of an integral element."""
        if self.cutoff != INF and self.cutoff <= 0:
            raise PrecisionLoss("residue unknown: cutoff <= 0")
        if self.terms and self.terms[0][0] < 0:
            raise NegativeValuation(f"term t^{self.terms[0][0]} has negative exponent")
        for e, c in self.terms:
            if e == 0:
                return c
        field = self.terms[0][1].field if self.terms else GF(self.p)
        return field.zero

    def coefficient_field(self):
        field = GF(self.p)
        for _, c in self.terms:
            field = common_field(field, c.field)
        return field

    # -- text --------------------------------------------------------------
    def __str__(self):
        parts = []
        for e, c in self.terms:
            coeff = format_fq(c)
            if e == 0:
                parts.append(coeff)
            else:
                parts.append(f"{coeff}*t^({e})")
        body = " + ".join(parts) if parts else "0"
        cut = "inf" if self.cutoff == INF else str(self.cutoff)
        return f"{body}; cutoff={cut}"

    __repr__ = __str__

    def serialize(self):
        return {
            "terms": [[str(e), c.to_list(), c.field.r] for e, c in self.terms],
            "cutoff": None if self.cutoff == INF else str(self.cutoff),
        }


def tilt_frobenius(a, s, inverse=False):
    if s < 0:
        raise ValueError("s must be >= 0")
    return a.frobenius(-s if inverse else s)


# ---------------------------------------------------------------------------

def _norm_below(cutoff, eps, p):
    """True when p^(-cutoff) < eps (exact for rational cutoff and eps)."""
    if cutoff == INF:
        return True
    c = Fraction(cutoff)
    # p^(-a/b) < eps  <=>  1 < eps^b * p^a
    a, b = c.numerator, c.denominator
    return Fraction(eps) ** b * Fraction(p) ** a > 1


class SplitResult:
    """u, the list g_0..g_m of finite-field polynomials, and m."""

    def __init__(self, u, g, m, denominator):
        self.u = u
        self.g = g
        self.m = m
        self.denominator = denominator

    def __iter__(self):
        return iter((self.u, self.g, self.m))

    def reconstruct(self, cutoff=INF):
        """Σ u^i g_i as a mapping monomial -> TiltElement."""
        out = {}
        upow = TiltElement(self.u.p, [(0, GF(self.u.p).one)])
        for gi in self.g:
            for mono, c in gi.items():
                term = upow * TiltElement.constant(c)
                out[mono] = out[mono] + term if mono in out else term
            upow = upow * self.u
        return out


def eisenstein_split(G, eps):
    """Write G = Σ_{i<=m} u^i g_i + (terms of norm < eps) with u = t^(1/e').

    ``G`` maps exponent tuples to integral TiltElements (or is a polynomial
    object exposing such a mapping as ``.terms``); e' is the common
    denominator of every exponent occurring in G and m is the largest
    integer with |u|^m >= eps.  Each g_i maps exponent tuples to finite
    field coefficients.
    """
    terms = G.terms if hasattr(G, "terms") and not isinstance(G, dict) else G
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    p = None
    den = 1
    for coeff in terms.values():
        p = coeff.p
        for e, _ in coeff.terms:
            if e < 0:
                raise NegativeValuation("eisenstein_split needs integral coefficients")
            den = den * e.denominator // math.gcd(den, e.denominator)
    if p is None:
        raise ValueError("empty polynomial")
    # m = max { m : p^m * eps^den <= 1 }
    m = 0
    while Fraction(p) ** (m + 1) * eps ** den <= 1:
        m += 1
    for coeff in terms.values():
        if not _norm_below(coeff.cutoff, eps, p):
            raise PrecisionLoss(
                f"coefficient cutoff {coeff.cutoff} does not certify the residual below {eps}")
    g = [dict() for _ in range(m + 1)]
    for mono, coeff in terms.items():
        for e, c in coeff.terms:
            i = e * den
            if i.denominator != 1:  # pragma: no cover - den is a common denominator
                raise AssertionError
            i = int(i)
            if i <= m:
                g[i][mono] = c
    u = TiltElement.t_power(p, Fraction(1, den))
    return SplitResult(u, g, m, den)


def gauss_norm_of(terms):
    """max |coefficient| of a mapping monomial -> TiltElement."""
    best = None
    for c in terms.values():
        n = c.norm()
        best = n if best is None or n > best else best
    return best
