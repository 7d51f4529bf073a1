"""Sparse multivariate polynomials with pluggable scalar coefficients.

Monomials are exponent tuples; the order is graded-lex with
x0 > x1 > ... > xN, used for division, echelon forms and printing.
"""

from __future__ import annotations

import ast
import math
import re
from fractions import Fraction

from .errors import (DivisionByZero, InvalidDegree, NotDivisible, ResourceLimit,
                     ZeroPolynomial)
from .scalars import frobenius_coeff, is_exact_zero, scalar_str, valuation_bound

DEFAULT_TERM_CAP = 10**6


def grlex_key(mono):
    return (sum(mono), mono)


class Poly:
    """A polynomial in ``nvars`` variables as a dict {exponent tuple: coefficient}."""

    __slots__ = ("nvars", "terms")

    __hash__ = None

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != nvars:
                raise ValueError(f"monomial {mono} has wrong length for {nvars} variables")
            if isinstance(c, bool):
                c = int(c)
            if not is_exact_zero(c):
                clean[mono] = c
        self.terms = clean

    @classmethod
    def _from_clean(cls, nvars, terms):
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        return obj

    @classmethod
    def variable(cls, nvars, i):
        mono = [0] * nvars
        mono[i] = 1
        return cls(nvars, {tuple(mono): 1})

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    # -- structure ----------------------------------------------------------
    def is_zero(self):
        return not self.terms

    @property
    def degree(self):
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self):
        return len({sum(m) for m in self.terms}) <= 1

    def monomials(self):
        """Monomials in decreasing graded-lex order."""
        return sorted(self.terms, key=grlex_key, reverse=True)

    def leading(self):
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        mono = max(self.terms, key=grlex_key)
        return mono, self.terms[mono]

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), 0)

    def items(self):
        return self.terms.items()

    def _wrap(self, terms):
        return _wrap(self.nvars, terms)

    # -- arithmetic ---------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials in different numbers of variables")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return _wrap(self.nvars, {m: c for m, c in out.items() if not is_exact_zero(c)})

    __radd__ = __add__

    def __neg__(self):
        return _wrap(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return _wrap(self.nvars, {m: c * other for m, c in self.terms.items()
                                      if not is_exact_zero(c * other)})
        other = self._lift(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = c1 * c2
                out[m] = out[m] + c if m in out else c
        return _wrap(self.nvars, {m: c for m, c in out.items() if not is_exact_zero(c)})

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return _wrap(self.nvars, result.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                return False
            diff = self - other
            return all(_is_zero_value(c) for c in diff.terms.values())
        return self == Poly.constant(self.nvars, other)

    def map_coeffs(self, fn):
        return _wrap(self.nvars, {m: fn(c) for m, c in self.terms.items()})

    # -- evaluation -------------------------------------------------------
    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = tuple(point[0])
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(point)}")
        return evaluate(self, point)

    def gauss_valuation(self, p):
        """min coefficient valuation (the Gauss norm is p^-this)."""
        if not self.terms:
            return math.inf
        return min(valuation_bound(c, p) for c in self.terms.values())

    def gauss_norm(self, p):
        from .norms import Norm
        return Norm(p, self.gauss_valuation(p))

    # -- printing ---------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"{type(self).__name__}({format_poly(self)!r})"


class HomogPoly(Poly):
    """A homogeneous polynomial; every stored monomial has total degree ``deg``."""

    __slots__ = ()

    def __init__(self, nvars, terms=None, degree=None):
        super().__init__(nvars, terms)
        degs = {sum(m) for m in self.terms}
        if len(degs) > 1:
            raise InvalidDegree(f"monomials of degrees {sorted(degs)} in a homogeneous polynomial")
        if degree is not None and degs and degs != {degree}:
            raise InvalidDegree(f"expected degree {degree}, found {degs.pop()}")


def _wrap(nvars, terms):
    degs = {sum(m) for m in terms}
    cls = HomogPoly if len(degs) <= 1 else Poly
    return cls._from_clean(nvars, terms)


def _is_zero_value(c):
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_zero()


def evaluate(poly, point):
    """Evaluate at a tuple of scalars, sharing powers across monomials."""
    powers = [dict() for _ in point]

    def pw(i, k):
        cache = powers[i]
        if k not in cache:
            cache[k] = point[i] ** k
        return cache[k]

    total = None
    for mono, c in poly.terms.items():
        term = c
        for i, k in enumerate(mono):
            if k:
                term = term * pw(i, k)
        total = term if total is None else total + term
    if total is None:
        return 0
    return total


# ---------------------------------------------------------------------------
# operations on homogeneous polynomials

def gauss_normalize(H, p):
    """Divide H by its first (graded-lex) coefficient of maximal norm."""
    if H.is_zero():
        raise ZeroPolynomial("cannot normalize the zero polynomial")
    vmin = H.gauss_valuation(p)
    for mono in H.monomials():
        c = H.terms[mono]
        if valuation_bound(c, p) == vmin:
            return _divide_coeffs(H, c)
    raise AssertionError("unreachable")  # pragma: no cover


def _divide_coeffs(H, c):
    if isinstance(c, int):
        c = Fraction(c)
    if isinstance(c, Fraction):
        return H.map_coeffs(lambda a: _as_int(Fraction(a) / c))
    inv = 1 / c
    return H.map_coeffs(lambda a: _as_int(a * inv) if isinstance(a, (int, Fraction)) else a * inv)


def _as_int(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def compose(H, G, cap=DEFAULT_TERM_CAP):
    """H(G_0, ..., G_N) for polynomials G_j in a common number of variables."""
    if len(G) != H.nvars:
        raise ValueError(f"need {H.nvars} substitutions, got {len(G)}")
    nv = G[0].nvars
    powers = [dict() for _ in G]

    def pw(j, k):
        cache = powers[j]
        if k not in cache:
            if k == 0:
                cache[k] = Poly.constant(nv, 1)
            elif k - 1 in cache:
                cache[k] = cache[k - 1] * G[j]
            else:
                cache[k] = G[j] ** k
            if len(cache[k].terms) > cap:
                raise ResourceLimit(f"composition exceeds {cap} terms")
        return cache[k]

    total = {}
    for mono, c in H.terms.items():
        term = Poly.constant(nv, c)
        for j, k in enumerate(mono):
            if k:
                term = term * pw(j, k)
                if len(term.terms) > cap:
                    raise ResourceLimit(f"composition exceeds {cap} terms")
        for m, a in term.terms.items():
            total[m] = total[m] + a if m in total else a
        if len(total) > cap:
            raise ResourceLimit(f"composition exceeds {cap} terms")
    return _wrap(nv, {m: a for m, a in total.items() if not is_exact_zero(a)})


def exact_divide(A, B):
    """Q with A = B*Q exactly, by graded-lex leading-term elimination."""
    if B.is_zero():
        raise DivisionByZero("division by the zero polynomial")
    lm_b, lc_b = B.leading()
    inv = _exact_inverse(lc_b)
    quotient = {}
    R = A
    while not R.is_zero():
        lm_r, lc_r = R.leading()
        shift = tuple(a - b for a, b in zip(lm_r, lm_b))
        if any(k < 0 for k in shift):
            raise NotDivisible(f"leading monomial {lm_r} is not divisible by {lm_b}")
        coeff = _as_int(lc_r * inv)
        quotient[shift] = quotient.get(shift, 0) + coeff
        R = R - B * Poly(B.nvars, {shift: coeff})
        R = _wrap(R.nvars, {m: c for m, c in R.terms.items() if not _is_zero_value(c)})
    return _wrap(A.nvars, {m: c for m, c in quotient.items() if not is_exact_zero(c)})


def _exact_inverse(c):
    if isinstance(c, (int, Fraction)):
        return 1 / Fraction(c)
    return c.inverse()


def dehomogenize(H, i):
    """Set x_i = 1; the result has one variable fewer (indices shift down past i)."""
    if not 0 <= i < H.nvars:
        raise ValueError(f"chart {i} out of range")
    out = {}
    for mono, c in H.terms.items():
        m = mono[:i] + mono[i + 1:]
        out[m] = out[m] + c if m in out else c
    return Poly(H.nvars - 1, {m: c for m, c in out.items() if not is_exact_zero(c)})


def homogenize(f, i, degree=None):
    """Inverse of dehomogenize: reinsert x_i to make every monomial of ``degree``."""
    d = f.degree if degree is None else degree
    out = {}
    for mono, c in f.terms.items():
        k = d - sum(mono)
        if k < 0:
            raise InvalidDegree(f"monomial {mono} exceeds degree {d}")
        out[mono[:i] + (k,) + mono[i:]] = c
    return HomogPoly(f.nvars + 1, out)


def sigma_twist(f, i, s=1):
    """Coefficient-wise a -> a^(q^i), q = p^s; negative i uses inverse Frobenius.

    With this convention f(y^(1/q^i)) = (f^(σ^i)(y))^(1/q^i).
    """
    return f.map_coeffs(lambda c: frobenius_coeff(c, s * i))


# ---------------------------------------------------------------------------
# text format

def format_poly(f, names=None):
    if f.is_zero():
        return "0"
    names = names or [f"x{i}" for i in range(f.nvars)]
    parts = []
    for mono in f.monomials():
        c = f.terms[mono]
        factors = []
        for name, k in zip(names, mono):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        mon = "*".join(factors)
        cs = scalar_str(c)
        if not mon:
            parts.append(cs)
        elif cs == "1":
            parts.append(mon)
        elif cs == "-1":
            parts.append("-" + mon)
        else:
            parts.append(f"{cs}*{mon}")
    out = " + ".join(parts)
    return out.replace("+ -", "- ")


_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Pow, ast.Div)


def parse_poly(text, nvars, constants=None, homogeneous=True):
    """Parse ``coeff*x0^a*x1^b + ...``; ``constants`` names extra scalars (e.g. ``w``).

    Rational literals like 1/3 stay exact Fractions.
    """
    constants = dict(constants or {})
    src = text.replace("^", "**").replace("−", "-")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse polynomial {text!r}: {exc.msg}") from None
    var_re = re.compile(r"x(\d+)$")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Poly.constant(nvars, node.value)
        if isinstance(node, ast.Name):
            m = var_re.match(node.id)
            if m:
                idx = int(m.group(1))
                if idx >= nvars:
                    raise ValueError(f"variable {node.id} out of range for {nvars} variables")
                return Poly.variable(nvars, idx)
            if node.id in constants:
                return Poly.constant(nvars, constants[node.id])
            raise ValueError(f"unknown name {node.id!r} in {text!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = ev(node.operand)
            return -val if isinstance(node.op, ast.USub) else val
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            left = ev(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ValueError("exponents must be integer literals")
                return left ** node.right.value
            right = ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            # division only by constants
            if right.degree > 0 or len(right.terms) != 1:
                raise ValueError("can only divide by a nonzero constant")
            c = next(iter(right.terms.values()))
            inv = 1 / Fraction(c) if isinstance(c, (int, Fraction)) else c.inverse()
            return left.map_coeffs(lambda a: _as_int(a * inv))
        raise ValueError(f"unsupported syntax in polynomial {text!r}")

    result = ev(tree)
    if homogeneous:
        if not result.is_homogeneous():
            raise InvalidDegree(f"{text!r} is not homogeneous")
        return HomogPoly(nvars, result.terms)
    return result
