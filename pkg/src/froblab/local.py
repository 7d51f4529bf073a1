"""Precision-truncated arithmetic in p-adic local fields.

A field is either an unramified extension U = Q_p[θ]/(f) of degree r or a
single Eisenstein step E = U[π]/(g) of degree e above it.  An element is
stored as p^d * X where X is an integer vector over the basis θ^i π^j
(index j*r + i) not divisible by p.  Valuations and precisions are tracked
internally as integers in units of v(π) = 1/e; the public API reports them
as Fractions normalized so that v(p) = 1.
"""

from __future__ import annotations

import math
import random as _random
from fractions import Fraction
from functools import lru_cache

from .errors import (DivisionByZero, HenselPreconditionFailed, IncompatibleFields,
                     NegativeValuation, PrecisionLoss, RamifiedFieldUnsupported,
                     ResourceLimit)
from .norms import Norm
from .residue import GF, FqElement

DEFAULT_PRECISION = 32
MAX_PRECISION = 1 << 14


def _vp(n, p):
    if n == 0:
        return math.inf
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


class LocalField:
    """Descriptor of Q_p, an unramified extension, or one Eisenstein step above it.

    ``prec`` is the default absolute precision in units of v(π); it is used
    whenever an exact input has to be approximated (fractions, inverses,
    Teichmüller lifts).
    """

    def __init__(self, p, r=1, eisenstein=None, prec=DEFAULT_PRECISION, modulus=None):
        if prec < 1 or prec > MAX_PRECISION:
            raise ResourceLimit(f"precision {prec} outside [1, {MAX_PRECISION}]")
        self.p = p
        self.r = r
        self.residue = GF(p, r, modulus)
        # integer lift of the residue modulus, coefficients in [0, p)
        self.modulus = tuple(self.residue.modulus)
        self.prec = prec
        if eisenstein is None:
            self.e = 1
            self.eisenstein = None
        else:
            coeffs = [self._theta_vec(c) for c in eisenstein]
            if len(coeffs) < 2 or coeffs[-1] != (1,) + (0,) * (r - 1):
                raise ValueError("Eisenstein polynomial must be monic of degree >= 1")
            for c in coeffs[:-1]:
                if any(x % p for x in c):
                    raise ValueError("non-leading Eisenstein coefficients must be divisible by p")
            if all(x % (p * p) == 0 for x in coeffs[0]):
                raise ValueError("Eisenstein constant term must have valuation exactly 1")
            self.e = len(coeffs) - 1
            self.eisenstein = tuple(coeffs)
        self.n = self.e * self.r
        self._sigma_cache = {}

    def _theta_vec(self, c):
        if isinstance(c, int):
            return (c,) + (0,) * (self.r - 1)
        c = tuple(int(x) for x in c)
        if len(c) != self.r:
            raise ValueError(f"expected {self.r} θ-coordinates")
        return c

    # -- identity -----------------------------------------------------------
    @property
    def key(self):
        return (self.p, self.r, self.modulus, self.eisenstein)

    def __eq__(self, other):
        return isinstance(other, LocalField) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def is_unramified(self):
        return self.e == 1

    def __repr__(self):
        base = f"Q_{self.p}" if self.r == 1 else f"Q_{self.p}^({self.r})"
        if self.e > 1:
            return f"{base}(π), π^{self.e} Eisenstein"
        return base

    def with_precision(self, prec):
        if prec == self.prec:
            return self
        f = LocalField.__new__(LocalField)
        f.__dict__.update(self.__dict__)
        f.prec = prec
        f._sigma_cache = self._sigma_cache
        return f

    # -- constructors -----------------------------------------------------
    def zero(self, prec=None):
        return PadicNumber._raw(self, 0, (0,) * self.n, None, prec)

    def one(self):
        return self(1)

    def __call__(self, value, prec=None):
        """Coerce an int, Fraction, PadicNumber, or θ-coordinate list."""
        if isinstance(value, PadicNumber):
            out = value if value.field == self else _embed(value, self)
            return out if prec is None else out.add_bigoh(prec)
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            x = PadicNumber._make(self, 0, [value] + [0] * (self.n - 1), None)
            return x if prec is None else x.add_bigoh(prec)
        if isinstance(value, Fraction):
            num = self(value.numerator)
            den = self(value.denominator)
            if value.denominator == 1:
                return num if prec is None else num.add_bigoh(prec)
            return (num / den).add_bigoh(prec) if prec is not None else num / den
        if isinstance(value, (list, tuple)):
            coords = [int(c) for c in value]
            if len(coords) == self.r:
                coords = coords + [0] * (self.n - self.r)
            if len(coords) != self.n:
                raise ValueError(f"expected {self.r} or {self.n} coordinates")
            return PadicNumber._make(self, 0, coords, prec)
        raise TypeError(f"cannot coerce {type(value).__name__} into {self}")

    def theta(self):
        if self.r == 1:
            raise ValueError("Q_p has no θ")
        return self([0, 1] + [0] * (self.r - 2))

    def uniformizer(self):
        if self.e == 1:
            return self(self.p)
        v = [0] * self.n
        v[self.r] = 1
        return PadicNumber._make(self, 0, v, None)

    def random_integral(self, rng=None, prec=None, min_val=0):
        """Random element of valuation >= min_val known to precision ``prec``."""
        rng = rng or _random
        prec = self.prec if prec is None else prec
        big = self.p ** (prec // self.e + 2)
        coords = [rng.randrange(big) for _ in range(self.n)]
        x = PadicNumber._make(self, 0, coords, prec)
        if min_val:
            x = (x * self.uniformizer() ** min_val).add_bigoh(prec)
        return x

    def random_unit(self, rng=None, prec=None):
        rng = rng or _random
        while True:
            x = self.random_integral(rng, prec)
            if not x.is_zero() and x._v == 0:
                return x

    def lift_residue(self, a, prec=None):
        """Coordinate-wise integer lift of a residue element (digits in [0,p))."""
        a = self._residue_elem(a)
        return PadicNumber._make(self, 0, list(a.coeffs) + [0] * (self.n - self.r), prec)

    def _residue_elem(self, a):
        if isinstance(a, int):
            return self.residue(a)
        if a.field is not self.residue:
            return a.embed(self.residue)
        return a


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class PadicNumber:
    """An element of a LocalField known modulo π^prec (prec None means exact)."""

    __slots__ = ("field", "_d", "_X", "_v", "_prec")

    __hash__ = None

    @classmethod
    def _raw(cls, field, d, X, v, prec):
        self = object.__new__(cls)
        self.field = field
        self._d = d
        self._X = X
        self._v = v
        self._prec = prec
        return self

    @classmethod
    def _make(cls, field, d, X, prec):
        p, e, r = field.p, field.e, field.r
        if prec is not None:
            m = prec - e * d
            if m <= 0:
                return cls._raw(field, 0, (0,) * field.n, None, prec)
            X = _reduce_vec(X, m, p, e, r)
        if not any(X):
            return cls._raw(field, 0, (0,) * field.n, None, prec)
        while all(c % p == 0 for c in X):
            X = [c // p for c in X]
            d += 1
        vx = 0
        for j in range(e):
            if any(X[j * r + i] % p for i in range(r)):
                vx = j
                break
        return cls._raw(field, d, tuple(X), e * d + vx, prec)

    # -- basic accessors -------------------------------------------------------
    @property
    def p(self):
        return self.field.p

    def is_zero(self):
        """True for an exact zero and for zero to the known precision."""
        return self._v is None

    def is_exact(self):
        return self._prec is None

    def is_exact_zero(self):
        return self._v is None and self._prec is None

    def valuation(self):
        """Exact valuation with v(p) = 1; +inf for exact zero."""
        if self._v is None:
            if self._prec is None:
                return math.inf
            raise PrecisionLoss(f"value is zero to precision {Fraction(self._prec, self.field.e)}")
        return Fraction(self._v, self.field.e)

    def valuation_bound(self):
        """Valuation if known, else the precision (a lower bound), else inf."""
        if self._v is not None:
            return Fraction(self._v, self.field.e)
        if self._prec is None:
            return math.inf
        return Fraction(self._prec, self.field.e)

    def norm(self):
        return Norm(self.field.p, self.valuation())

    @property
    def precision(self):
        return None if self._prec is None else Fraction(self._prec, self.field.e)

    @property
    def prec_units(self):
        """Absolute precision in units of v(π); None when exact."""
        return self._prec

    @property
    def val_units(self):
        """Valuation in units of v(π); None when zero."""
        return self._v

    def relative_precision(self):
        if self._prec is None:
            return math.inf
        return self._prec - (self._v if self._v is not None else self._prec)

    def add_bigoh(self, prec):
        """Reduce the known precision to ``prec`` π-units (never increases it)."""
        if prec is None:
            return self
        if self._prec is not None and self._prec <= prec:
            return self
        return PadicNumber._make(self.field, self._d, list(self._X), prec)

    def lift_to(self, prec):
        """Same digits, but claimed known to ``prec`` (used inside Newton steps)."""
        return PadicNumber._make(self.field, self._d, list(self._X), prec)

    # -- coercion ---------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, PadicNumber):
            if other.field is self.field or other.field == self.field:
                return self, other
            return _common(self, other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self, self.field(other)
        return None, None

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        prec = _min_prec(a._prec, b._prec)
        if a._v is None:
            return b.add_bigoh(prec) if prec is not None else b
        if b._v is None:
            return a.add_bigoh(prec) if prec is not None else a
        p = a.field.p
        d = min(a._d, b._d)
        sa, sb = p ** (a._d - d), p ** (b._d - d)
        Z = [x * sa + y * sb for x, y in zip(a._X, b._X)]
        return PadicNumber._make(a.field, d, Z, prec)

    __radd__ = __add__

    def __neg__(self):
        return PadicNumber._raw(self.field, self._d, tuple(-x for x in self._X), self._v,
                                self._prec)._canon()

    def _canon(self):
        if self._prec is None or self._v is None:
            return self
        return PadicNumber._make(self.field, self._d, list(self._X), self._prec)

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if a._v is None or b._v is None:
            if a.is_exact_zero() or b.is_exact_zero():
                return a.field.zero()
            va = a._prec if a._v is None else a._v
            vb = b._prec if b._v is None else b._v
            return a.field.zero(va + vb)
        if a._prec is None and b._prec is None:
            prec = None
        elif a._prec is None:
            prec = a._v + b._prec
        elif b._prec is None:
            prec = b._v + a._prec
        else:
            prec = min(a._v + b._prec, b._v + a._prec)
        X = _vec_mul(a.field, a._X, b._X)
        return PadicNumber._make(a.field, a._d + b._d, X, prec)

    __rmul__ = __mul__

    def inverse(self, prec=None):
        """Multiplicative inverse; relative precision is preserved.

        Exact inputs other than ±p^k are inverted to relative precision
        ``prec`` (default: the field's precision).
        """
        if self._v is None:
            raise DivisionByZero("division by a value that is zero to its precision")
        F = self.field
        e = F.e
        rel = self._prec - self._v if self._prec is not None else (prec or F.prec)
        exact = self._prec is None
        if exact and self._v % e == 0 and all(c == 0 for c in self._X[1:]) and self._X[0] in (1, -1):
            return PadicNumber._raw(F, -self._d, self._X, -self._v, None)
        vx = self._v - e * self._d
        unit = PadicNumber._raw(F, 0, self._X, vx, None)
        shift = 0
        if vx:
            # X = π^vx * U  ->  U = X * π^(e-vx) / p
            unit = unit * F.uniformizer() ** (e - vx)
            unit = PadicNumber._raw(F, 0, unit._X, 0, None) if unit._d == 1 else \
                PadicNumber._make(F, unit._d - 1, list(unit._X), None)
            shift = e - vx
        inv_u = _unit_inverse(unit, rel)
        res = inv_u
        if shift:
            res = res * F.uniformizer() ** shift
            res = PadicNumber._make(F, res._d - 1, list(res._X), None)
        out_prec = rel - self._v
        return PadicNumber._make(F, res._d - self._d, list(res._X), out_prec)

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if a._v is None and a._prec is None:
            if b._v is None:
                raise DivisionByZero("division by zero")
            return a
        if a._prec is None and b._prec is None and b._v is not None:
            # exact quotient of exact values: give it the default relative precision
            # of the numerator
            inv = b.inverse(prec=a.field.prec)
            if a._v is None:
                return a
            res = a * inv
            return res
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return b / a

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparisons ----------------------------------------------------------
    def __eq__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return (a - b).is_zero()

    def equals_exactly(self, other):
        return (self._d, self._X, self._prec) == (other._d, other._X, other._prec)

    # -- residue / structure ----------------------------------------------------
    def reduce(self):
        """Image in the residue field."""
        F = self.field
        if self._v is None:
            if self._prec is not None and self._prec <= 0:
                raise PrecisionLoss("residue unknown at non-positive precision")
            return F.residue.zero
        if self._v < 0:
            raise NegativeValuation(f"valuation {self.valuation()} < 0")
        if self._v > 0:
            return F.residue.zero
        return FqElement(F.residue, tuple(c % F.p for c in self._X[: F.r]))

    def unit_part(self):
        """x / π^v(x) as an element of valuation 0."""
        if self._v is None:
            raise PrecisionLoss("zero has no unit part")
        return self * self.field.uniformizer() ** (-self._v) if self._v else self

    def coords(self):
        """Integer coordinates (length e*r) of the element (requires v >= 0)."""
        if self._v is not None and self._d < 0:
            raise NegativeValuation("coordinates requested for a non-integral value")
        if self._v is None:
            return [0] * self.field.n
        s = self.field.p ** self._d
        return [c * s for c in self._X]

    def __int__(self):
        F = self.field
        if F.n != 1:
            raise TypeError("only elements of Q_p convert to int")
        if self._v is None:
            return 0
        if self._d < 0:
            raise NegativeValuation("not integral")
        return self._X[0] * F.p ** self._d

    def to_fraction(self):
        """Rational representative of an element of Q_p (digits in [0, p^prec))."""
        F = self.field
        if F.n != 1:
            raise TypeError("only elements of Q_p convert to Fraction")
        if self._v is None:
            return Fraction(0)
        return Fraction(self._X[0]) * Fraction(F.p) ** self._d

    def serialize(self):
        """(valuation, unit digits per basis monomial, precision)."""
        v = None if self._v is None else str(self.valuation())
        prec = None if self._prec is None else str(self.precision)
        return {"val": v, "unit": list(self._X), "p_shift": self._d, "prec": prec}

    def __repr__(self):
        F = self.field
        bigoh = "" if self._prec is None else f" + O({F.p}^{_fmt_q(Fraction(self._prec, F.e))})"
        if self._v is None:
            return "0" + bigoh
        if F.n == 1:
            if self._d >= 0:
                val = self._X[0] * F.p ** self._d
                if self._prec is not None and val > (F.p ** (self._prec // F.e)) // 2:
                    val -= F.p ** (self._prec // F.e)
                body = str(val)
            else:
                body = f"{self._X[0]}/{F.p}^{-self._d}"
            return body + bigoh
        scale = "" if self._d == 0 else f"{F.p}^{self._d}*"
        digits = list(self._X)
        if self._prec is not None:
            # centered representatives, one modulus per π-power block
            a, b = divmod(self._prec - self._d * F.e, F.e)
            for idx, x in enumerate(digits):
                mod = F.p ** (a + (idx // F.r < b))
                if x > mod // 2:
                    digits[idx] = x - mod
        return f"{scale}{digits}" + bigoh


def _fmt_q(q):
    return str(q) if q.denominator == 1 else f"({q})"


# ---------------------------------------------------------------------------
# vector helpers

@lru_cache(maxsize=4096)
def _pow(p, k):
    return p**k


def _reduce_vec(X, m, p, e, r):
    a, b = divmod(m, e)
    out = list(X)
    for j in range(e):
        mod = _pow(p, a + (1 if j < b else 0))
        for i in range(r):
            out[j * r + i] %= mod
    return out


def _theta_mul(A, B, f, r):
    if r == 1:
        return [A[0] * B[0]]
    t = [0] * (2 * r - 1)
    for i, x in enumerate(A):
        if x:
            for j, y in enumerate(B):
                if y:
                    t[i + j] += x * y
    for k in range(2 * r - 2, r - 1, -1):
        c = t[k]
        if c:
            base = k - r
            for i in range(r):
                t[base + i] -= c * f[i]
    return t[:r]


def _vec_mul(F, X, Y):
    r, e = F.r, F.e
    if F.n == 1:
        return [X[0] * Y[0]]
    f = F.modulus
    if e == 1:
        return _theta_mul(X, Y, f, r)
    blocks_x = [X[j * r:(j + 1) * r] for j in range(e)]
    blocks_y = [Y[j * r:(j + 1) * r] for j in range(e)]
    prod = [[0] * r for _ in range(2 * e - 1)]
    for i, bx in enumerate(blocks_x):
        if not any(bx):
            continue
        for j, by in enumerate(blocks_y):
            if not any(by):
                continue
            t = _theta_mul(bx, by, f, r)
            acc = prod[i + j]
            for k in range(r):
                acc[k] += t[k]
    g = F.eisenstein
    for k in range(2 * e - 2, e - 1, -1):
        c = prod[k]
        if any(c):
            for j in range(e):
                t = _theta_mul(c, g[j], f, r)
                acc = prod[k - e + j]
                for i in range(r):
                    acc[i] -= t[i]
    out = []
    for j in range(e):
        out.extend(prod[j])
    return out


def _unit_inverse(u, rel):
    """Inverse of a unit to precision rel by Newton iteration."""
    F = u.field
    res = u.reduce()
    y = F.lift_residue(res.inverse())
    k = 1
    while k < rel:
        k = min(2 * k, rel)
        y = y.lift_to(k)
        y = (y * (2 - u.add_bigoh(k) * y)).lift_to(k)
    return y.lift_to(rel)


def _common(a, b):
    Fa, Fb = a.field, b.field
    if Fa.p != Fb.p:
        raise IncompatibleFields(f"{Fa} vs {Fb}")
    if Fa.e == 1 and Fb.e == 1:
        if Fb.r % Fa.r == 0:
            return _embed(a, Fb), b
        if Fa.r % Fb.r == 0:
            return a, _embed(b, Fa)
    elif Fb.e > 1 and Fa.e == 1 and Fa.r == Fb.r and Fa.modulus == Fb.modulus:
        return _embed(a, Fb), b
    elif Fa.e > 1 and Fb.e == 1 and Fa.r == Fb.r and Fa.modulus == Fb.modulus:
        return a, _embed(b, Fa)
    raise IncompatibleFields(f"no embedding relates {Fa} and {Fb}")


def _embed(x, target):
    """Embed x into a field containing its own (along the constructed tower)."""
    src = x.field
    if src == target:
        return PadicNumber._raw(target, x._d, x._X, x._v, x._prec)
    if src.p != target.p:
        raise IncompatibleFields(f"{src} vs {target}")
    if src.e == 1 and target.e > 1 and src.r == target.r and src.modulus == target.modulus:
        X = list(x._X) + [0] * (target.n - src.n)
        if x._v is None:
            return target.zero(None if x._prec is None else x._prec * target.e)
        return PadicNumber._make(target, x._d, X,
                                 None if x._prec is None else x._prec * target.e)
    if src.e != 1 or target.e != 1 or target.r % src.r:
        raise IncompatibleFields(f"no embedding {src} -> {target}")
    if x._v is None:
        return target.zero(x._prec)
    if src.r == 1:
        return PadicNumber._make(target, x._d, [x._X[0]] + [0] * (target.n - 1), x._prec)
    prec = x._prec if x._prec is not None else target.prec + x._v
    img = _theta_image(src, target, max(prec - x._v, 1) + 2)
    acc = target.zero()
    for c in reversed(x._X):
        acc = acc * img + c
    acc = acc * (target.p ** x._d) if x._d >= 0 else acc / target(target.p ** (-x._d))
    return acc.add_bigoh(prec)


def _theta_image(src, target, prec):
    key = ("embed", src.key, target.key)
    cached = target._sigma_cache.get(key)
    if cached is not None and cached.prec_units >= prec:
        return cached.add_bigoh(prec)
    seed = target.lift_residue(src.residue.gen.embed(target.residue))
    root = hensel_root([target(c) for c in src.modulus], seed, prec=prec)
    target._sigma_cache[key] = root
    return root


# ---------------------------------------------------------------------------
# Teichmüller lifts, Hensel roots, Frobenius automorphism

def teichmuller(a, field, prec=None):
    """The unique root of unity (or 0) in ``field`` reducing to ``a``."""
    prec = field.prec if prec is None else prec
    if prec > MAX_PRECISION:
        raise ResourceLimit(f"precision {prec} exceeds cap {MAX_PRECISION}")
    a = field._residue_elem(a)
    if a.is_zero():
        return field.zero()
    if a.is_one():
        return field.one()
    return _teichmuller_cached(field, a.coeffs, prec)


_TEICH = {}


def _teichmuller_cached(field, coeffs, prec):
    key = (field.key, coeffs)
    hit = _TEICH.get(key)
    if hit is not None and hit.prec_units >= prec:
        return hit.add_bigoh(prec)
    Q = field.residue.order
    x = field.lift_residue(FqElement(field.residue, coeffs))
    if hit is not None:
        x = hit
    k = 1 if hit is None else hit.prec_units
    while k < prec:
        k = min(2 * k, prec)
        x = x.lift_to(k)
        xq1 = x ** (Q - 1)
        num = xq1 * x - x
        den = Q * xq1 - 1
        x = (x - num / den).lift_to(k)
    x = x.lift_to(prec)
    _TEICH[key] = x
    return x


def poly_eval(coeffs, x):
    """Horner evaluation of a one-variable polynomial (low-to-high coefficients)."""
    acc = None
    for c in reversed(coeffs):
        acc = c if acc is None else acc * x + c
    if acc is None:
        return 0
    if not isinstance(acc, PadicNumber):
        acc = x.field(acc)
    return acc


def poly_derivative(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def hensel_root(f, x0, prec=None):
    """Newton-lift an approximate root of f (coefficients low-to-high).

    Requires v(f(x0)) > 2 v(f'(x0)); returns the unique root ρ with
    v(ρ - x0) > v(f'(x0)), known to ``prec`` π-units (field default) unless
    the coefficient precision of f limits it further.
    """
    F = x0.field
    W = F.prec if prec is None else prec
    if W > MAX_PRECISION:
        raise ResourceLimit(f"precision {W} exceeds cap {MAX_PRECISION}")
    df = poly_derivative(f)
    x = x0
    fx = poly_eval(f, x)
    dfx = poly_eval(df, x)
    if dfx.is_zero():
        raise HenselPreconditionFailed(fx.valuation_bound(), None)
    vdf = dfx._v
    if fx.is_exact_zero():
        return x0
    vf = fx._v if fx._v is not None else fx._prec
    if vf is None or vf <= 2 * vdf:
        raise HenselPreconditionFailed(Fraction(vf, F.e) if vf is not None else None,
                                       Fraction(vdf, F.e))
    work = W + 2 * vdf + 1
    x = x.lift_to(work)
    for _ in range(4 * (work.bit_length() + 2)):
        fx = poly_eval(f, x)
        if fx.is_exact_zero():
            return x if prec is None and x0.is_exact() else x.add_bigoh(W)
        if fx._v is None or fx._v >= work:
            break
        dfx = poly_eval(df, x)
        x = (x - fx / dfx).lift_to(work)
    else:  # pragma: no cover - quadratic convergence makes this unreachable
        raise PrecisionLoss("Newton iteration did not settle")
    known = fx._prec if fx._prec is not None else work
    out = min(W, known - vdf)
    if out <= vdf:
        raise PrecisionLoss("coefficient precision too low to isolate the root")
    return x.add_bigoh(out)


def sigma(a, k=1):
    """The automorphism of an unramified field lifting x -> x^(p^k) on residues."""
    F = a.field
    if F.e != 1:
        raise RamifiedFieldUnsupported("σ is only implemented on unramified fields")
    if k < 0:
        raise ValueError("k must be >= 0")
    k %= F.r
    if k == 0 or a._v is None:
        return a
    if a._prec is None and not any(a._X[1:]):
        return a
    prec = a._prec if a._prec is not None else F.prec + a._v
    rel = prec - a._v
    th = _sigma_theta(F, k, rel + 1)
    acc = F.zero()
    for c in reversed(a._X):
        acc = acc * th + c
    if a._d >= 0:
        acc = acc * F.p ** a._d
    else:
        acc = acc * F(Fraction(1, F.p ** (-a._d)))
    return acc.add_bigoh(prec)


def _sigma_theta(F, k, prec):
    key = ("sigma", k)
    hit = F._sigma_cache.get(key)
    if hit is not None and hit.prec_units >= prec:
        return hit.add_bigoh(prec)
    seed = F.lift_residue(F.residue.gen.frobenius(k))
    root = hensel_root([F(c) for c in F.modulus], seed, prec=max(prec, F.prec))
    F._sigma_cache[key] = root
    return root.add_bigoh(prec)


def teichmuller_digits(x, count):
    """Digits c_0..c_{count-1} in the residue field with x = Σ [c_k] p^k.

    Requires an unramified field and v(x) >= 0; asking for digits beyond the
    known precision raises PrecisionLoss.
    """
    F = x.field
    if F.e != 1:
        raise RamifiedFieldUnsupported("Teichmüller digit expansion needs an unramified field")
    if x._prec is not None and x._prec < count:
        raise PrecisionLoss(f"{count} digits requested, only {x._prec} known")
    digits = []
    cur = x.add_bigoh(count)
    for k in range(count):
        c = cur.reduce()
        digits.append(c)
        if k + 1 < count:
            cur = _div_p(cur - teichmuller(c, F, prec=count))
    return digits


def _div_p(x):
    """x / p for x of positive valuation in an unramified field."""
    F = x.field
    prec = None if x._prec is None else x._prec - F.e
    if x._v is None:
        return F.zero(prec)
    return PadicNumber._make(F, x._d - 1, list(x._X), prec)
