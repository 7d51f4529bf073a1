"""Finite fields F_{p^r} arranged as a compatible tower approximating F̄_p.

Fields built from the bundled table use Conway polynomials, so the
embedding F_{p^d} -> F_{p^n} sending the class of x to x^((p^n-1)/(p^d-1))
is canonical and composites of embeddings commute.  Fields with a
user-supplied modulus are embedded by root-finding, taking the root with
the lexicographically least coordinate vector.
"""

from __future__ import annotations

import itertools
import math
import random as _random
from functools import lru_cache

from .errors import DivisionByZero, IncompatibleFields, ResourceLimit

# Conway polynomials, coefficients low-to-high including the leading 1.
_CONWAY_SPARSE = {
    (2, 1): {1: 1, 0: 1},
    (2, 2): {2: 1, 1: 1, 0: 1},
    (2, 3): {3: 1, 1: 1, 0: 1},
    (2, 4): {4: 1, 1: 1, 0: 1},
    (2, 5): {5: 1, 2: 1, 0: 1},
    (2, 6): {6: 1, 4: 1, 3: 1, 1: 1, 0: 1},
    (2, 7): {7: 1, 1: 1, 0: 1},
    (2, 8): {8: 1, 4: 1, 3: 1, 2: 1, 0: 1},
    (2, 9): {9: 1, 4: 1, 0: 1},
    (2, 10): {10: 1, 6: 1, 5: 1, 3: 1, 2: 1, 1: 1, 0: 1},
    (2, 11): {11: 1, 2: 1, 0: 1},
    (2, 12): {12: 1, 7: 1, 6: 1, 5: 1, 3: 1, 1: 1, 0: 1},
    (3, 1): {1: 1, 0: 1},
    (3, 2): {2: 1, 1: 2, 0: 2},
    (3, 3): {3: 1, 1: 2, 0: 1},
    (3, 4): {4: 1, 3: 2, 0: 2},
    (3, 5): {5: 1, 1: 2, 0: 1},
    (3, 6): {6: 1, 4: 2, 2: 1, 1: 2, 0: 2},
    (3, 7): {7: 1, 2: 2, 0: 1},
    (3, 8): {8: 1, 5: 2, 4: 1, 2: 2, 1: 2, 0: 2},
    (3, 9): {9: 1, 3: 2, 2: 2, 1: 1, 0: 1},
    (3, 10): {10: 1, 6: 2, 5: 2, 4: 2, 1: 1, 0: 2},
    (3, 11): {11: 1, 2: 2, 0: 1},
    (3, 12): {12: 1, 6: 1, 5: 1, 4: 1, 2: 1, 0: 2},
    (5, 1): {1: 1, 0: 3},
    (5, 2): {2: 1, 1: 4, 0: 2},
    (5, 3): {3: 1, 1: 3, 0: 3},
    (5, 4): {4: 1, 2: 4, 1: 4, 0: 2},
    (5, 5): {5: 1, 1: 4, 0: 3},
    (5, 6): {6: 1, 4: 1, 3: 4, 2: 1, 0: 2},
    (5, 7): {7: 1, 1: 3, 0: 3},
    (5, 8): {8: 1, 4: 1, 2: 3, 1: 4, 0: 2},
    (5, 9): {9: 1, 3: 2, 1: 1, 0: 3},
    (5, 10): {10: 1, 5: 3, 4: 3, 3: 2, 2: 4, 1: 1, 0: 2},
    (5, 11): {11: 1, 1: 3, 0: 3},
    (5, 12): {12: 1, 7: 1, 6: 1, 4: 4, 3: 4, 2: 3, 1: 2, 0: 2},
}

CONWAY = {
    key: tuple(sparse.get(i, 0) for i in range(key[1] + 1))
    for key, sparse in _CONWAY_SPARSE.items()
}

#: Largest field order any enumeration is allowed to touch.
DEFAULT_ENUMERATION_CAP = 10**6


# ---------------------------------------------------------------------------
# dense polynomials over F_p (low-to-high int lists); used for the
# irreducibility test only

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = list(a)
    inv = pow(m[-1], -1, p)
    dm = len(m) - 1
    for k in range(len(a) - 1, dm - 1, -1):
        c = a[k] * inv % p
        if c:
            for i in range(dm + 1):
                a[k - dm + i] = (a[k - dm + i] - c * m[i]) % p
    return _ptrim(a[:dm] if len(a) > dm else a)


def _pmulmod(a, b, m, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(out, m, p)


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _least_primitive_root(p):
    factors = {q for q in range(2, p) if (p - 1) % q == 0
               and all(q % k for k in range(2, int(q**0.5) + 1))}
    return next(g for g in range(1, p)
                if p == 2 or all(pow(g, (p - 1) // q, p) != 1 for q in factors))


def is_irreducible_mod_p(f, p):
    """Rabin-style test: f has no factor of degree <= deg(f)/2."""
    f = _ptrim([c % p for c in f])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    h = x
    for _ in range(n // 2):
        # h <- h^p mod f
        acc = [1]
        base, e = h, p
        while e:
            if e & 1:
                acc = _pmulmod(acc, base, f, p)
            base = _pmulmod(base, base, f, p)
            e >>= 1
        h = acc
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(f, _ptrim(diff), p)
        if len(g) > 1:
            return False
    return True


# ---------------------------------------------------------------------------

class FqField:
    """The finite field F_p[x]/(modulus) of order p^r."""

    __slots__ = ("p", "r", "modulus", "order", "is_table", "_red", "_frob",
                 "zero", "one", "gen", "__weakref__")

    def __init__(self, p, r, modulus=None):
        if r < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None and r == 1 and (p, r) not in CONWAY:
            modulus = (-_least_primitive_root(p) % p, 1)
        if modulus is None:
            if (p, r) not in CONWAY:
                raise ValueError(
                    f"no table modulus for p={p}, r={r}; supply one explicitly")
            modulus = CONWAY[(p, r)]
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != r + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree r (low-to-high coefficients)")
        if not is_irreducible_mod_p(modulus, p):
            raise ValueError(f"modulus {list(modulus)} is reducible over F_{p}")
        self.p = p
        self.r = r
        self.modulus = modulus
        self.order = p**r
        self.is_table = CONWAY.get((p, r)) == modulus
        # rows: x^k mod modulus for k = r .. 2r-2
        red = []
        cur = [(-c) % p for c in modulus[:r]]
        for _ in range(max(r - 1, 1)):
            red.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(c - top * m) % p for c, m in zip(cur, modulus[:r])]
        self._red = red
        self.zero = FqElement(self, (0,) * r)
        self.one = FqElement(self, (1,) + (0,) * (r - 1))
        self.gen = FqElement(self, (0, 1) + (0,) * (r - 2)) if r > 1 else \
            FqElement(self, ((-modulus[0]) % p,))
        # matrix of x -> x^p on the polynomial basis
        frob = []
        xp = self.gen ** p if r > 1 else self.one
        acc = self.one
        for _ in range(r):
            frob.append(acc.coeffs)
            acc = acc * xp
        self._frob = frob

    # -- construction -----------------------------------------------------
    def __call__(self, value):
        if isinstance(value, FqElement):
            return value.embed(self)
        if isinstance(value, int):
            return FqElement(self, (value % self.p,) + (0,) * (self.r - 1))
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) != self.r:
            raise ValueError(f"expected {self.r} coordinates, got {len(coeffs)}")
        return FqElement(self, coeffs)

    def from_index(self, n):
        """Element whose base-p digits (low first) are its coordinates."""
        digits = []
        for _ in range(self.r):
            n, d = divmod(n, self.p)
            digits.append(d)
        return FqElement(self, tuple(digits))

    def elements(self, cap=DEFAULT_ENUMERATION_CAP):
        if self.order > cap:
            raise ResourceLimit(f"|{self}| = {self.order} exceeds enumeration cap {cap}")
        for n in range(self.order):
            yield self.from_index(n)

    def random(self, rng=None):
        rng = rng or _random
        return FqElement(self, tuple(rng.randrange(self.p) for _ in range(self.r)))

    def random_nonzero(self, rng=None):
        while True:
            a = self.random(rng)
            if not a.is_zero():
                return a

    def prime_subfield(self):
        return GF(self.p, 1)

    # -- internal arithmetic ---------------------------------------------
    def _mul(self, a, b):
        p, r = self.p, self.r
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:r]
        for k in range(r, 2 * r - 1):
            c = prod[k] % p
            if c:
                row = self._red[k - r]
                for i in range(r):
                    out[i] += c * row[i]
        return tuple(c % p for c in out)

    def _apply_frob(self, coeffs):
        p, r = self.p, self.r
        out = [0] * r
        for a, row in zip(coeffs, self._frob):
            if a:
                for i in range(r):
                    out[i] += a * row[i]
        return tuple(c % p for c in out)

    def __repr__(self):
        tag = "" if self.is_table else f", modulus={list(self.modulus)}"
        return f"GF({self.p}^{self.r}{tag})"

    def __reduce__(self):
        return (GF, (self.p, self.r, None if self.is_table else self.modulus))


_FIELDS = {}


def GF(p, r=1, modulus=None):
    """Cached constructor: equal parameters give the identical field object."""
    key = (p, r, tuple(modulus) if modulus is not None else None)
    field = _FIELDS.get(key)
    if field is None:
        field = FqField(p, r, modulus)
        if field.is_table:
            key = (p, r, None)
            field = _FIELDS.setdefault(key, field)
        _FIELDS[(p, r, field.modulus)] = field
    return field


class FqElement:
    """An element of a finite field in polynomial-basis coordinates."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    # -- coercion ----------------------------------------------------------
    def _coerce_pair(self, other):
        if isinstance(other, FqElement):
            if other.field is self.field:
                return self, other
            if other.field.p != self.field.p:
                raise IncompatibleFields(f"{self.field} vs {other.field}")
            common = common_field(self.field, other.field)
            return self.embed(common), other.embed(common)
        if isinstance(other, int):
            return self, self.field(other)
        return NotImplemented, NotImplemented

    def embed(self, target):
        if target is self.field:
            return self
        if target.p != self.field.p or target.r % self.field.r:
            raise IncompatibleFields(f"no embedding {self.field} -> {target}")
        images = _embedding_images(self.field, target)
        p, r = target.p, target.r
        out = [0] * r
        for a, img in zip(self.coeffs, images):
            if a:
                for i in range(r):
                    out[i] += a * img[i]
        return FqElement(target, tuple(c % p for c in out))

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        a, b = self._coerce_pair(other)
        if a is NotImplemented:
            return NotImplemented
        p = a.field.p
        return FqElement(a.field, tuple((x + y) % p for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FqElement(self.field, tuple((-x) % p for x in self.coeffs))

    def __sub__(self, other):
        a, b = self._coerce_pair(other)
        if a is NotImplemented:
            return NotImplemented
        p = a.field.p
        return FqElement(a.field, tuple((x - y) % p for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce_pair(other)
        if a is NotImplemented:
            return NotImplemented
        return FqElement(a.field, a.field._mul(a.coeffs, b.coeffs))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero(f"inverse of zero in {self.field}")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        a, b = self._coerce_pair(other)
        if a is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def frobenius(self, s=1):
        """a^(p^s); negative s applies the inverse Frobenius."""
        k = s % self.field.r
        coeffs = self.coeffs
        for _ in range(k):
            coeffs = self.field._apply_frob(coeffs)
        return FqElement(self.field, coeffs)

    # -- predicates / conversion ---------------------------------------------
    def is_zero(self):
        return not any(self.coeffs)

    def is_one(self):
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def __bool__(self):
        return not self.is_zero()

    def index(self):
        n = 0
        for c in reversed(self.coeffs):
            n = n * self.field.p + c
        return n

    def to_list(self):
        return list(self.coeffs)

    def sort_key(self):
        return self.coeffs

    def minimal_polynomial(self):
        """Coefficients (low-to-high, in F_p) of the minimal polynomial over F_p."""
        conj = [self]
        nxt = self.frobenius(1)
        while nxt != self:
            conj.append(nxt)
            nxt = nxt.frobenius(1)
        poly = [self.field.one]
        for c in conj:
            shifted = [self.field.zero] + poly
            for i in range(len(poly)):
                shifted[i] = shifted[i] - c * poly[i]
            poly = shifted
        return tuple(c.coeffs[0] for c in poly)

    def __eq__(self, other):
        if isinstance(other, FqElement):
            if other.field is self.field:
                return self.coeffs == other.coeffs
            if other.field.p != self.field.p:
                return False
            a, b = self._coerce_pair(other)
            return a.coeffs == b.coeffs
        if isinstance(other, int):
            return self.coeffs == self.field(other).coeffs
        return NotImplemented

    def __hash__(self):
        # field independent: conjugates collide, distinct embeddings agree
        if self._hash is None:
            self._hash = hash((self.field.p, self.minimal_polynomial()))
        return self._hash

    def __repr__(self):
        return format_fq(self)

    def __reduce__(self):
        return (FqElement, (self.field, self.coeffs))


def format_fq(a, var="a"):
    """Human readable form; elements of F_p print as integers."""
    if all(c == 0 for c in a.coeffs[1:]):
        return str(a.coeffs[0])
    parts = []
    for i, c in enumerate(a.coeffs):
        if not c:
            continue
        mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if i == 0:
            parts.append(str(c))
        elif c == 1:
            parts.append(mon)
        else:
            parts.append(f"{c}*{mon}")
    return "(" + " + ".join(parts) + ")"


def common_field(f1, f2):
    if f1 is f2:
        return f1
    if f1.p != f2.p:
        raise IncompatibleFields(f"{f1} vs {f2}")
    if f2.r % f1.r == 0:
        return f2
    if f1.r % f2.r == 0:
        return f1
    return GF(f1.p, f1.r * f2.r // math.gcd(f1.r, f2.r))


def frobenius_s(a, s, inverse=False):
    if s < 0:
        raise ValueError("s must be >= 0")
    return a.frobenius(-s if inverse else s)


# ---------------------------------------------------------------------------
# embeddings

@lru_cache(maxsize=None)
def _embedding_images(src, dst):
    """Images in ``dst`` of the basis monomials 1, x, ..., x^(r-1) of ``src``."""
    if src.is_table and dst.is_table:
        gamma = dst.gen ** ((dst.order - 1) // (src.order - 1)) if src.r > 1 else \
            dst(src.gen.coeffs[0])
    else:
        roots = _roots_in(src.modulus, dst)
        if not roots:
            raise IncompatibleFields(f"modulus of {src} has no root in {dst}")
        gamma = min(roots, key=lambda x: x.coeffs)
    images = []
    acc = dst.one
    for _ in range(src.r):
        images.append(acc.coeffs)
        acc = acc * gamma
    return tuple(images)


def _roots_in(poly_fp, field):
    """All roots in ``field`` of a polynomial with F_p coefficients."""
    f = [field(c) for c in poly_fp]
    roots = []
    _split_roots(_fq_monic(f), field, roots, 0)
    return roots


# dense polynomials over F_q: lists of FqElement, low-to-high

def _fq_trim(a):
    while a and a[-1].is_zero():
        a.pop()
    return a


def _fq_monic(a):
    a = _fq_trim(list(a))
    inv = a[-1].inverse()
    return [c * inv for c in a]


def _fq_mod(a, m):
    a = list(a)
    dm = len(m) - 1
    lead_inv = m[-1].inverse()
    for k in range(len(a) - 1, dm - 1, -1):
        c = a[k] * lead_inv
        if not c.is_zero():
            for i in range(dm + 1):
                a[k - dm + i] = a[k - dm + i] - c * m[i]
    return _fq_trim(a[:dm] if len(a) > dm else a)


def _fq_mulmod(a, b, m, field):
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x.is_zero():
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return _fq_mod(out, m)


def _fq_powmod(base, e, m, field):
    result = [field.one]
    while e:
        if e & 1:
            result = _fq_mulmod(result, base, m, field)
        base = _fq_mulmod(base, base, m, field)
        e >>= 1
    return result


def _fq_gcd(a, b):
    a, b = _fq_trim(list(a)), _fq_trim(list(b))
    while b:
        a, b = b, _fq_mod(a, b)
    return _fq_monic(a) if a else a


def _split_roots(f, field, out, depth):
    """Equal-degree (degree 1) splitting; deterministic choice of shifts."""
    deg = len(f) - 1
    if deg == 0:
        return
    if deg == 1:
        out.append(-f[0])
        return
    x = [field.zero, field.one]
    # keep only the part of f that splits into distinct linear factors
    xq = _fq_powmod(x, field.order, f, field)
    diff = list(xq) + [field.zero] * max(0, 2 - len(xq))
    diff[1] = diff[1] - field.one
    g = _fq_gcd(f, _fq_trim(diff))
    if len(g) - 1 < deg:
        f = g
        deg = len(f) - 1
        if deg <= 1:
            if deg == 1:
                out.append(-f[0])
            return
    for n in range(1, field.order):
        a = field.from_index(n)
        if field.p == 2:
            # trace polynomial of a*x
            t = [field.zero, a]
            acc = _fq_mod(t, f)
            term = acc
            for _ in range(field.r - 1):
                term = _fq_mulmod(term, term, f, field)
                acc = _fq_add(acc, term)
            h = acc
        else:
            shifted = [a, field.one]
            h = _fq_powmod(shifted, (field.order - 1) // 2, f, field)
            h = list(h) + [field.zero] * max(0, 1 - len(h))
            h[0] = h[0] - field.one
            h = _fq_trim(h)
        g = _fq_gcd(f, h) if h else []
        if g and 0 < len(g) - 1 < deg:
            _split_roots(g, field, out, depth + 1)
            quotient = _fq_divexact(f, g, field)
            _split_roots(quotient, field, out, depth + 1)
            return
    raise ArithmeticError("root splitting failed")  # pragma: no cover


def _fq_add(a, b):
    n = max(len(a), len(b))
    zero = (a or b)[0].field.zero
    out = [(a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero) for i in range(n)]
    return _fq_trim(out)


def _fq_divexact(a, b, field):
    a = list(a)
    db = len(b) - 1
    q = [field.zero] * (len(a) - db)
    inv = b[-1].inverse()
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] * inv
        q[k - db] = c
        if not c.is_zero():
            for i in range(db + 1):
                a[k - db + i] = a[k - db + i] - c * b[i]
    return _fq_monic(q)


# ---------------------------------------------------------------------------
# projective enumeration

def enumerate_proj_points(field, N, cap=DEFAULT_ENUMERATION_CAP):
    """All points of P^N(field) normalized with first nonzero coordinate 1.

    Points are listed by pivot position, then by the index order of the
    remaining coordinates.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    q = field.order
    count = (q ** (N + 1) - 1) // (q - 1)
    if count > cap:
        raise ResourceLimit(f"|P^{N}({field})| = {count} exceeds cap {cap}")
    elems = list(field.elements(cap))
    zero, one = field.zero, field.one
    points = []
    for pivot in range(N + 1):
        for tail in itertools.product(elems, repeat=N - pivot):
            points.append((zero,) * pivot + (one,) + tail)
    return points


def proj_point_count(q, N):
    return (q ** (N + 1) - 1) // (q - 1)


def normalize_residue_point(coords):
    """Scale so the first nonzero coordinate is 1."""
    coords = tuple(coords)
    for c in coords:
        if not c.is_zero():
            inv = c.inverse()
            return tuple(x * inv for x in coords)
    raise ValueError("all coordinates are zero")


def field_of_definition(point, s=1):
    """Least m >= 1 with the coordinate-wise p^(s*m) power fixing the point."""
    point = normalize_residue_point(point)
    m = 1
    while True:
        if all(c.frobenius(s * m) == c for c in point):
            return m
        m += 1


def residue_point_field(point):
    """Common field of the coordinates of a residue point."""
    field = point[0].field
    for c in point[1:]:
        field = common_field(field, c.field)
    return field


def _solve_fp(columns, rhs, p):
    """Solve Σ x_i columns[i] = rhs over F_p; unique solution or None."""
    n = len(columns)
    rows = len(rhs)
    M = [[columns[c][r] % p for c in range(n)] + [rhs[r] % p] for r in range(rows)]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, rows) if M[r][col]), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = pow(M[row][col], -1, p)
        M[row] = [x * inv % p for x in M[row]]
        for r in range(rows):
            if r != row and M[r][col]:
                f = M[r][col]
                M[r] = [(a - f * b) % p for a, b in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
    if any(M[r][n] for r in range(row, rows)):
        return None
    x = [0] * n
    for r, col in enumerate(pivots):
        x[col] = M[r][n]
    return x


def coerce_to(a, target):
    """Move a into ``target``, descending to a subfield first when needed.

    Raises IncompatibleFields when a does not lie in ``target``.
    """
    if a.field is target:
        return a
    if target.r % a.field.r == 0:
        return a.embed(target)
    g = math.gcd(a.field.r, target.r)
    sub = GF(a.field.p, g) if target.is_table or g == 1 else target
    images = _embedding_images(sub, a.field)
    x = _solve_fp(images, a.coeffs, a.field.p)
    if x is None:
        raise IncompatibleFields(f"{a} does not lie in {target}")
    return FqElement(sub, tuple(x)).embed(target)
