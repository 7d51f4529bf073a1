"""Normalized projective points, reduction, varieties and distances."""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import AllZero, IncompatibleFields, PrecisionLoss, ZeroPolynomial
from .local import PadicNumber
from .norms import Norm
from .poly import evaluate, gauss_normalize, parse_poly
from .residue import normalize_residue_point
from .scalars import valuation_bound
from .tilt import TiltElement


def _precision_of(c):
    if isinstance(c, PadicNumber):
        return c.precision
    if isinstance(c, TiltElement):
        return None if c.cutoff == math.inf else c.cutoff
    return None


def _min_opt(values):
    known = [v for v in values if v is not None]
    return min(known) if known else None


class ProjPoint:
    """A point of P^N with max coordinate norm 1 and its first max-norm coordinate equal to 1."""

    __slots__ = ("coords", "pivot")

    __hash__ = None

    def __init__(self, coords, pivot):
        self.coords = tuple(coords)
        self.pivot = pivot

    @property
    def N(self):
        return len(self.coords) - 1

    @property
    def field(self):
        c = self.coords[0]
        return c.field if isinstance(c, PadicNumber) else None

    @property
    def p(self):
        c = self.coords[0]
        return c.field.p if isinstance(c, PadicNumber) else c.p

    def precision(self):
        """Smallest absolute precision among the coordinates (None if exact)."""
        return _min_opt(_precision_of(c) for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, ProjPoint) or len(other.coords) != len(self.coords):
            return NotImplemented
        if other.pivot != self.pivot:
            return False
        return all(a == b for a, b in zip(self.coords, other.coords))

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self):
        return len(self.coords)

    def __repr__(self):
        return "[" + " : ".join(str(c).split(";")[0] for c in self.coords) + "]"

    def add_bigoh(self, prec_units):
        return ProjPoint([c.add_bigoh(prec_units) for c in self.coords], self.pivot)

    def serialize(self):
        out = []
        for c in self.coords:
            out.append(c.serialize() if hasattr(c, "serialize") else str(c))
        return out


def normalize_point(coords, field=None):
    """Canonical representative of [x_0 : ... : x_N].

    ``field`` coerces int/Fraction/θ-list coordinates into a LocalField.
    """
    coords = list(coords)
    if len(coords) < 2:
        raise ValueError("a projective point needs at least two coordinates")
    if field is not None:
        coords = [field(c) for c in coords]
    else:
        fields = {type(c) for c in coords}
        if PadicNumber in fields:
            F = next(c.field for c in coords if isinstance(c, PadicNumber))
            coords = [c if isinstance(c, PadicNumber) else F(c) for c in coords]
        elif TiltElement in fields:
            p = next(c.p for c in coords if isinstance(c, TiltElement))
            coords = [c if isinstance(c, TiltElement) else TiltElement(p)._coerce(c)
                      for c in coords]
        else:
            raise IncompatibleFields("pass field= to normalize rational coordinates")
    p = coords[0].field.p if isinstance(coords[0], PadicNumber) else coords[0].p
    vals = [valuation_bound(c, p) for c in coords]
    vmin = min(vals)
    if vmin == math.inf:
        raise AllZero("all coordinates are zero")
    pivot = vals.index(vmin)
    if coords[pivot].is_zero():
        if all(c.is_zero() for c in coords):
            raise AllZero("all coordinates are zero to their precision")
        raise PrecisionLoss("the maximal coordinate cannot be certified")
    piv = coords[pivot]
    inv = piv.inverse()
    out = []
    for i, c in enumerate(coords):
        if i == pivot:
            out.append(_one_like(piv))
        else:
            out.append(c * inv)
    return ProjPoint(out, pivot)


def _one_like(c):
    if isinstance(c, PadicNumber):
        return c.field.one()
    return TiltElement(c.p, [(0, 1)])


def reduction_map(x):
    """[x_0 : ... : x_N] -> [x̄_0 : ... : x̄_N] with first nonzero coordinate 1."""
    if not isinstance(x, ProjPoint):
        raise TypeError("reduction_map expects a ProjPoint")
    return normalize_residue_point(tuple(c.reduce() for c in x.coords))


class Variety:
    """A closed subvariety of P^N given by Gauss-norm-1 homogeneous generators."""

    def __init__(self, generators, N, p):
        gens = []
        for H in generators:
            if isinstance(H, str):
                H = parse_poly(H, N + 1)
            if H.nvars != N + 1:
                raise ValueError(f"generator {H} is not in {N + 1} variables")
            if H.is_zero():
                raise ZeroPolynomial("zero generator")
            gens.append(gauss_normalize(H, p))
        if not gens:
            raise ValueError("a variety needs at least one generator")
        self.generators = gens
        self.N = N
        self.p = p

    @classmethod
    def parse(cls, strings, N, p, constants=None):
        return cls([parse_poly(s, N + 1, constants) for s in strings], N, p)

    def __repr__(self):
        return "V(" + ", ".join(str(g) for g in self.generators) + ")"


class Distance:
    """d(y, V) = max_i |H_i(y)| together with how it was certified."""

    def __init__(self, p, valuation, member, threshold, certified, values):
        self.p = p
        self.valuation = valuation  # inf when every value is zero to the threshold
        self.member = member
        self.threshold = threshold
        self.certified = certified
        self.values = values

    @property
    def norm(self):
        return Norm(self.p, self.valuation)

    def __repr__(self):
        tag = "member" if self.member else "nonmember"
        return f"Distance({self.norm}, {tag}, threshold={self.threshold})"


def distance_to_variety(y, V, threshold=None):
    """d(y, V) with membership decided at ``threshold``.

    A generator value counts as zero when its valuation (or, for a value that
    is zero to its precision, that precision) is at least the threshold.
    The default threshold is the working precision minus two π-digits.
    """
    p = V.p
    values = [evaluate(H, y.coords) for H in V.generators]
    precs = [_precision_of(v) for v in values]
    certified = _min_opt(precs)
    if threshold is None:
        base = _min_opt([y.precision(), certified])
        if base is None:
            threshold = math.inf
        else:
            e = y.field.e if y.field is not None else 1
            threshold = base - Fraction(2, e)
    threshold = threshold if threshold == math.inf else Fraction(threshold)
    vmin = math.inf
    for v in values:
        if isinstance(v, (int, Fraction)):
            vb = math.inf if v == 0 else valuation_bound(v, p)
            zero_at_prec = False
        else:
            vb = valuation_bound(v, p)
            zero_at_prec = v.is_zero()
        if vb >= threshold:
            continue
        if zero_at_prec:
            raise PrecisionLoss(
                f"generator value is zero only to precision {vb}, below threshold {threshold}")
        vmin = min(vmin, vb)
    return Distance(p, vmin, vmin == math.inf, threshold, certified, values)


def residue_distance(y_bar, V_bar):
    """Trivial-norm distance for residue points: 0 on the variety, 1 off it."""
    for H in V_bar:
        if not _residue_eval(H, y_bar).is_zero():
            return 1
    return 0


def _residue_eval(H, pt):
    v = evaluate(H, tuple(pt))
    if isinstance(v, int):
        return pt[0].field(v)
    return v
