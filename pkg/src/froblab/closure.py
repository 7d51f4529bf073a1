"""Bounded-degree vanishing ideals of finite point sets over finite fields.

Everything here is exact linear algebra over F_{p^L}: the ideal of a point
set in degree <= d is the kernel of the evaluation matrix on monomials,
kept in reduced row echelon form with graded-lex pivots.
"""

from __future__ import annotations

import itertools
from math import comb

from .errors import ResourceLimit
from .poly import Poly, format_poly, grlex_key, sigma_twist
from .residue import (GF, coerce_to, common_field, field_of_definition,
                      normalize_residue_point)

DEFAULT_MONOMIAL_CAP = 5000


def monomials_upto(nvars, d):
    """All exponent tuples of total degree <= d, in decreasing graded-lex order."""
    out = []
    for deg in range(d + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), deg):
            mono = [0] * nvars
            for v in combo:
                mono[v] += 1
            out.append(tuple(mono))
    return sorted(set(out), key=grlex_key, reverse=True)


def rref(rows, field):
    """Reduced row echelon form over ``field``; returns (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    lead = 0
    for col in range(ncols):
        piv = next((i for i in range(lead, len(rows)) if not rows[i][col].is_zero()), None)
        if piv is None:
            continue
        rows[lead], rows[piv] = rows[piv], rows[lead]
        inv = rows[lead][col].inverse()
        rows[lead] = [x * inv for x in rows[lead]]
        for i in range(len(rows)):
            if i != lead and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[lead])]
        pivots.append(col)
        lead += 1
        if lead == len(rows):
            break
    return rows[:lead], pivots


class IdealBasis:
    """Echelon basis of the degree <= d part of a vanishing ideal."""

    def __init__(self, field, nvars, degree, monomials, vectors, rank):
        self.field = field
        self.nvars = nvars
        self.degree = degree
        self.monomials = monomials
        self.vectors = vectors  # echelon rows over the monomial list
        self.rank = rank  # rank of the evaluation matrix

    @property
    def polys(self):
        return [Poly(self.nvars, {m: c for m, c in zip(self.monomials, v) if not c.is_zero()})
                for v in self.vectors]

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.polys)

    def dimension(self):
        return len(self.vectors)

    def same_span(self, other):
        if self.monomials != other.monomials or len(self) != len(other):
            return False
        return all(_reduces_to_zero(v, self) for v in other.vectors)

    def contains(self, f):
        vec = [f.terms.get(m, self.field.zero) for m in self.monomials]
        if any(m not in self.monomials for m in f.terms):
            return False
        vec = [coerce_to(c, self.field) if not isinstance(c, int) else self.field(c) for c in vec]
        return _reduces_to_zero(vec, self)

    def serialize(self):
        return {"field": f"GF({self.field.p}^{self.field.r})", "degree": self.degree,
                "basis": [format_poly(f) for f in self.polys]}

    def __repr__(self):
        body = ", ".join(format_poly(f) for f in self.polys)
        return f"IdealBasis(GF({self.field.p}^{self.field.r}), d={self.degree}: {{{body}}})"


def _reduces_to_zero(vec, basis):
    """Is vec in the row space of the echelon basis?"""
    vec = list(vec)
    for row in basis.vectors:
        col = next(i for i, c in enumerate(row) if not c.is_zero())
        c = vec[col]
        if not c.is_zero():
            vec = [a - c * b for a, b in zip(vec, row)]
    return all(c.is_zero() for c in vec)


def vanishing_ideal_upto_degree(points, d, field=None, cap=DEFAULT_MONOMIAL_CAP):
    """Basis of {f : deg f <= d, f(P) = 0 for all P} over ``field``.

    ``points`` are tuples of FqElements (affine coordinates); ``field``
    defaults to the smallest table field containing all coordinates.
    """
    points = [tuple(P) for P in points]
    if not points:
        raise ValueError("need at least one point")
    nvars = len(points[0])
    if comb(nvars + d, d) > cap:
        raise ResourceLimit(f"{comb(nvars + d, d)} monomials exceed cap {cap}")
    if field is None:
        field = points[0][0].field
        for P in points:
            for c in P:
                field = common_field(field, c.field)
    pts = [[coerce_to(c, field) for c in P] for P in points]
    monos = monomials_upto(nvars, d)
    matrix = []
    for P in pts:
        row = []
        for m in monos:
            val = field.one
            for c, k in zip(P, m):
                if k:
                    val = val * c**k
            row.append(val)
        matrix.append(row)
    echelon, pivots = rref(matrix, field)
    rank = len(pivots)
    free = [c for c in range(len(monos)) if c not in pivots]
    kernel = []
    for fcol in free:
        vec = [field.zero] * len(monos)
        vec[fcol] = field.one
        for r, pcol in enumerate(pivots):
            vec[pcol] = -echelon[r][fcol]
        kernel.append(vec)
    basis_rows, _ = rref(kernel, field) if kernel else ([], [])
    return IdealBasis(field, nvars, d, monos, basis_rows, rank)


class StabilityReport:
    def __init__(self, stable, r, bound):
        self.stable = stable
        self.r = r
        self.bound = bound

    def __bool__(self):
        return self.stable

    def __repr__(self):
        return f"StabilityReport(stable={self.stable}, r={self.r})"


def twist_basis(I, k):
    """Coefficient-wise Frobenius a -> a^(p^k) applied to every basis vector."""
    vecs = [[c.frobenius(k) for c in v] for v in I.vectors]
    rows, _ = rref(vecs, I.field) if vecs else ([], [])
    return IdealBasis(I.field, I.nvars, I.degree, I.monomials, rows, I.rank)


def frobenius_stability_check(I, s=1, bound=None):
    """Least r <= bound with span(f^(σ^r)) = span(I), σ twisting by q = p^s.

    ``stable`` reports stability at r = 1; ``r`` is the least stable
    exponent found (None if none up to the bound).
    """
    bound = I.field.r if bound is None else bound
    if not I.vectors:
        return StabilityReport(True, 1, bound)
    first = None
    for r in range(1, bound + 1):
        if twist_basis(I, s * r).same_span(I):
            first = r
            break
    return StabilityReport(first == 1, first, bound)


def sigma_twist_polys(polys, i, s=1):
    return [sigma_twist(f, i, s) for f in polys]


class ClosureReport:
    def __init__(self, ideal, stability, saturated, period, samples):
        self.ideal = ideal
        self.stability = stability
        self.saturated = saturated
        self.period = period
        self.samples = samples

    def __repr__(self):
        return (f"ClosureReport({self.ideal}, stable={self.stability.stable}, "
                f"saturated={self.saturated}, period={self.period})")


def root_orbit_points(residue_point, chart, n_samples, s):
    """Affine chart coordinates of ā, ā^(1/q), ..., ā^(1/q^(n-1))."""
    y = normalize_residue_point(residue_point)
    if y[chart].is_zero():
        raise ValueError(f"the point is not in chart {chart}")
    out = []
    cur = y
    for _ in range(n_samples):
        inv = cur[chart].inverse()
        out.append(tuple(c * inv for j, c in enumerate(cur) if j != chart))
        cur = tuple(c.frobenius(-s) for c in cur)
    return out


def closure_of_root_orbit(w, chart, d, n_samples=None, s=1, field=None):
    """Vanishing ideal of the sampled root orbit {w^(1/q^n)} with its reports.

    ``w`` is a TiltPoint (its residue is used) or a residue point.  The
    default sample size is one full period of the residue orbit.
    """
    residue = w.residue() if hasattr(w, "residue") else tuple(w)
    residue = normalize_residue_point(residue)
    period = field_of_definition(residue, s)
    n = period if n_samples is None else n_samples
    pts = root_orbit_points(residue, chart, n, s)
    ideal = vanishing_ideal_upto_degree(pts, d, field)
    more = vanishing_ideal_upto_degree(root_orbit_points(residue, chart, n + period, s), d,
                                       ideal.field)
    saturated = ideal.same_span(more)
    stability = frobenius_stability_check(ideal, s)
    return ClosureReport(ideal, stability, saturated, period, pts)


def residue_field_of(points):
    field = GF(points[0][0].field.p)
    for P in points:
        for c in P:
            field = common_field(field, c.field)
    return field
