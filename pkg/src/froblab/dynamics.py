"""Lifts of Frobenius F = [x_i^q + p P_i] on P^N and their dynamics."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .errors import (ExtensionRequired, InvalidDegree, InvalidLift, NonConvergence,
                     NonIntegralCoefficient, NotDivisible, PrecisionLoss,
                     RamifiedFieldUnsupported, ResourceLimit, SigmaInapplicable)
from .local import LocalField, PadicNumber, sigma, teichmuller
from .norms import Norm
from .poly import (DEFAULT_TERM_CAP, HomogPoly, Poly, compose, dehomogenize, evaluate,
                   exact_divide, parse_poly)
from .proj import ProjPoint, normalize_point
from .residue import (GF, coerce_to, enumerate_proj_points, field_of_definition,
                      normalize_residue_point)
from .scalars import valuation

DEFAULT_BRANCH_CAP = 4096


class FrobeniusLift:
    """F = [x_0^q + p P_0 : ... : x_N^q + p P_N] with integral P_i of degree q."""

    def __init__(self, p, s, N, P, coefficient_field=None):
        self.p = p
        self.s = s
        self.q = p**s
        self.N = N
        self.P = list(P)
        self.coefficient_field = coefficient_field
        n = N + 1
        self.polys = []
        for i, Pi in enumerate(self.P):
            xi = Poly.variable(n, i) ** self.q
            self.polys.append(HomogPoly(n, (xi + Pi * p).terms))
        self._field_cache = {}

    @property
    def nvars(self):
        return self.N + 1

    def is_pure_power(self):
        return all(Pi.is_zero() for Pi in self.P)

    def has_rational_coefficients(self):
        """True when every coefficient is σ-fixed (lies in Q_p)."""
        for Pi in self.P:
            for c in Pi.terms.values():
                if isinstance(c, PadicNumber) and c.field.r != 1:
                    return False
        return True

    def polys_in(self, field):
        """The coordinate polynomials with rational coefficients converted into ``field``."""
        if field is None:
            return self.polys
        key = field.key
        cached = self._field_cache.get(key)
        if cached is None:
            cached = [Ppoly.map_coeffs(lambda c: field(c) if isinstance(c, Fraction) else c)
                      for Ppoly in self.polys]
            self._field_cache[key] = cached
        return cached

    def __repr__(self):
        return "F = [" + " : ".join(str(f) for f in self.polys) + "]"

    def describe(self):
        return {"p": self.p, "s": self.s, "N": self.N, "P": [str(Pi) for Pi in self.P]}


def validate_lift(p, s, N, P, coefficient_field=None, constants=None):
    """Build a FrobeniusLift, collecting every degree and integrality violation.

    ``P`` may hold HomogPoly objects or polynomial strings.  A single
    violation raises its specific error; several raise InvalidLift.
    """
    q = p**s
    n = N + 1
    violations = []
    polys = []
    if len(P) != n:
        raise InvalidLift([InvalidDegree(f"expected {n} polynomials P_i, got {len(P)}")])
    for i, Pi in enumerate(P):
        if isinstance(Pi, str):
            try:
                Pi = parse_poly(Pi, n, constants, homogeneous=False)
            except InvalidDegree as exc:
                violations.append(InvalidDegree(f"P_{i}: {exc}"))
                continue
        if Pi.nvars != n:
            violations.append(InvalidDegree(f"P_{i} has {Pi.nvars} variables, expected {n}"))
            continue
        if not Pi.is_zero():
            degs = {sum(m) for m in Pi.terms}
            if degs != {q}:
                violations.append(InvalidDegree(f"P_{i} has degree(s) {sorted(degs)}, expected {q}"))
        for mono, c in Pi.terms.items():
            v = valuation(c, p)
            if v < 0:
                violations.append(NonIntegralCoefficient(
                    f"P_{i} coefficient {c} of {mono} has valuation {v} < 0"))
        polys.append(HomogPoly(n, Pi.terms) if Pi.is_homogeneous() else Pi)
    if len(violations) == 1:
        raise violations[0]
    if violations:
        raise InvalidLift(violations)
    return FrobeniusLift(p, s, N, polys, coefficient_field)


# ---------------------------------------------------------------------------
# forward dynamics

def _field_of_point(x):
    return x.coords[0].field


def apply_once(F, x):
    field = _field_of_point(x)
    polys = F.polys_in(field)
    vals = [evaluate(f, x.coords) for f in polys]
    vals = [v if isinstance(v, PadicNumber) else field(v) for v in vals]
    best = min(v.valuation_bound() for v in vals)
    if best > 0 and all(not v.is_zero() for v in vals):
        # all F-coordinates divisible by p cannot happen for a normalized point
        raise AssertionError(f"base-point freeness violated at {x}")
    return normalize_point(vals)


def apply(F, x, n=1):
    """F^n(x), normalized after every step."""
    if n < 0:
        raise ValueError("n must be >= 0")
    for _ in range(n):
        x = apply_once(F, x)
    return x


def residue_map(F, y, n=1):
    """Φ^s on residue points: coordinate-wise q-power."""
    k = F.s * n
    return normalize_residue_point(tuple(c.frobenius(k) for c in y))


def chart_series(F, i, j, M):
    """Q_{i,j} with F's chart coordinate z_j ↦ z_j^q + p Q_{i,j} modulo p^M.

    The chart has N variables, the coordinates x_k/x_i for k != i in order.
    Rational coefficients are reduced to the symmetric range modulo p^(M-1).
    """
    N, p, q = F.N, F.p, F.q
    if not (0 <= i <= N and 0 <= j <= N) or i == j:
        raise ValueError("need 0 <= i, j <= N with i != j")
    if M < 1:
        raise ValueError("M must be >= 1")
    Pi = dehomogenize(F.P[i], i)
    Pj = dehomogenize(F.P[j], i)
    jj = j if j < i else j - 1
    zj_q = Poly.variable(N, jj) ** q
    # (1 + p Pi)^(-1) = Σ_k (-p Pi)^k, truncated where p^k vanishes mod p^M
    geo = Poly.constant(N, 1)
    term = Poly.constant(N, 1)
    for _ in range(1, M):
        term = term * (Pi * (-p))
        term = _reduce_poly(term, p, M)
        if term.is_zero():
            break
        geo = geo + term
        if len(geo.terms) > DEFAULT_TERM_CAP:
            raise ResourceLimit("chart series exceeds the term cap")
    full = _reduce_poly((zj_q + Pj * p) * geo, p, M)
    rest = full - zj_q
    Q = {}
    for mono, c in rest.terms.items():
        c = _to_padic_int(c, p, M)
        if isinstance(c, int):
            if c % p:
                raise AssertionError("chart series coefficient not divisible by p")
            c = _sym(c // p, p ** (M - 1))
            if c:
                Q[mono] = c
        else:
            Q[mono] = c / p
    return Poly(N, Q)


def _to_padic_int(c, p, M):
    if isinstance(c, int):
        return c % p**M
    if isinstance(c, Fraction):
        mod = p**M
        return c.numerator * pow(c.denominator, -1, mod) % mod
    return c.add_bigoh(M * c.field.e)


def _sym(c, mod):
    c %= mod
    return c - mod if c > mod // 2 else c


def _reduce_poly(f, p, M):
    mod = p**M
    out = {}
    for mono, c in f.terms.items():
        c = _to_padic_int(c, p, M)
        if isinstance(c, int):
            c %= mod
            if c:
                out[mono] = c
        elif not c.is_zero():
            out[mono] = c
    return Poly(f.nvars, out)


# ---------------------------------------------------------------------------
# periodic points

def _working_field(F, degree, M):
    r = degree
    if F.coefficient_field is not None:
        r = r * F.coefficient_field.r // math.gcd(r, F.coefficient_field.r)
    return LocalField(F.p, r, prec=M)


def teichmuller_point(y, field, M=None):
    """Coordinate-wise Teichmüller lift of a residue point."""
    coords = [teichmuller(coerce_to(c, field.residue), field, M)
              for c in normalize_residue_point(y)]
    return normalize_point(coords)


def periodic_point_in_disk(F, y, M=32, field=None):
    """The unique F-periodic point reducing to the residue point y.

    Iterates F^m (m the Φ^s-period of y) from the Teichmüller lift; each
    iteration fixes at least one more p-adic digit.
    """
    y = normalize_residue_point(y)
    m = field_of_definition(y, F.s)
    if field is None:
        field = _working_field(F, F.s * m, M)
    x = teichmuller_point(y, field, M)
    for _ in range(M + 1):
        nxt = apply(F, x, m)
        if nxt == x:
            return nxt
        x = nxt
    raise NonConvergence(
        f"F^{m} did not settle in the residue disk of {y} after {M + 1} iterations "
        f"(last iterate {x}); attraction has failed, which indicates a bug")


class PeriodicPoint:
    """A residue point y together with the periodic point x in its disk."""

    __slots__ = ("residue", "point", "period")

    def __init__(self, residue, point, period):
        self.residue = residue
        self.point = point
        self.period = period

    def __iter__(self):
        return iter((self.residue, self.point))

    def __repr__(self):
        return f"PeriodicPoint({self.point}, period={self.period})"


def enumerate_periodic(F, m, M=32, cap=10**5, threads=1):
    """One periodic point per residue point of P^N(F_{q^m}), in enumeration order."""
    residue_field = GF(F.p, F.s * m)
    q_m = residue_field.order
    count = (q_m ** (F.N + 1) - 1) // (q_m - 1)
    if count > cap:
        raise ResourceLimit(f"{count} periodic points exceed cap {cap}")
    ys = enumerate_proj_points(residue_field, F.N, cap)

    def work(y):
        return PeriodicPoint(y, periodic_point_in_disk(F, y, M), field_of_definition(y, F.s))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(work, ys))
    return [work(y) for y in ys]


class GaloisCertificate:
    """Outcome of comparing F(x) with σ(x)."""

    def __init__(self, holds, discrepancy, precision, image, conjugate):
        self.holds = holds
        self.discrepancy = discrepancy
        self.precision = precision
        self.image = image
        self.conjugate = conjugate

    def __bool__(self):
        return self.holds

    def __repr__(self):
        return f"GaloisCertificate(holds={self.holds}, discrepancy={self.discrepancy})"


def sigma_point(x, k):
    return normalize_point([sigma(c, k) for c in x.coords])


def galois_periodicity_check(F, x):
    """Does F(x) = σ(x), σ lifting the q-power Frobenius?"""
    field = _field_of_point(x)
    if field.e != 1:
        raise RamifiedFieldUnsupported("the Galois test needs an unramified field")
    if not F.has_rational_coefficients():
        raise SigmaInapplicable("F has coefficients outside Q_p; σ does not commute with F")
    image = apply(F, x)
    conj = sigma_point(x, F.s)
    prec = min(v for v in (image.precision(), conj.precision()) if v is not None) \
        if (image.precision() is not None or conj.precision() is not None) else None
    if image.pivot != conj.pivot:
        disc = Norm(F.p, 0)
    else:
        worst = math.inf
        for a, b in zip(image.coords, conj.coords):
            d = a - b
            if not d.is_zero():
                worst = min(worst, d.valuation())
        disc = Norm(F.p, worst)
    return GaloisCertificate(disc.is_zero(), disc, prec, image, conj)


def is_periodic(F, x, bound):
    """Least l <= bound with F^l(x) = x, else None."""
    y = x
    for l in range(1, bound + 1):
        y = apply(F, y)
        if y == x:
            return l
    return None


# ---------------------------------------------------------------------------
# backward step

def _mu(k, e, s, p):
    """Lowest π-adic level at which digit k of z can change F's equations."""
    best = e + k
    for t in range(s + 1):
        best = min(best, e * (s - t) + k * p**t)
    return best


class _Equations:
    """G_j(z) = z_j^q + p P_j(z~) - c_j (1 + p P_i(z~)) for j != i."""

    def __init__(self, F, b, field):
        self.F = F
        self.i = b.pivot
        self.field = field
        self.idx = [j for j in range(F.N + 1) if j != self.i]
        self.c = [b.coords[j] for j in self.idx]
        polys = F.polys_in(field)
        self.Fi = polys[self.i]
        self.Fj = [polys[j] for j in self.idx]

    def full_point(self, z):
        pt = list(z)
        pt.insert(self.i, self.field.one())
        return pt

    def values(self, z):
        pt = self.full_point(z)
        fi = evaluate(self.Fi, pt)
        out = []
        for fj, c in zip(self.Fj, self.c):
            out.append(evaluate(fj, pt) - c * fi)
        return out


def _digit(v, level, pi_inv_pow):
    """Residue of v / π^level for v of valuation >= level."""
    if v.is_zero():
        return None
    if v.val_units < level:
        raise AssertionError("level digit requested below the valuation")
    return (v * pi_inv_pow).reduce()


def _digits_vector(vals, level, pi_inv_pow, field):
    r = field.r
    out = []
    for v in vals:
        d = _digit(v, level, pi_inv_pow)
        out.extend(d.coeffs if d is not None else (0,) * r)
    return out


def _solve_mod_p(A, rhs, p):
    """Particular solution and kernel basis of A x = rhs over F_p, or None."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    M = [list(A[r]) + [rhs[r]] for r in range(rows)]
    pivots = []
    row = 0
    for col in range(cols):
        piv = next((r for r in range(row, rows) if M[r][col] % p), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = pow(M[row][col], -1, p)
        M[row] = [x * inv % p for x in M[row]]
        for r in range(rows):
            if r != row and M[r][col] % p:
                f = M[r][col]
                M[r] = [(a - f * b) % p for a, b in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
        if row == rows:
            break
    for r in range(row, rows):
        if M[r][cols] % p:
            return None
    part = [0] * cols
    for r, col in enumerate(pivots):
        part[col] = M[r][cols] % p
    free = [c for c in range(cols) if c not in pivots]
    kernel = []
    for fcol in free:
        vec = [0] * cols
        vec[fcol] = 1
        for r, col in enumerate(pivots):
            vec[col] = (-M[r][fcol]) % p
        kernel.append(vec)
    return part, kernel


def backward_step(F, b, M=None, field=None, cap=DEFAULT_BRANCH_CAP):
    """All x in the working field with F(x) = b, to the precision b supports.

    The first entry is the canonical branch: at each digit the
    lexicographically least solution, starting from Teichmüller digits, so
    that a Teichmüller target gives the Teichmüller preimage.  Raises
    ExtensionRequired (with the obstructed level) when no branch survives.

    Near a multiple preimage (superattracting points such as [0:1] under
    the pure power map) the approximate solutions form a cluster that
    grows with the precision.  Once more than q^N branches are alive,
    lifting stops and branches sharing their leading digits are merged,
    each cluster reported once at the precision its digits certify.
    """
    field = field or _field_of_point(b)
    if field != _field_of_point(b):
        b = normalize_point([field(c) for c in b.coords])
    p, e, s = F.p, field.e, F.s
    Mb = b.precision()
    Mb_units = None if Mb is None else int(Mb * e)
    target = Mb_units if Mb_units is not None else field.prec
    if M is not None:
        target = min(target, M * e if isinstance(M, int) else int(Fraction(M) * e))
    if target < 2:
        raise PrecisionLoss("the target point carries too little precision for a backward step")
    eqs = _Equations(F, b, field)
    n_unknowns = len(eqs.idx)
    r = field.r
    pi = field.uniformizer()
    work = target + 2

    # residue solve: z̄_j = c̄_j^(1/q)
    z0 = []
    for c in eqs.c:
        cbar = c.reduce()
        root = cbar.frobenius(-s)
        z0.append(teichmuller(root, field, work))
    # levels where each digit enters
    entering = {}
    k = 1
    while True:
        lv = _mu(k, e, s, p)
        if lv >= target:
            break
        entering[lv] = k
        k += 1
    last_digit = k - 1
    out_prec = last_digit + 1
    basis = []
    for j in range(n_unknowns):
        for a in range(r):
            coords = [0] * r
            coords[a] = 1
            basis.append((j, field.lift_residue(field.residue(coords))))
    max_roots = F.q ** F.N
    frontier = [([], [z.lift_to(work) for z in z0])]
    for level in range(1, target):
        pi_inv = pi ** (-level) if e > 1 else field(Fraction(1, p**level))
        new_frontier = []
        k = entering.get(level)
        for digits, z in frontier:
            vals = eqs.values(z)
            if k is None:
                if all(v.is_zero() or v.val_units > level for v in vals):
                    new_frontier.append((digits, z))
                continue
            r0 = _digits_vector(vals, level, pi_inv, field)
            pik = pi**k
            cols = []
            for j, lift in basis:
                zz = list(z)
                zz[j] = (zz[j] + pik * lift).lift_to(work)
                dv = _digits_vector(eqs.values(zz), level, pi_inv, field)
                cols.append([(x - y) % p for x, y in zip(dv, r0)])
            A = [[cols[c][row] for c in range(len(cols))] for row in range(len(r0))]
            sol = _solve_mod_p(A, [(-x) % p for x in r0], p)
            if sol is None:
                continue
            part, kernel = sol
            if p ** len(kernel) * max(len(new_frontier), 1) > cap:
                raise ResourceLimit(f"backward-step branching exceeds cap {cap}")
            cands = set()
            for combo in itertools.product(range(p), repeat=len(kernel)):
                vec = list(part)
                for c, kv in zip(combo, kernel):
                    if c:
                        vec = [(a + c * b2) % p for a, b2 in zip(vec, kv)]
                cands.add(tuple(vec))
            for vec in sorted(cands):
                zz = list(z)
                for j in range(n_unknowns):
                    dig = field.residue(list(vec[j * r:(j + 1) * r]))
                    if not dig.is_zero():
                        zz[j] = (zz[j] + pik * teichmuller(dig, field, work)).lift_to(work)
                new_frontier.append((digits + [vec], zz))
        if not new_frontier:
            raise ExtensionRequired(
                f"no solution of F(x) = {b} in {field}: every branch is obstructed at "
                f"π-adic level {level}", level=level)
        if len(new_frontier) > cap:
            raise ResourceLimit(f"backward-step branching exceeds cap {cap}")
        if len(new_frontier) > max_roots:
            # a cluster of approximate roots: stop before this level
            out_prec = max((kk for lv, kk in entering.items() if lv < level), default=0) + 1
            break
        frontier = new_frontier
    frontier.sort(key=lambda t: t[0])
    if len(frontier) > 1 and out_prec - 1 > 0:
        frontier, out_prec = _merge_clusters(frontier, out_prec - 1, max_roots)
    results = []
    for _, z in frontier:
        pt = eqs.full_point([c.add_bigoh(out_prec) for c in z])
        results.append(ProjPoint(pt, eqs.i))
    return results


def _merge_clusters(frontier, ndigits, max_roots):
    """Keep one branch per digit prefix, using the longest prefix with <= max_roots groups."""
    for P in range(ndigits, -1, -1):
        groups = {}
        for digits, z in frontier:
            groups.setdefault(tuple(digits[:P]), (digits, z))
        if len(groups) <= max_roots:
            if P == ndigits:
                return frontier, ndigits + 1
            return [groups[k] for k in sorted(groups)], P + 1
    return frontier[:1], 1  # pragma: no cover - P = 0 always gives one group


def canonical_preimage(F, b, M=None, field=None):
    return backward_step(F, b, M, field)[0]


def verify_preimage(F, x, b):
    return apply(F, x) == b


# ---------------------------------------------------------------------------
# hypersurface invariance

class InvarianceResult:
    def __init__(self, invariant, l=None, quotient=None, witness=None, witness_value=None,
                 bound=None):
        self.invariant = invariant
        self.l = l
        self.quotient = quotient
        self.witness = witness
        self.witness_value = witness_value
        self.bound = bound

    @property
    def verdict(self):
        return "Invariant" if self.invariant else "NotInvariant"

    def __repr__(self):
        if self.invariant:
            return f"Invariant(l={self.l}, quotient={self.quotient})"
        return f"NotInvariant(witness={self.witness}, value={self.witness_value})"


def iterate_polys(F, l, cap=DEFAULT_TERM_CAP):
    """Coordinate polynomials of F^l."""
    cur = [Poly.variable(F.nvars, i) for i in range(F.nvars)]
    for _ in range(l):
        cur = [compose(f, cur, cap) for f in F.polys]
    return cur


def invariance_check_hypersurface(F, H, bound=3, cap=DEFAULT_TERM_CAP, search=2):
    """Least l <= bound with H | H∘F^l, else NotInvariant with a witness point.

    The witness is a small integer point x with H(x) = 0 and H(F(x)) != 0;
    ``search`` bounds the absolute value of its coordinates.
    """
    cur = [Poly.variable(F.nvars, i) for i in range(F.nvars)]
    for l in range(1, bound + 1):
        cur = [compose(f, cur, cap) for f in F.polys]
        HF = compose(H, cur, cap)
        try:
            Q = exact_divide(HF, H)
        except NotDivisible:
            continue
        return InvarianceResult(True, l=l, quotient=Q, bound=bound)
    HF1 = compose(H, F.polys, cap)
    rng = range(-search, search + 1)
    candidates = sorted(
        (pt for pt in itertools.product(rng, repeat=F.nvars) if any(pt)),
        key=lambda pt: (max(map(abs, pt)), sum(map(abs, pt)), [(abs(c), c < 0) for c in pt]))
    for pt in candidates:
        if evaluate(H, pt) == 0:
            val = evaluate(HF1, pt)
            if val != 0:
                return InvarianceResult(False, witness=list(pt), witness_value=val, bound=bound)
    return InvarianceResult(False, bound=bound)
