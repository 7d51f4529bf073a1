"""Coherent backward orbits and their tilts.

A coherent orbit b_0, b_1, ..., b_D with F(b_i) = b_(i-1) stands in for a
point of the inverse limit of (P^N, F).  Its tilt coordinates come from the
sharp-map limit: with z_m the chart coordinate of b_m, the values
z_m^(q^m) converge, and the limit read digit by digit through
O/p = O^b/t gives a truncated series in t.
"""

from __future__ import annotations

import math
import random as _random

from .dynamics import apply, backward_step, is_periodic, residue_map
from .errors import (ChartInstability, DepthInsufficient, ExtensionRequired, InvalidOrbit,
                     NotPeriodic, RamifiedFieldUnsupported, ResourceLimit)
from .local import teichmuller_digits
from .norms import Norm
from .proj import reduction_map
from .residue import GF, normalize_residue_point
from .tilt import TiltElement

DEFAULT_GUARD = 2


class CoherentOrbit:
    """b_0, ..., b_D with F(b_i) = b_(i-1)."""

    def __init__(self, F, points, check=True):
        self.F = F
        self.points = list(points)
        if not self.points:
            raise InvalidOrbit("an orbit needs at least one point")
        if check:
            self.verify()

    @property
    def depth(self):
        return len(self.points) - 1

    def verify(self):
        for i in range(1, len(self.points)):
            if apply(self.F, self.points[i]) != self.points[i - 1]:
                raise InvalidOrbit(f"F(b_{i}) != b_{i - 1}")
        return True

    def shift_forward(self):
        """(F(b_0), b_0, b_1, ...): the shift map on the inverse limit."""
        return CoherentOrbit(self.F, [apply(self.F, self.points[0])] + self.points, check=False)

    def truncated(self, depth):
        return CoherentOrbit(self.F, self.points[: depth + 1], check=False)

    def __getitem__(self, i):
        return self.points[i]

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"CoherentOrbit(depth={self.depth}, b_0={self.points[0]})"


class TiltPoint:
    """Normalized tilt coordinates [w_0 : ... : w_N] with w_pivot = 1."""

    def __init__(self, coords, pivot):
        self.coords = list(coords)
        self.pivot = pivot

    @property
    def cutoff(self):
        return min(c.cutoff for c in self.coords)

    def is_constant(self):
        return all(all(e == 0 for e, _ in c.terms) for c in self.coords)

    def residue(self):
        return normalize_residue_point(tuple(c.reduce() for c in self.coords))

    def frobenius(self, k):
        return TiltPoint([c.frobenius(k) for c in self.coords], self.pivot)

    def truncate(self, cutoff):
        return TiltPoint([c.truncate(cutoff) for c in self.coords], self.pivot)

    def __eq__(self, other):
        if not isinstance(other, TiltPoint):
            return NotImplemented
        return self.pivot == other.pivot and all(a == b for a, b in zip(self.coords, other.coords))

    __hash__ = None

    def __repr__(self):
        return "[" + " : ".join(str(c).split(";")[0] for c in self.coords) + f"] + O(t^{self.cutoff})"

    def serialize(self):
        return [c.serialize() for c in self.coords]


def tilt_cutoff(depth, s, guard=DEFAULT_GUARD):
    """Number of certified t-adic digits of a depth-D orbit's tilt."""
    return s * depth + 1 - guard


def tilt_of_orbit(orbit, cutoff=None, guard=DEFAULT_GUARD):
    """Tilt coordinates w_j of a coherent orbit.

    y_j = (chart coordinate of b_D)^(q^D) is congruent to the sharp-map
    limit modulo p^(sD+1); its Teichmüller digits below the cutoff are the
    t-adic digits of w_j.  Only unramified orbits are supported.
    """
    F = orbit.F
    b0 = orbit.points[0]
    field = b0.coords[0].field
    if field.e != 1:
        raise RamifiedFieldUnsupported("tilts are computed for orbits in unramified fields only")
    pivot = b0.pivot
    for m, b in enumerate(orbit.points):
        if b.pivot != pivot:
            raise ChartInstability(f"b_{m} uses chart {b.pivot}, b_0 uses chart {pivot}")
    D = orbit.depth
    supported = tilt_cutoff(D, F.s, guard)
    if cutoff is None:
        cutoff = supported
    if cutoff > supported or cutoff < 1:
        raise DepthInsufficient(
            f"cutoff {cutoff} needs more depth than D = {D} supplies (max {supported})")
    bD = orbit.points[D]
    p = F.p
    coords = []
    for j, z in enumerate(bD.coords):
        if j == pivot:
            coords.append(TiltElement(p, [(0, GF(p).one)], cutoff))
            continue
        y = z.lift_to(cutoff + 1) ** (F.q**D)
        digits = teichmuller_digits(y.add_bigoh(cutoff), cutoff)
        coords.append(TiltElement(p, [(k, c) for k, c in enumerate(digits)], cutoff))
    return TiltPoint(coords, pivot)


def residue_orbit(orbit):
    return [reduction_map(b) for b in orbit.points]


def backward_orbit(F, b0, depth, branch="canonical", rng=None, field=None,
                   max_steps=10_000):
    """Coherent orbit of the given depth by repeated backward steps.

    ``branch`` is "canonical" (lexicographically least preimage each time)
    or "random": preimages are tried in an order drawn from ``rng`` with
    backtracking, so dead ends inside the field are avoided whenever some
    branch reaches the requested depth.  If none does, ExtensionRequired is
    raised with ``depth`` set to the deepest level reached.
    """
    if branch not in ("canonical", "random"):
        raise ValueError(f"unknown branch mode {branch!r}")
    rng = rng or _random.Random(0)
    points = [b0]
    options = []  # per level: remaining untried preimages
    deepest = 0
    last_exc = None
    steps = 0
    while len(points) <= depth:
        steps += 1
        if steps > max_steps:
            raise ExtensionRequired(f"backtracking budget exhausted at depth {deepest}",
                                    depth=deepest)
        try:
            pre = backward_step(F, points[-1], field=field)
        except ExtensionRequired as exc:
            last_exc = exc
            pre = []
        if branch == "random":
            rng.shuffle(pre)
        if pre:
            points.append(pre[0])
            options.append(pre[1:])
            deepest = max(deepest, len(points) - 1)
            continue
        if branch == "canonical":
            last_exc.depth = len(points) - 1
            raise last_exc
        # backtrack to the most recent level with an untried alternative
        while options and not options[-1]:
            options.pop()
            points.pop()
        if not options:
            err = ExtensionRequired(
                f"no coherent orbit of depth {depth} inside the field; deepest reached {deepest}",
                level=getattr(last_exc, "level", None), depth=deepest)
            raise err
        points.pop()
        points.append(options[-1].pop(0))
    return CoherentOrbit(F, points, check=False)


def all_backward_orbits(F, b0, depth, field=None, cap=256):
    """Every coherent orbit of the given depth through b0 inside the field.

    The preimage tree is walked depth first in backward_step order, so the
    canonical orbit comes first.  Raises ResourceLimit past ``cap`` orbits and
    ExtensionRequired (with ``depth`` = deepest level) if no branch survives.
    """
    found = []
    deepest = 0
    last_exc = None
    stack = [[b0]]
    while stack:
        points = stack.pop()
        deepest = max(deepest, len(points) - 1)
        if len(points) > depth:
            found.append(CoherentOrbit(F, points, check=False))
            if len(found) > cap:
                raise ResourceLimit(f"more than {cap} coherent orbits of depth {depth}")
            continue
        try:
            pre = backward_step(F, points[-1], field=field)
        except ExtensionRequired as exc:
            last_exc = exc
            continue
        stack.extend(points + [x] for x in reversed(pre))
    if not found:
        raise ExtensionRequired(
            f"no coherent orbit of depth {depth} inside the field; deepest reached {deepest}",
            level=getattr(last_exc, "level", None), depth=deepest)
    return found


def periodic_orbit_of(F, x, depth=None, bound=64):
    """The coherent orbit (x, F^(n-1)(x), ..., F(x), x, ...) through a periodic x."""
    n = is_periodic(F, x, bound)
    if n is None:
        raise NotPeriodic(f"F^l(x) != x for every l <= {bound}")
    forward = [x]
    for _ in range(n - 1):
        forward.append(apply(F, forward[-1]))
    depth = 2 * n if depth is None else depth
    points = [forward[(-i) % n] for i in range(depth + 1)]
    return CoherentOrbit(F, points, check=False)


class AuditReport:
    def __init__(self, lhs, rhs, cutoff, discrepancy):
        self.lhs = lhs
        self.rhs = rhs
        self.cutoff = cutoff
        self.discrepancy = discrepancy

    @property
    def passed(self):
        return self.discrepancy.is_zero()

    def __repr__(self):
        return f"AuditReport(discrepancy={self.discrepancy}, cutoff={self.cutoff})"


def conjugacy_audit(orbit, guard=DEFAULT_GUARD):
    """Compare tilt(T(orbit)) with Φ^s(tilt(orbit)) up to their common cutoff."""
    if orbit.depth < 2:
        raise DepthInsufficient("the conjugacy audit needs depth >= 2")
    F = orbit.F
    lhs = tilt_of_orbit(orbit.shift_forward(), guard=guard)
    rhs = tilt_of_orbit(orbit, guard=guard).frobenius(F.s)
    cut = min(lhs.cutoff, rhs.cutoff)
    worst = math.inf
    if lhs.pivot != rhs.pivot:
        worst = 0
    else:
        for a, b in zip(lhs.coords, rhs.coords):
            d = a.truncate(cut) - b.truncate(cut)
            if d.terms:
                worst = min(worst, d.terms[0][0])
    return AuditReport(lhs, rhs, cut, Norm(F.p, worst))


def residue_consistency(orbit, w):
    """reduce(w^(1/q^n)) against red(b_n) for every n; returns the mismatching indices."""
    F = orbit.F
    bad = []
    for n, b in enumerate(orbit.points):
        root = normalize_residue_point(tuple(c.frobenius(-F.s * n).reduce() for c in w.coords))
        if root != reduction_map(b):
            bad.append(n)
    return bad


def teichmuller_orbit_residues(F, y, depth):
    """Inverse-Frobenius residue orbit of y, the residue shadow of any coherent orbit."""
    out = [normalize_residue_point(y)]
    for _ in range(depth):
        out.append(residue_map(F, out[-1], -1))
    return out
