"""Coherent orbits, their tilts, residue orbits and conjugacy audits."""

import random

import pytest

from froblab.dynamics import enumerate_periodic, residue_map, validate_lift
from froblab.errors import (ChartInstability, DepthInsufficient, ExtensionRequired,
                            InvalidOrbit, NotPeriodic, ResourceLimit)
from froblab.local import LocalField, teichmuller
from froblab.proj import normalize_point, reduction_map
from froblab.residue import GF
from froblab.tilt import TiltElement
from froblab.tilting import (CoherentOrbit, all_backward_orbits, backward_orbit, conjugacy_audit, periodic_orbit_of,
                             residue_consistency, residue_orbit, tilt_cutoff, tilt_of_orbit)

Q2 = LocalField(2, prec=32)
Q4 = LocalField(2, 2, prec=32)
SQ1 = validate_lift(2, 1, 1, ["0", "0"])
PERT = validate_lift(2, 1, 1, ["x0*x1", "0"])
F4 = GF(2, 2)
W = F4.gen


def teich_point(y, field=Q4):
    return normalize_point([teichmuller(c, field) for c in y])


def teich_orbit(depth):
    # b_n = [1 : T(ω^(2^-n))], alternating ω, ω²
    pts = [teich_point((F4.one, W if n % 2 == 0 else W * W)) for n in range(depth + 1)]
    return CoherentOrbit(SQ1, pts)


def test_orbit_validation():
    with pytest.raises(InvalidOrbit):
        CoherentOrbit(SQ1, [])
    with pytest.raises(InvalidOrbit):
        CoherentOrbit(SQ1, [normalize_point([1, 3], Q2), normalize_point([1, 3], Q2)])


def test_tilt_of_teichmuller_orbit_is_constant():
    orbit = teich_orbit(8)
    w = tilt_of_orbit(orbit)
    assert w.pivot == 0
    assert w.is_constant()
    assert w.coords[1] == TiltElement(2, [(0, W)], w.cutoff)
    assert w.cutoff == tilt_cutoff(8, 1)


def test_tilt_of_constant_orbits():
    for coords in ([1, 1], [1, 0]):
        x = normalize_point(coords, Q2)
        w = tilt_of_orbit(CoherentOrbit(SQ1, [x] * 6))
        assert w.is_constant()
        assert w.residue() == reduction_map(x)


def test_residue_orbit_examples():
    res = residue_orbit(teich_orbit(4))
    assert res == [(F4.one, W), (F4.one, W * W)] * 2 + [(F4.one, W)]
    const = residue_orbit(CoherentOrbit(SQ1, [normalize_point([1, 1], Q2)] * 4))
    assert len(set(const)) == 1


def test_residue_orbit_is_inverse_frobenius_orbit_and_matches_tilt():
    for seed in range(5):
        orbit = backward_orbit(PERT, normalize_point([0, 1], Q2), 10, branch="random",
                               rng=random.Random(seed))
        res = residue_orbit(orbit)
        for a, b in zip(res, res[1:]):
            assert residue_map(PERT, b) == a
            assert residue_map(PERT, a, -1) == b
        assert residue_consistency(orbit, tilt_of_orbit(orbit)) == []


def test_periodic_orbit_examples():
    fixed = periodic_orbit_of(SQ1, normalize_point([1, 1], Q2), depth=4)
    assert all(b == fixed[0] for b in fixed.points)
    assert tilt_of_orbit(fixed).residue() == (GF(2).one, GF(2).one)
    x = teich_point((F4.one, W))
    orbit = periodic_orbit_of(SQ1, x, depth=6)
    assert orbit[1] == teich_point((F4.one, W * W))
    assert orbit[2] == x
    w = tilt_of_orbit(orbit)
    assert w.is_constant() and w.coords[1] == TiltElement(2, [(0, W)], w.cutoff)


def test_not_periodic():
    with pytest.raises(NotPeriodic):
        periodic_orbit_of(SQ1, normalize_point([1, 3], Q2), bound=6)


@pytest.mark.parametrize("F", [SQ1, PERT], ids=["squaring", "perturbed"])
def test_periodic_points_tilt_to_constant_series(F):
    for m in (1, 2, 3):
        for pp in enumerate_periodic(F, m, M=32):
            orbit = periodic_orbit_of(F, pp.point, depth=8)
            w = tilt_of_orbit(orbit)
            assert w.is_constant()
            assert w.residue() == pp.residue


def test_conjugacy_audit_examples():
    assert conjugacy_audit(teich_orbit(8)).passed
    const = CoherentOrbit(SQ1, [normalize_point([1, 1], Q2)] * 5)
    assert conjugacy_audit(const).passed
    with pytest.raises(DepthInsufficient):
        conjugacy_audit(CoherentOrbit(SQ1, [normalize_point([1, 1], Q2)] * 2))


def test_conjugacy_audit_on_random_orbits():
    starts = [(PERT, normalize_point([0, 1], Q2)),
              (SQ1, normalize_point([1, 1], Q2)),
              (SQ1, teich_point((F4.one, W)))]
    for F, b0 in starts:
        for seed in range(4):
            orbit = backward_orbit(F, b0, 8, branch="random", rng=random.Random(seed))
            orbit.verify()
            report = conjugacy_audit(orbit)
            assert report.passed, report


def test_depth_insufficient():
    orbit = teich_orbit(3)
    with pytest.raises(DepthInsufficient):
        tilt_of_orbit(orbit, cutoff=tilt_cutoff(3, 1) + 1)
    with pytest.raises(DepthInsufficient):
        tilt_of_orbit(CoherentOrbit(SQ1, [teich_point((F4.one, W))]))


def test_chart_instability():
    # the maps here preserve charts, so the guard is exercised on a bare sequence
    pts = [normalize_point([1, 2], Q2)] + [normalize_point([2, 1], Q2)] * 3
    with pytest.raises(ChartInstability):
        tilt_of_orbit(CoherentOrbit(SQ1, pts, check=False))


def test_precision_growth_and_stability():
    orbit = backward_orbit(PERT, normalize_point([0, 1], Q2), 12, branch="random",
                           rng=random.Random(3))
    prev = None
    for D in range(3, 13):
        w = tilt_of_orbit(orbit.truncated(D))
        if prev is not None:
            assert w.cutoff >= prev.cutoff + 1
            assert w.truncate(prev.cutoff) == prev
        prev = w


def test_backward_orbit_reports_depth_reached():
    with pytest.raises(ExtensionRequired) as info:
        backward_orbit(SQ1, normalize_point([1, 3], Q2), 4)
    assert info.value.depth == 0
    with pytest.raises(ValueError):
        backward_orbit(SQ1, normalize_point([1, 1], Q2), 2, branch="sideways")


def test_all_backward_orbits():
    one = normalize_point([1, 1], Q2)
    orbits = all_backward_orbits(SQ1, one, 6)
    # 1 has square roots ±1, and -1 has none in Q_2, so only the last step can branch
    assert len(orbits) == 2
    assert all(b == one for b in orbits[0].points)
    assert orbits[1][6] == normalize_point([1, -1], Q2)
    for orbit in orbits:
        orbit.verify()
    teich = all_backward_orbits(SQ1, teich_point((F4.one, W)), 4)
    assert len(teich) == 2 and teich[0][4] == teich_point((F4.one, W))
    with pytest.raises(ResourceLimit):
        all_backward_orbits(SQ1, one, 6, cap=1)
    with pytest.raises(ExtensionRequired) as info:
        all_backward_orbits(SQ1, normalize_point([1, 3], Q2), 3)
    assert info.value.depth == 0
