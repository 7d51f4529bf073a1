"""Bounded-degree vanishing ideals, Frobenius stability and root-orbit closures."""

import itertools
import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from froblab.closure import (closure_of_root_orbit, frobenius_stability_check, monomials_upto,
                             vanishing_ideal_upto_degree)
from froblab.errors import ResourceLimit
from froblab.poly import Poly, evaluate
from froblab.residue import GF

F2 = GF(2)
F4 = GF(2, 2)
F16 = GF(2, 4)
W = F4.gen


def poly(terms, field, nvars=2):
    return Poly(nvars, {m: field(c) if isinstance(c, int) else c for m, c in terms.items()})


def vanishes(f, P):
    v = evaluate(f, P)
    return v == 0 if isinstance(v, int) else v.is_zero()


def test_monomial_order_is_graded():
    monos = monomials_upto(2, 2)
    assert len(monos) == 6
    assert [sum(m) for m in monos] == sorted((sum(m) for m in monos), reverse=True)


def test_two_conjugate_points():
    I = vanishing_ideal_upto_degree([(W, W * W), (W * W, W)], 1)
    assert len(I) == 1
    assert I.contains(poly({(1, 0): 1, (0, 1): 1, (0, 0): 1}, F4))


def test_origin():
    I = vanishing_ideal_upto_degree([(F2.zero, F2.zero)], 1)
    assert len(I) == 2
    assert I.contains(poly({(1, 0): 1}, F2)) and I.contains(poly({(0, 1): 1}, F2))


def test_affine_line_over_f2():
    pts = [(F2.zero,), (F2.one,)]
    assert len(vanishing_ideal_upto_degree(pts, 1)) == 0
    I = vanishing_ideal_upto_degree(pts, 2)
    assert len(I) == 1 and I.contains(poly({(2,): 1, (1,): 1}, F2, 1))


def test_resource_limit():
    with pytest.raises(ResourceLimit):
        vanishing_ideal_upto_degree([(F2.one,) * 4], 10, cap=100)


def random_points(rng, field, nvars, count):
    return [tuple(field.random(rng) for _ in range(nvars)) for _ in range(count)]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 3), st.integers(1, 3))
def test_basis_vanishes_and_rank_nullity(seed, nvars, d):
    rng = random.Random(seed)
    field = rng.choice([F2, F4, F16])
    pts = random_points(rng, field, nvars, rng.randrange(1, 8))
    I = vanishing_ideal_upto_degree(pts, d, field)
    assert I.rank + len(I) == comb(nvars + d, d)
    for f in I.polys:
        assert all(vanishes(f, P) for P in pts)


def test_rank_matches_brute_force_over_f2():
    # count vanishing polynomials of degree <= 2 in one variable by enumeration
    monos = monomials_upto(1, 2)
    for pts in ([(F2.zero,)], [(F2.zero,), (F2.one,)]):
        I = vanishing_ideal_upto_degree(pts, 2)
        count = 0
        for coeffs in itertools.product([F2.zero, F2.one], repeat=len(monos)):
            f = Poly(1, {m: c for m, c in zip(monos, coeffs) if not c.is_zero()})
            if all(vanishes(f, P) for P in pts):
                count += 1
        assert count == 2 ** len(I)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_more_points_never_enlarge_the_ideal(seed):
    rng = random.Random(seed)
    pts = random_points(rng, F16, 2, 6)
    small = vanishing_ideal_upto_degree(pts[:3], 2, F16)
    big = vanishing_ideal_upto_degree(pts, 2, F16)
    assert len(big) <= len(small)
    for f in big.polys:
        assert small.contains(f)


def test_stability_examples():
    I = vanishing_ideal_upto_degree([(W, W * W), (W * W, W)], 1)
    assert frobenius_stability_check(I).stable
    J = vanishing_ideal_upto_degree([(W,)], 1)
    rep = frobenius_stability_check(J)
    assert not rep.stable and rep.r == 2
    empty = vanishing_ideal_upto_degree([(F2.zero,), (F2.one,)], 1)
    assert frobenius_stability_check(empty).stable


def test_closure_examples():
    rep = closure_of_root_orbit((F4.one, W), 0, 2)
    assert rep.period == 2
    assert rep.ideal.contains(poly({(2,): 1, (1,): 1, (0,): 1}, F4, 1))
    assert rep.stability.stable and rep.saturated
    assert len(closure_of_root_orbit((F4.one, W), 0, 1).ideal) == 0
    one = closure_of_root_orbit((F2.one, F2.one), 0, 1)
    assert one.ideal.contains(poly({(1,): 1, (0,): 1}, F2, 1)) and one.stability.stable


def test_closure_rejects_point_off_chart():
    with pytest.raises(ValueError):
        closure_of_root_orbit((F2.zero, F2.one), 0, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 3))
def test_closures_of_random_points_are_stable_and_saturated(seed, d):
    rng = random.Random(seed)
    y = (F16.one, F16.random(rng), F16.random(rng))
    rep = closure_of_root_orbit(y, 0, d)
    assert rep.stability.stable
    assert rep.saturated
    for f in rep.ideal.polys:
        assert all(vanishes(f, P) for P in rep.samples)
