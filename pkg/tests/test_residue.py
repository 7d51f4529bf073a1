"""Finite fields: arithmetic, Frobenius, tower embeddings, projective enumeration."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from froblab.errors import DivisionByZero, IncompatibleFields
from froblab.residue import (CONWAY, GF, coerce_to, enumerate_proj_points, field_of_definition,
                             format_fq, frobenius_s, is_irreducible_mod_p, proj_point_count)

SMALL = [(2, 1), (2, 2), (2, 3), (2, 4), (2, 6), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2)]


# -- naive polynomial arithmetic over F_p, used as an independent oracle ------

def _trim(a):
    while a and a[-1] == 0:
        a = a[:-1]
    return a


def _mulmod(a, b, m, p):
    prod = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    return _rem(prod, m, p)


def _rem(a, m, p):
    a = _trim([x % p for x in a])
    inv = pow(m[-1], -1, p)
    while len(a) >= len(m):
        c = a[-1] * inv % p
        shift = len(a) - len(m)
        for i, y in enumerate(m):
            a[shift + i] = (a[shift + i] - c * y) % p
        a = _trim(a)
    return a


def _powmod(a, e, m, p):
    out = [1]
    while e:
        if e & 1:
            out = _mulmod(out, a, m, p)
        a = _mulmod(a, a, m, p)
        e >>= 1
    return out


def _evaluate_at(poly, x, m, p):
    acc = []
    for c in reversed(poly):
        acc = _mulmod(acc, x, m, p) if acc else []
        acc = _trim(_rem((acc + [0]) if not acc else acc, m, p))
        acc = _trim(_add(acc, [c % p], p))
    return acc


def _add(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p
                  for i in range(n)])


def _has_factor_brute(f, p):
    """Trial division by every monic polynomial of degree 1..deg/2."""
    r = len(f) - 1
    for d in range(1, r // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            if not _rem(list(f), g, p):
                return True
    return False


# -- table moduli ---------------------------------------------------------------

@pytest.mark.parametrize("p,r", [(p, r) for p in (2, 3, 5) for r in range(1, 7)
                                 if p**r <= 5**4])
def test_table_modulus_irreducible_brute_force(p, r):
    f = CONWAY[p, r]
    assert len(f) == r + 1 and f[-1] == 1
    assert not _has_factor_brute(f, p)
    assert is_irreducible_mod_p(f, p)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_table_modulus_primitive(p):
    for r in range(1, 7 if p == 2 else 5):
        f = CONWAY[p, r]
        order = p**r - 1
        x = [0, 1] if r > 1 else [(-f[0]) % p]
        assert _powmod(x, order, f, p) == [1]
        for ell in {q for q in range(2, order + 1) if order % q == 0 and
                    all(q % k for k in range(2, int(q**0.5) + 1))}:
            assert _powmod(x, order // ell, f, p) != [1]


@pytest.mark.parametrize("p,d,n", [(2, 1, 2), (2, 2, 4), (2, 3, 6), (2, 2, 6), (2, 4, 8),
                                   (2, 6, 12), (3, 2, 4), (3, 1, 3), (5, 2, 4)])
def test_table_norm_compatibility(p, d, n):
    """g_n^((p^n-1)/(p^d-1)) is a root of the degree-d table polynomial."""
    fn, fd = CONWAY[p, n], CONWAY[p, d]
    k = (p**n - 1) // (p**d - 1)
    root = _powmod([0, 1], k, fn, p)
    assert _evaluate_at(fd, root, fn, p) == []


def test_all_table_entries_irreducible():
    for (p, r), f in CONWAY.items():
        assert is_irreducible_mod_p(list(f), p), (p, r)


# -- arithmetic -------------------------------------------------------------------

def test_defining_relation_f4():
    F4 = GF(2, 2)
    w = F4.gen
    assert w * w == w + 1
    assert F4.one.inverse() == F4.one
    assert format_fq(w * w) == "(1 + a)"


def test_f8_inverses_exhaustive():
    F8 = GF(2, 3)
    nonzero = [a for a in F8.elements() if not a.is_zero()]
    assert len(nonzero) == 7
    for a in nonzero:
        assert a * a.inverse() == F8.one


def test_zero_inverse_raises():
    with pytest.raises(DivisionByZero):
        GF(3, 2).zero.inverse()


@pytest.mark.parametrize("p,r", SMALL)
def test_frobenius_is_automorphism_exhaustive(p, r):
    F = GF(p, r)
    elems = list(F.elements())
    if len(elems) > 64:
        elems = random.Random(1).sample(elems, 64)
    for a, b in itertools.product(elems, repeat=2):
        assert (a * b).frobenius(1) == a.frobenius(1) * b.frobenius(1)
        assert (a + b).frobenius(1) == a.frobenius(1) + b.frobenius(1)


@pytest.mark.parametrize("p,r", SMALL)
def test_frobenius_matches_power(p, r):
    for a in GF(p, r).elements():
        assert a.frobenius(1) == a**p
        assert frobenius_s(frobenius_s(a, 2), 2, inverse=True) == a
        assert a.frobenius(-1).frobenius(1) == a


def test_frobenius_examples():
    w = GF(2, 2).gen
    assert frobenius_s(w, 1) == w**2
    assert frobenius_s(w, 1, inverse=True) == w**2


def test_cross_field_arithmetic_lifts_to_compositum():
    a = GF(2, 2).gen
    b = GF(2, 3).gen
    c = a * b
    assert c.field.r == 6
    assert c / b == a.embed(GF(2, 6))


@pytest.mark.parametrize("p,chain", [(2, (1, 2, 4)), (2, (2, 4, 8)), (2, (1, 3, 6)),
                                     (2, (2, 6, 12)), (3, (1, 2, 4)), (5, (1, 2, 4))])
def test_embedding_compatibility(p, chain):
    r1, r2, r3 = chain
    for a in list(GF(p, r1).elements())[:64]:
        assert a.embed(GF(p, r2)).embed(GF(p, r3)) == a.embed(GF(p, r3))


def test_embedding_is_ring_map():
    F4, F16 = GF(2, 2), GF(2, 4)
    for a, b in itertools.product(F4.elements(), repeat=2):
        assert (a * b).embed(F16) == a.embed(F16) * b.embed(F16)
        assert (a + b).embed(F16) == a.embed(F16) + b.embed(F16)


def test_custom_modulus_field():
    K = GF(2, 2, modulus=[1, 1, 1])
    assert K.gen * K.gen == K.gen + 1
    with pytest.raises(ValueError):
        GF(2, 2, modulus=[1, 0, 1])  # x^2 + 1 = (x + 1)^2


def test_coerce_to_subfield():
    F4, F16 = GF(2, 2), GF(2, 4)
    w = F4.gen
    assert coerce_to(w.embed(F16), F4) == w
    with pytest.raises(IncompatibleFields):
        coerce_to(F16.gen, F4)


# -- projective enumeration --------------------------------------------------------

def test_p1_f2_points():
    F2 = GF(2)
    pts = enumerate_proj_points(F2, 1)
    assert {tuple(c.index() for c in y) for y in pts} == {(1, 0), (1, 1), (0, 1)}


@pytest.mark.parametrize("p,r,N", [(p, r, N) for (p, r) in [(2, 1), (2, 2), (3, 1), (2, 3),
                                                               (2, 4), (3, 2), (5, 1)]
                                   for N in (1, 2, 3) if (p**r) ** N <= 4096])
def test_enumeration_count_and_uniqueness(p, r, N):
    pts = enumerate_proj_points(GF(p, r), N)
    assert len(pts) == proj_point_count(p**r, N) == (p ** (r * (N + 1)) - 1) // (p**r - 1)
    assert len(set(pts)) == len(pts)
    for y in pts:
        first = next(c for c in y if not c.is_zero())
        assert first.is_one()


def test_field_of_definition_examples():
    F4, F8 = GF(2, 2), GF(2, 3)
    assert field_of_definition((F4.one, F4.one)) == 1
    assert field_of_definition((F4.one, F4.gen)) == 2
    assert field_of_definition((F8.one, F8.gen)) == 3
    assert field_of_definition((F4.one, F4.gen), s=2) == 1


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 10**6), st.integers(0, 10**6), st.integers(1, 5))
def test_inverse_frobenius_roundtrip_property(pr, i, j, s):
    p, r = pr
    F = GF(p, r)
    a = F.from_index(i % F.order)
    b = F.from_index(j % F.order)
    assert frobenius_s(frobenius_s(a, s), s, inverse=True) == a
    assert frobenius_s(a * b, s) == frobenius_s(a, s) * frobenius_s(b, s)
    if not b.is_zero():
        assert (a / b) * b == a
