"""Finite field, modulus selection and polynomial layer."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from kisinweights.field import (
    frobenius,
    Context,
    UPoly,
    make_field,
    poly_phi,
    smallest_irreducible,
)


def test_context_validation():
    Context(3, 2, 1)
    with pytest.raises(ValueError):
        Context(4, 2, 1)
    with pytest.raises(ValueError):
        Context(2, 1, 1)
    with pytest.raises(ValueError):
        Context(3, 0, 1)


def test_context_moduli():
    ctx = Context(3, 2, 1)
    assert ctx.m1 == 8
    assert ctx.m2 == 80


def test_smallest_irreducible_degree_one():
    # degree 1: the polynomial u itself (coefficients low-to-high)
    assert smallest_irreducible(3, 1) == (0, 1)
    assert smallest_irreducible(5, 1) == (0, 1)


def test_smallest_irreducible_f9():
    # x^2 + 1 is the lexicographically smallest monic irreducible over F_3
    assert smallest_irreducible(3, 2) == (1, 0, 1)


def test_smallest_irreducible_is_irreducible_brute_force():
    for p, d in [(3, 2), (3, 3), (5, 2), (7, 2)]:
        mod = smallest_irreducible(p, d)
        assert len(mod) == d + 1 and mod[-1] == 1
        # no root-free check shortcut: trial division by every monic poly of
        # degree 1..d//2 over Z/p, done independently with integer arithmetic
        def poly_mul(a, b):
            out = [0] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                for j, bj in enumerate(b):
                    out[i + j] = (out[i + j] + ai * bj) % p
            return out

        def divides(div, target):
            rem = list(target)
            while len(rem) >= len(div) and any(rem):
                while rem and rem[-1] == 0:
                    rem.pop()
                if len(rem) < len(div):
                    break
                coef = rem[-1]
                shift = len(rem) - len(div)
                for i, c in enumerate(div):
                    rem[shift + i] = (rem[shift + i] - coef * c) % p
            return not any(rem)

        import itertools

        for deg in range(1, d // 2 + 1):
            for lower in itertools.product(range(p), repeat=deg):
                div = list(lower) + [1]
                assert not divides(div, mod)


def test_field_arithmetic_exhaustive_f9():
    F = make_field(3, 2)
    elems = list(F.elements())
    assert len(elems) == 9
    for a in elems:
        for b in elems:
            assert a + b == b + a
            assert a * b == b * a
            if not b.is_zero():
                assert (a * b) / b == a
    for a in elems:
        # Frobenius is the p-power map and a field automorphism
        assert frobenius(a) == a**3
    for a in elems:
        for b in elems:
            assert frobenius(a + b) == frobenius(a) + frobenius(b)
            assert frobenius(a * b) == frobenius(a) * frobenius(b)


def test_frobenius_order():
    F = make_field(3, 3)
    for a in F.elements():
        x = a
        for _ in range(3):
            x = frobenius(x)
        assert x == a


def test_upoly_basics():
    F = make_field(3, 1)
    one = F.one
    u = UPoly.monomial(one, 1)
    q = u * u + UPoly.constant(one)
    assert q.degree() == 2
    assert q.coefficient(0) == one and q.coefficient(2) == one
    assert (q - q).is_zero()
    assert UPoly.zero(F).valuation() == math.inf
    assert q.valuation() == 0
    assert (u * q).valuation() == 1


def test_upoly_shift_unshift():
    F = make_field(3, 1)
    q = UPoly.monomial(F.one, 2) + UPoly.constant(F.elem(2))
    s = q.shift(3)
    assert s.valuation() == 3
    assert s.unshift(3) == q
    assert s.divides_exactly(3)
    assert not s.divides_exactly(4)


def test_poly_phi_semilinearity():
    # phi sends c u^j to c^p u^(p j)
    F = make_field(3, 2)
    g = next(iter(F.units()))
    q = UPoly.monomial(g, 2)
    r = poly_phi(q)
    assert r.degree() == 6
    assert r.coefficient(6) == frobenius(g)


@settings(max_examples=200)
@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_poly_phi_multiplicative(a, b, c):
    F = make_field(3, 2)
    x = UPoly.monomial(F.elem(a % 9), 1) + UPoly.constant(F.elem(b % 9))
    y = UPoly.monomial(F.elem(c % 9), 2) + UPoly.constant(F.one)
    assert poly_phi(x * y) == poly_phi(x) * poly_phi(y)
    assert poly_phi(x + y) == poly_phi(x) + poly_phi(y)
