from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from betabranch.poly import (
    IntPolynomial, count_roots, format_polynomial, isolate_intervals, parse_polynomial,
    poly_divmod, poly_gcd, poly_mul, poly_shift, poly_xgcd, poly_add,
)

small_polys = st.lists(st.integers(-9, 9), min_size=1, max_size=7).map(IntPolynomial)


def to_sympy(p):
    x = sympy.Symbol("x")
    return sympy.Poly(sum(c * x**i for i, c in enumerate(p.coeffs)) or 0, x)


def test_parse_roundtrip():
    p = parse_polynomial("x^4-2*x^2-x-1")
    assert p.coeffs == (-1, -1, -2, 0, 1)
    assert str(p) == "x^4-2*x^2-x-1"
    assert parse_polynomial("x**3 - x**2 - x - 1") == IntPolynomial([-1, -1, -1, 1])
    assert parse_polynomial("3").coeffs == (3,)


@pytest.mark.parametrize("bad", ["", "x^", "2x x", "*x", "x^2+"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_polynomial(bad)


def test_normalised_form():
    assert IntPolynomial([1, 2, 0, 0]).coeffs == (1, 2)
    assert IntPolynomial([0, 0]).is_zero()
    assert IntPolynomial([]).degree == -1


def test_product_identity():
    # (x - 1)(x^4 - 2x^2 - x - 1) = x^5 - x^4 - 2x^3 + x^2 + 1
    p = IntPolynomial([-1, 1]) * parse_polynomial("x^4-2*x^2-x-1")
    assert p == parse_polynomial("x^5-x^4-2*x^3+x^2+1")


@given(small_polys, small_polys)
def test_divmod_matches_sympy(a, b):
    if b.is_zero():
        return
    q, r = poly_divmod(a.coeffs, b.coeffs)
    sq, sr = sympy.div(to_sympy(a), to_sympy(b), domain="QQ")
    assert poly_add(poly_mul(q, b.coeffs), r) == a.coeffs
    assert len(r) < len(b.coeffs)
    assert [Fraction(int(c.p), int(c.q)) for c in reversed(sr.all_coeffs())] == list(r) or sr.is_zero


@given(small_polys, small_polys)
def test_xgcd_bezout(a, b):
    if a.is_zero() and b.is_zero():
        return
    g, s, t = poly_xgcd(a.coeffs, b.coeffs)
    assert poly_add(poly_mul(s, a.coeffs), poly_mul(t, b.coeffs)) == g
    assert g == poly_gcd(a.coeffs, b.coeffs)


@given(small_polys)
def test_sturm_count_matches_sympy(p):
    if p.degree < 1:
        return
    sf = p.squarefree_part()
    n = count_roots(sf.coeffs, Fraction(-3), Fraction(3))
    assert n == sympy.Poly(to_sympy(sf)).count_roots(-3, 3) - (1 if sf(-3) == 0 else 0)


def test_isolate_intervals_two_roots():
    # (x^2 - 2)(x - 3/2) has roots sqrt2 and 3/2 in (1, 2)
    p = IntPolynomial([-2, 0, 1]) * IntPolynomial([-3, 2])
    ivs = isolate_intervals(p.coeffs, 1, 2)
    assert len(ivs) == 2
    for a, b in ivs:
        assert p(a) != 0 and p(b) != 0
        assert (p(a) > 0) != (p(b) > 0)


def test_shift_and_reverse():
    p = parse_polynomial("x^2-x-1")
    assert poly_shift(p.coeffs, 1) == parse_polynomial("x^2+x-1").coeffs
    assert p.reversed() == parse_polynomial("-x^2-x+1")
    assert format_polynomial(()) == "0"


def test_squarefree_part():
    p = IntPolynomial([-1, 1]) * IntPolynomial([-1, 1]) * IntPolynomial([1, 1])
    assert not p.is_squarefree()
    assert p.squarefree_part() == parse_polynomial("x^2-1")
