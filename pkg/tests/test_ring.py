from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poissonkit.errors import DimensionError, ParseError
from poissonkit.ring import Poly, monomials_up_to, parse_poly

from strategies import polys

XYZ = ("x", "y", "z")


def test_parse_and_print_round_trip():
    f = parse_poly("3/2*x^2*y - z", XYZ)
    assert f.to_str(XYZ) == "3/2*x^2*y - z"
    assert parse_poly(f.to_str(XYZ), XYZ) == f


def test_grlex_display_order():
    f = parse_poly("1 + z + x + y^2 + x*y", XYZ)
    assert f.to_str(XYZ) == "x*y + y^2 + x + z + 1"


@pytest.mark.parametrize(
    "text, column",
    [("x + w", 5), ("x ** 2", None), ("x / y", None), ("x^-1", None), ("(x", None), ("x^1.5", None)],
)
def test_parse_errors(text, column):
    with pytest.raises(ParseError) as info:
        parse_poly(text, XYZ)
    if column is not None:
        assert f"(column {column})" in str(info.value)


def test_division_by_rational_constant():
    assert parse_poly("x/2", XYZ) == Poly.var(3, 0) * Fraction(1, 2)


def test_monomial_count():
    assert len(monomials_up_to(3, 4)) == 35
    assert monomials_up_to(2, 1) == ((0, 0), (0, 1), (1, 0))


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        Poly.var(2, 0) + Poly.var(3, 0)


def test_exact_evaluation():
    f = parse_poly("x^2 - y/3", XYZ)
    assert f((Fraction(1, 2), 1, 0)) == Fraction(1, 4) - Fraction(1, 3)


def test_zero_degree_convention():
    assert Poly.zero(2).degree == -1
    assert Poly.const(2, 5).degree == 0


@settings(max_examples=60)
@given(polys(3), polys(3), polys(3))
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == 0


@settings(max_examples=60)
@given(polys(3), polys(3), st.integers(0, 2))
def test_partial_is_a_derivation(f, g, i):
    assert (f * g).partial(i) == f.partial(i) * g + f * g.partial(i)


@settings(max_examples=40)
@given(polys(2), polys(2), polys(2))
def test_substitution_is_a_homomorphism(f, g, h):
    vals = (g, h)
    assert (f * f).substitute(vals) == f.substitute(vals) * f.substitute(vals)


@settings(max_examples=40)
@given(polys(3, degree=3))
def test_print_parse_round_trip(f):
    assert parse_poly(f.to_str(XYZ), XYZ) == f
