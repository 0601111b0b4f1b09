from functools import partial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poissonkit.calculus import (
    HAMILTONIAN_SIGN,
    anchor_form,
    anchor_lift,
    compositional_product,
    deviation_bracket,
    dual_boundary_check,
    exterior_derivative,
    form_schouten_bracket,
    hamiltonian_vector,
    koszul_delta,
    koszul_delta_explicit,
    lichnerowicz,
    schouten,
    schouten_dual_oracle,
    schouten_from_oracle,
    star,
    supercommutator_differential_check,
)
from poissonkit.errors import DegreeError, UnverifiedStructureError
from poissonkit.exterior import DiffForm, MultiVector, parse_form, parse_multivector, wedge
from poissonkit.ring import Poly, parse_poly

from strategies import forms, multivectors, polys

XYZ = ("x", "y", "z")


def mv(text):
    return parse_multivector(text, XYZ)


def f(text):
    return parse_poly(text, XYZ)


def test_vector_field_bracket_is_lie_bracket():
    X = mv("y*e(1)")
    Y = mv("x*e(2)")
    # [y d_x, x d_y] = y d_y - x d_x
    assert schouten(X, Y) == mv("y*e(2) - x*e(1)")


def test_field_on_function_both_orders():
    X = mv("y*e(1) + e(3)")
    g = MultiVector.scalar(f("x^2 + z"))
    assert schouten(X, g) == MultiVector.scalar(f("2*x*y + 1"))
    assert schouten(g, X) == schouten(X, g)


def test_hamiltonian_sign_pinned(so3):
    P = so3.bivector
    g = f("x*y")
    assert HAMILTONIAN_SIGN == 1
    assert schouten(P, MultiVector.scalar(g)) == hamiltonian_vector(P, g) * HAMILTONIAN_SIGN


def test_compositional_product_vanishes_on_functions():
    g = MultiVector.scalar(f("x"))
    assert compositional_product(g, mv("e(1)"), []) == 0


def test_so3_square_vanishes(so3):
    assert schouten(so3.bivector, so3.bivector).is_zero()


def test_non_jacobi_square(non_jacobi):
    assert schouten(non_jacobi.bivector, non_jacobi.bivector) == mv("2*e(1,2,3)")


def test_operators_need_verified_structure(non_jacobi):
    with pytest.raises(UnverifiedStructureError):
        koszul_delta(non_jacobi, parse_form("dx(1)", XYZ))
    with pytest.raises(UnverifiedStructureError):
        lichnerowicz(non_jacobi, mv("e(1)"))


def test_star_needs_top_form(so3):
    with pytest.raises(DegreeError):
        star(so3, parse_form("dx(1,2)", XYZ), f("1"))


def test_explicit_boundary_of_generator(so3):
    # delta(x dy) = {x, y}
    w = wedge(DiffForm.scalar(f("x")), DiffForm.differential(f("y")))
    assert koszul_delta(so3, w) == koszul_delta_explicit(so3, f("x"), f("y"))
    assert koszul_delta(so3, w).scalar_part() == f("z")


def test_anchor_of_exact_forms(so3):
    w = DiffForm.differential(f("x"))
    assert anchor_form(so3, w) == hamiltonian_vector(so3.bivector, f("x"))
    assert anchor_lift(so3, f("1"), f("x")) == anchor_form(so3, w)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_oracles_agree(a, b, data):
    u = data.draw(multivectors(3, a, 1))
    v = data.draw(multivectors(3, b, 1))
    s = schouten(u, v)
    assert s == schouten_from_oracle(u, v)
    k = a + b - 1
    if 0 <= k <= 3:
        from poissonkit.exterior import pair

        w = data.draw(forms(3, k, 1))
        expected = pair(w, s) if not (s.is_zero() or w.is_zero()) else 0
        assert schouten_dual_oracle(u, v, w) == expected


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.data())
def test_graded_jacobi_and_leibniz(a, b, c, data):
    u, v, w = (data.draw(multivectors(3, k, 1)) for k in (a, b, c))
    sg = lambda k: -1 if k % 2 else 1
    jac = (
        schouten(schouten(u, v), w) * sg(a * c)
        + schouten(schouten(v, w), u) * sg(a * b)
        + schouten(schouten(w, u), v) * sg(b * c)
    )
    assert jac.is_zero()
    assert schouten(u, v) == schouten(v, u) * sg(a * b)
    assert schouten(u, wedge(v, w)) == wedge(schouten(u, v), w) + wedge(v, schouten(u, w)) * sg(
        (a + 1) * b
    )


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2), st.data())
def test_supercommutator_is_minus_d(k, data):
    w = data.draw(forms(3, k))
    fields = [data.draw(multivectors(3, 1)) for _ in range(k + 1)]
    lhs, rhs = supercommutator_differential_check(w, fields)
    assert lhs == rhs


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_form_bracket_is_boundary_deviation(so3, a, b, data):
    al = data.draw(forms(3, a, 1))
    be = data.draw(forms(3, b, 1))
    assert form_schouten_bracket(so3, al, be) == deviation_bracket(partial(koszul_delta, so3), al, be)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 3), st.data())
def test_squares_vanish(so3, k, data):
    w = data.draw(forms(3, k))
    u = data.draw(multivectors(3, k))
    assert exterior_derivative(exterior_derivative(w)).is_zero()
    assert koszul_delta(so3, koszul_delta(so3, w)).is_zero()
    assert lichnerowicz(so3, lichnerowicz(so3, u)).is_zero()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2), st.data())
def test_dual_boundary(so3, k, data):
    u = data.draw(multivectors(3, k))
    w = data.draw(forms(3, k + 1))
    lhs, rhs = dual_boundary_check(so3, w, u)
    assert lhs == rhs


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2), st.data())
def test_anchor_chain_map(so3, k, data):
    gens = [data.draw(polys(3)) for _ in range(k + 1)]
    w = anchor_lift(so3, gens[0], *gens[1:])
    form = DiffForm.scalar(gens[0])
    for g in gens[1:]:
        form = wedge(form, DiffForm.differential(g))
    assert anchor_form(so3, form) == w
    assert anchor_form(so3, exterior_derivative(form)) == lichnerowicz(so3, anchor_form(so3, form))


XY = ("x", "y")


def test_lie_bracket_worked_example():
    assert schouten(mv("x*e(2)"), mv("y*e(1)")) == mv("x*e(1) - y*e(2)")


def test_dual_oracle_worked_example():
    assert schouten_dual_oracle(mv("x*e(2)"), mv("y*e(1)"), parse_form("dx(1)", XYZ)) == f("x")


def test_exterior_derivative_examples():
    assert exterior_derivative(parse_form("x*dx(2)", XY)) == parse_form("dx(1,2)", XY)
    assert exterior_derivative(DiffForm.scalar(parse_poly("x*y", XY))) == parse_form("y*dx(1) + x*dx(2)", XY)


def test_boundary_examples(r2, so3):
    x, y = (parse_poly(v, XY) for v in XY)
    assert koszul_delta(r2, parse_form("x*dx(2)", XY)) == DiffForm.scalar(Poly.const(2, 1))
    assert koszul_delta(r2, parse_form("dx(1,2)", XY)).is_zero()
    assert koszul_delta_explicit(r2, x, y) == DiffForm.scalar(Poly.const(2, 1))
    one = Poly.const(3, 1)
    assert koszul_delta_explicit(so3, one, f("x"), f("y")) == -parse_form("dx(3)", XYZ)


def test_anchor_and_star_examples(r2):
    x, y = (parse_poly(v, XY) for v in XY)
    one = Poly.const(2, 1)
    assert anchor_lift(r2, one, x) == parse_multivector("e(2)", XY)
    assert anchor_lift(r2, one, x, y) == parse_multivector("e(1,2)", XY)
    top = parse_form("dx(1,2)", XY)
    assert star(r2, top, one) == top
    assert star(r2, top, x, y) == parse_form("-x*dx(2)", XY)
    assert star(r2, top, one, x, y) == DiffForm.scalar(one)


def test_supercommutator_worked_example():
    lhs, rhs = supercommutator_differential_check(
        parse_form("x*dx(2)", XY), [parse_multivector("e(1)", XY), parse_multivector("e(2)", XY)]
    )
    assert lhs == rhs == -1


def test_form_pairing_examples(r2):
    from poissonkit.calculus import form_pairing_p

    a, b = parse_form("dx(1)", XY), parse_form("dx(2)", XY)
    assert form_pairing_p(r2, a, b) == DiffForm.scalar(Poly.const(2, 1))
    g = DiffForm.scalar(parse_poly("x", XY))
    assert form_pairing_p(r2, g, b).is_zero()
    assert form_schouten_bracket(r2, a, b).is_zero()


def test_dual_boundary_examples(r2):
    x = MultiVector.scalar(parse_poly("x", XY))
    lhs, rhs = dual_boundary_check(r2, parse_form("dx(1)", XY), x)
    assert lhs == rhs == 0
    lhs, rhs = dual_boundary_check(r2, parse_form("dx(1,2)", XY), parse_multivector("e(1)", XY))
    assert lhs == rhs
