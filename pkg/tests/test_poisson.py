from fractions import Fraction

import pytest

from poissonkit.errors import DegreeError, UnverifiedStructureError
from poissonkit.exterior import parse_form, parse_multivector
from poissonkit.poisson import (
    anchor_rank,
    bivector_from_form,
    bracket,
    four_form_expansion_check,
    hamiltonian_field,
    involutivity_criterion,
    jacobi_check,
    rank_at,
    singular_locus_polys,
    symplectic_form,
)
from poissonkit.ring import parse_poly

XYZ = ("x", "y", "z")


def test_so3_bracket_table(so3):
    assert so3.verified
    table = {k: v.to_str(XYZ) for k, v in so3.bracket_table().items()}
    assert table == {(1, 2): "z", (1, 3): "-y", (2, 3): "x"}


def test_non_jacobi_witness(non_jacobi):
    assert not non_jacobi.verified
    assert non_jacobi.witness[0] == (1, 2, 3)
    assert non_jacobi.jacobi_sum == 1


def test_zero_structure_is_poisson(zero):
    assert zero.verified


def test_non_bivector_rejected():
    with pytest.raises(DegreeError):
        jacobi_check(parse_multivector("e(1)", XYZ))


def test_unverified_bracket_refused(non_jacobi):
    with pytest.raises(UnverifiedStructureError):
        bracket(non_jacobi, parse_poly("x", XYZ), parse_poly("y", XYZ))


def test_casimir_has_zero_hamiltonian_field(so3):
    C = parse_poly("x^2 + y^2 + z^2", XYZ)
    assert hamiltonian_field(so3, C).is_zero()


@pytest.mark.parametrize("point, rank", [((0, 0, 0), 0), ((1, 0, 0), 2), ((1, 2, 3), 2)])
def test_so3_rank(so3, point, rank):
    assert rank_at(so3, point) == rank
    assert anchor_rank(so3, point) == rank


def test_r4_rank_and_singular_locus(r4):
    assert rank_at(r4, (0, 0, 0, 0)) == 4
    locus = singular_locus_polys(r4)
    assert [k for k, _ in locus] == [1, 2]
    assert [c.constant_term() for c in locus[1][1]] == [2]


def test_so3_singular_locus(so3):
    (k, polys), = singular_locus_polys(so3)
    assert k == 1
    assert {p.to_str(XYZ) for p in polys} == {"z", "-y", "x"}


def test_involutivity_true_on_poisson(so3):
    assert involutivity_criterion(so3, (Fraction(1, 2), -1, 2))


def test_involutivity_false_on_non_jacobi(non_jacobi):
    r = involutivity_criterion(non_jacobi, (0, 0, 0))
    assert not r.holds
    assert r.pi_rank == 2
    assert any(r.residual)


def test_symplectic_form_round_trip(r4):
    om = symplectic_form(r4)
    assert om == parse_form("dx(1,2) + dx(3,4)", r4.names)
    assert bivector_from_form(om) == r4.bivector


def test_symplectic_form_inverts_brackets(r2):
    # w(X_x, X_y) = {x, y}
    from poissonkit.exterior import pair, wedge

    om = symplectic_form(r2)
    x, y = (parse_poly(v, r2.names) for v in ("x", "y"))
    value = pair(om, wedge(hamiltonian_field(r2, x), hamiltonian_field(r2, y)))
    assert value == bracket(r2, x, y)


def test_four_form_expansion_constant_case():
    names = ("a", "b", "c", "d")
    om = parse_form("dx(1,2)", names)
    al, be = parse_form("dx(3)", names), parse_form("dx(4)", names)
    X = parse_multivector("e(1,2)", names)
    Y = parse_multivector("e(3,4)", names)
    lhs, rhs = four_form_expansion_check(om, al, be, X, Y)
    assert lhs == rhs == 1
