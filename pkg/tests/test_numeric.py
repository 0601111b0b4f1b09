import json
import math
from fractions import Fraction

import numpy as np
import pytest

from poissonkit.checks import RandomSource
from poissonkit.errors import ChartError, DegreeError, NumericError
from poissonkit.exterior import parse_form
from poissonkit.numeric import (
    FlowSpec,
    LeafChart,
    bracket_invariance_check,
    compile_poly,
    dirac_pairing,
    flow,
    leaf_distribution_check,
    leaf_form_at,
    leaf_integrate,
    top_power_bracket_check,
    top_power_sign,
)
from poissonkit.poisson import singular_locus_polys
from poissonkit.ring import Poly, parse_poly

from conftest import GOLDEN


def P(text, p):
    return parse_poly(text, p.names)


def test_compile_poly_matches_exact():
    f = parse_poly("x^2*y - 3*z + 1/2", ("x", "y", "z"))
    pt = (Fraction(1, 2), -2, Fraction(5, 4))
    assert compile_poly(f)(np.array(pt, dtype=float)) == pytest.approx(float(f.eval(pt)))


def test_rotation_about_z(so3):
    traj = flow(so3, FlowSpec(P("z", so3), (1, 0, 0), math.pi / 2, 1000))
    np.testing.assert_allclose(traj[-1], [0, -1, 0], atol=1e-12)


def test_constant_hamiltonian_is_stationary(so3):
    traj = flow(so3, FlowSpec(Poly.const(3, 2), (0.3, 0.4, 0.5), 1.0, 10))
    assert np.all(traj == traj[0])


def test_flow_spec_contract():
    with pytest.raises(ValueError):
        FlowSpec(Poly.const(1, 0), (0,), 1.0, 0)
    with pytest.raises(ValueError):
        FlowSpec(Poly.const(1, 0), (0,), math.inf, 1)


def test_blow_up_is_reported(r2):
    with pytest.raises(NumericError):
        # y' = y^2 escapes to infinity in finite time
        flow(r2, FlowSpec(P("x*y^2", r2), (1.0, 1e3), 10.0, 10))


def test_casimir_drift_within_pinned_budget(so3):
    golden = json.loads((GOLDEN / "casimir_drift.json").read_text())
    C = compile_poly(P("x^2 + y^2 + z^2", so3))
    for text in golden["hamiltonians"][:4]:
        for dt in (0.1, 0.05):
            spec = FlowSpec(P(text, so3), tuple(golden["start"]), 1.0, round(1.0 / dt))
            traj = flow(so3, spec)
            drift = np.abs(C(traj) - C(traj[0])).max()
            assert drift < golden["constant"] * dt ** 4 + 1e-12


def test_bracket_invariance(so3, r2):
    spec = FlowSpec(P("z", so3), (1.0, 0.2, 0.3), 0.7, 700)
    assert bracket_invariance_check(so3, spec, P("x", so3), P("y", so3), t=0) < 1e-9
    assert bracket_invariance_check(so3, spec, P("x", so3), P("y", so3)) < 1e-5
    spec2 = FlowSpec(P("x^2/2", r2), (1.0, 0.2), 0.7, 700)
    assert bracket_invariance_check(r2, spec2, P("x", r2), P("y", r2)) < 1e-7


def test_leaf_form_examples(so3, r2):
    assert leaf_form_at(r2, (3, 4), (0, 1), (-1, 0)) == pytest.approx(1.0)
    assert leaf_form_at(so3, (0, 0, 1), (1, 0, 0), (0, 1, 0)) == pytest.approx(1.0)
    assert leaf_form_at(so3, (0, 0, 1), (1, 0, 0), (1, 0, 0)) == 0


def test_leaf_form_antisymmetric(so3):
    src = RandomSource(3)
    for _ in range(10):
        x = np.array([float(src.rational()) for _ in range(3)]) + 0.1
        A = np.array([[0, x[2], -x[1]], [-x[2], 0, x[0]], [x[1], -x[0], 0]])
        u = A.T @ np.array([float(src.rational()) for _ in range(3)])
        v = A.T @ np.array([float(src.rational()) for _ in range(3)])
        assert leaf_form_at(so3, x, u, v) == pytest.approx(-leaf_form_at(so3, x, v, u), abs=1e-12)


def test_leaf_form_rejects_transverse_vector(so3):
    with pytest.raises(NumericError):
        leaf_form_at(so3, (0, 0, 1), (0, 0, 1), (1, 0, 0))


def test_sphere_integrals(so3, sphere_chart):
    assert leaf_integrate(so3, sphere_chart, Poly.const(3, 1)) == pytest.approx(4 * math.pi, abs=1e-6)
    assert leaf_integrate(so3, sphere_chart, P("z", so3)) == pytest.approx(0, abs=1e-10)
    assert leaf_integrate(so3, sphere_chart, P("z^2", so3)) == pytest.approx(4 * math.pi / 3, abs=1e-6)


def test_sphere_quadrature_converged(so3, sphere_chart):
    one = Poly.const(3, 1)
    a = leaf_integrate(so3, sphere_chart.with_nodes((32, 32)), one)
    b = leaf_integrate(so3, sphere_chart, one)
    assert abs(a - b) < 1e-8


def test_leaf_distribution(so3, sphere_chart):
    assert leaf_distribution_check(so3, sphere_chart, P("x", so3), P("x", so3)) == 0.0
    assert leaf_distribution_check(so3, sphere_chart, P("x", so3), P("y", so3)) < 1e-10
    assert leaf_distribution_check(so3, sphere_chart, P("x + x^2", so3), P("y + z^2", so3)) < 1e-8


def test_bad_charts(so3, sphere_chart):
    stretched = LeafChart(sphere_chart.params, sphere_chart.bounds,
                          ("2*sin(theta)*cos(phi)",) + sphere_chart.map[1:], (8, 8))
    with pytest.raises(ChartError) as info:
        leaf_integrate(so3, stretched, Poly.const(3, 1))
    assert info.value.residual > 0.1
    with pytest.raises(ChartError):
        LeafChart(("t",), ((0, 1),), ("t",), (4,))
    bad_fn = LeafChart(sphere_chart.params, sphere_chart.bounds, ("exp(theta)", "0", "0"), (4, 4))
    with pytest.raises(ChartError):
        bad_fn.expressions()


def test_dirac_pairing(singular, so3):
    x, y = P("x", singular), P("y", singular)
    assert dirac_pairing(singular, (0, 0), x, y) == 0
    assert dirac_pairing(singular, (1, 0), x, y) == 1
    assert dirac_pairing(so3, (1, 2, 3), P("x*y", so3), P("x*y", so3)) == 0


def test_dirac_at_singular_locus(singular):
    src = RandomSource(9)
    (_, polys), = singular_locus_polys(singular)
    assert all(p.eval((0, 0)) == 0 for p in polys)
    for _ in range(10):
        assert dirac_pairing(singular, (0, 0), src.poly(2, 3), src.poly(2, 3)) == 0


def test_top_power_identity():
    r2 = parse_form("dx(1,2)", ("x", "y"))
    r4 = parse_form("dx(1,2) + dx(3,4)", ("a", "b", "c", "d"))
    assert top_power_sign(r2) == top_power_sign(r4) == -1
    src = RandomSource(1)
    for _ in range(5):
        f, g = src.poly(4, 3), src.poly(4, 3)
        assert top_power_bracket_check(r4, f, g)
    f = src.poly(2, 3)
    res = top_power_bracket_check(r2, f, f)
    assert res.lhs.is_zero() and res.rhs.is_zero()


def test_top_power_needs_even_dimension():
    with pytest.raises(DegreeError):
        top_power_sign(parse_form("dx(1,2)", ("x", "y", "z")))
