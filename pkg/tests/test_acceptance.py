"""Acceptance gate: one test per criterion, one PASS/FAIL line per criterion.

The lines are printed in the pytest terminal summary (see conftest.py) and
when this file is run directly with ``python3 tests/test_acceptance.py``.
"""

import math
import time

import numpy as np
from poissonkit import checks
from poissonkit.checks import RandomSource
from poissonkit.exterior import wedge
from poissonkit.files import load_chart, load_structure
from poissonkit.homology import (
    DistributionFunctional,
    TruncationSpec,
    casimir_distributions,
    casimir_space,
    check_star_hypotheses,
    h0_canonical,
    star_matrix_identity,
)
from poissonkit import linalg
from poissonkit.numeric import (
    FlowSpec,
    bracket_invariance_check,
    compile_poly,
    dirac_pairing,
    flow,
    leaf_distribution_check,
    leaf_integrate,
    top_power_bracket_check,
    top_power_sign,
)
from poissonkit.poisson import involutivity_criterion, symplectic_form
from poissonkit.ring import Poly, parse_poly

from conftest import DATA

RESULTS = {}
CORPUS = ["so3", "r2_symplectic", "singular_r2", "zero", "r4_symplectic"]


def structure(name):
    return load_structure(DATA / f"{name}.json")


def record(number, ok, detail):
    RESULTS[number] = (ok, detail)
    line = f"AC{number:>2} {'PASS' if ok else 'FAIL'}: {detail}"
    print(line)
    assert ok, line


def test_ac01_superalgebra_laws():
    t = time.perf_counter()
    res = checks.superalgebra_laws(RandomSource(101), 200, max_vars=3, max_degree=3, coeff_degree=2)
    elapsed = time.perf_counter() - t
    record(1, res.ok and res.cases == 200 and elapsed < 30,
           f"antisymmetry/Jacobi/Leibniz on {res.cases} triples, {res.failures} failures, {elapsed:.1f}s")


def test_ac02_oracle_agreement():
    res = checks.oracle_agreement(RandomSource(102), 200)
    record(2, res.ok and res.cases == 200, f"structural = shuffle oracle = dual oracle on {res.cases} cases")


def test_ac03_supercommutator():
    res = checks.supercommutator_differential(RandomSource(103), 100)
    record(3, res.ok and res.cases == 100, f"supercommutator = -d on {res.cases} cases")


def test_ac04_chain_map_and_boundary_deviation():
    failures = 0
    for name in ("so3", "r2_symplectic"):
        p = structure(name)
        src = RandomSource(104)
        failures += checks.chain_map(p, src, 100).failures
        failures += checks.boundary_deviation(p, src, 100).failures
    record(4, failures == 0, f"chain map and form-bracket deviation, 2 x 2 x 100 cases, {failures} failures")


def test_ac05_coboundary_laws():
    failures = cases = 0
    for name in CORPUS:
        p = structure(name)
        pw = checks.squares_vanish(p, RandomSource(105), 100)
        mats = checks.squares_vanish_truncated(p, 3)
        failures += pw.failures + mats.failures
        cases += pw.cases + mats.cases
    record(5, failures == 0, f"d^2 = dp^2 = delta^2 = 0 pointwise and as matrices, {cases} checks")


def test_ac06_star_identity():
    r2, r4 = structure("r2_symplectic"), structure("r4_symplectic")
    om4 = symplectic_form(r4)
    tops = [(r2, symplectic_form(r2)), (r4, wedge(om4, om4))]
    shapes = []
    ok = True
    for p, top in tops:
        hyps = check_star_hypotheses(p, top)
        ok &= all(hyps.values())
        for k in (1, 2):
            r = star_matrix_identity(p, top, k, 3)
            ok &= r.holds
            shapes.append(f"{r.shape[0]}x{r.shape[1]}")
    record(6, ok, f"*delta = (-1)^k d* entrywise, k = 1, 2, bound 3, matrices {', '.join(shapes)}")


def test_ac07_involutivity_and_four_form():
    src = RandomSource(107)
    ok = True
    for name in CORPUS:
        p = structure(name)
        ok &= p.verified and all(involutivity_criterion(p, src.point(p.num_vars)) for _ in range(20))
    bad = structure("non_jacobi")
    ok &= all(not involutivity_criterion(bad, src.point(3)) for _ in range(20))
    ff = checks.four_form_expansion(src, 100)
    record(7, ok and ff.ok and ff.cases == 100,
           f"criterion true on {len(CORPUS)} x 20 points, false on 20 non-Jacobi points; "
           f"four-form expansion {ff.cases} cases")


def test_ac08_casimirs():
    so3 = casimir_space(structure("so3"), 4)
    spec = TruncationSpec("function", 0, 4, 3)
    C = parse_poly("x^2 + y^2 + z^2", ("x", "y", "z"))
    cols = [spec.coordinates(f) for f in so3]
    spans = all(linalg.solve_in_span(cols, spec.coordinates(g)) is not None for g in (Poly.const(3, 1), C, C * C))
    r2 = casimir_space(structure("r2_symplectic"), 4)
    sing = casimir_space(structure("singular_r2"), 4)
    ok = len(so3) == 3 and spans and len(r2) == 1 and len(sing) == 1 and sing[0].is_constant()
    record(8, ok, f"dimensions so(3) {len(so3)} = span(1, C, C^2), R^2 {len(r2)}, singular {len(sing)}")


def test_ac09_distribution_duality():
    ok = True
    for name in CORPUS:
        p = structure(name)
        for d in range(5):
            ok &= len(casimir_distributions(p, d)) == h0_canonical(p, d).dimension
    sing = structure("singular_r2")
    dists = casimir_distributions(sing, 2)
    dirac = DistributionFunctional.dirac((0, 0), dists[0].spec)
    contains = linalg.solve_in_span([dict(enumerate(d.coeffs)) for d in dists], dict(enumerate(dirac.coeffs)))
    src = RandomSource(109)
    pairs_ok = all(dirac_pairing(sing, (0, 0), src.poly(2, 3), src.poly(2, 3)) == 0 for _ in range(50))
    ok &= len(dists) == 5 and contains is not None and pairs_ok
    record(9, ok, f"dim F0 = dim H0 for d <= 4 on {len(CORPUS)} structures; singular d=2 dimension {len(dists)} "
                  f"contains delta_0; 50 Dirac pairings vanish")


def test_ac10_leaf_distribution():
    t = time.perf_counter()
    so3 = structure("so3")
    chart = load_chart(DATA / "sphere_chart.json")
    area = leaf_integrate(so3, chart, Poly.const(3, 1))
    z2 = leaf_integrate(so3, chart, parse_poly("z^2", so3.names))
    src = RandomSource(110)
    worst = max(leaf_distribution_check(so3, chart, src.poly(3, 3), src.poly(3, 3)) for _ in range(20))
    elapsed = time.perf_counter() - t
    ok = abs(area - 4 * math.pi) < 1e-6 and abs(z2 - 4 * math.pi / 3) < 1e-6 and worst < 1e-8 and elapsed < 10
    record(10, ok, f"area err {abs(area - 4 * math.pi):.1e}, z^2 err {abs(z2 - 4 * math.pi / 3):.1e}, "
                   f"max |<delta_N, {{phi, psi}}>| {worst:.1e}, {elapsed:.1f}s")


def test_ac11_flow():
    so3 = structure("so3")
    src = RandomSource(111)
    C = compile_poly(parse_poly("x^2 + y^2 + z^2", so3.names))
    drift = 0.0
    for _ in range(5):
        traj = flow(so3, FlowSpec(src.poly(3, 2, 4), src.point(3), 1.0, 1000))
        drift = max(drift, float(np.abs(C(traj) - C(traj[0])).max()))
    residual = 0.0
    for _ in range(10):
        h = src.poly(3, 2, 4)
        spec = FlowSpec(h, tuple(float(c) for c in src.point(3, 1, 2)), 1.0, 1000)
        t = float(src.integer(1, 10)) / 10
        residual = max(residual, bracket_invariance_check(so3, spec, src.poly(3, 2), src.poly(3, 2), t=t))
    record(11, drift < 1e-8 and residual < 1e-5,
           f"Casimir drift {drift:.1e} over 1e3 steps, max bracket-invariance residual {residual:.1e}")


def test_ac12_top_power_sign():
    r2 = symplectic_form(structure("r2_symplectic"))
    r4 = symplectic_form(structure("r4_symplectic"))
    sigma = top_power_sign(r2)
    src = RandomSource(112)
    ok = top_power_sign(r4) == sigma
    for om, n in ((r2, 2), (r4, 4)):
        for _ in range(50):
            ok &= top_power_bracket_check(om, src.poly(n, 3), src.poly(n, 3), sign=sigma).holds
    record(12, ok, f"{{f, g}} w^k = sigma k dg ^ df ^ w^(k-1) with sigma = {sigma} on 2 x 50 cases")


if __name__ == "__main__":
    import sys

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_ac")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
