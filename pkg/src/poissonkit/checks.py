"""Seeded identity suites.

Every randomized check draws from one :class:`RandomSource`, so a failure
is replayable from the printed seed.  A suite returns a :class:`SuiteResult`
holding the first counterexample, rendered as strings.
"""

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import partial

from .calculus import (
    anchor_form,
    deviation_bracket,
    dual_boundary_check,
    exterior_derivative,
    form_schouten_bracket,
    koszul_delta,
    koszul_delta_explicit,
    lichnerowicz,
    schouten,
    schouten_dual_oracle,
    schouten_from_oracle,
    supercommutator_differential_check,
)
from .errors import HypothesisError
from .exterior import DiffForm, MultiVector, pair, wedge, wedge_all
from .homology import TruncationSpec, operator_matrix, star_matrix_identity
from .poisson import four_form_expansion_check, involutivity_criterion
from .ring import Poly, monomials_up_to

__all__ = ["RandomSource", "SuiteResult", "structure_suites", "run_suites"]


class RandomSource:
    """Random exact objects from a single seeded generator."""

    def __init__(self, seed=0):
        self.seed = seed
        self.rng = random.Random(seed)

    def integer(self, lo, hi):
        return self.rng.randint(lo, hi)

    def rational(self, span=3, denom=3):
        return Fraction(self.rng.randint(-span, span), self.rng.randint(1, denom))

    def poly(self, n, degree=2, terms=3, span=3):
        mons = monomials_up_to(n, degree)
        return Poly(n, {self.rng.choice(mons): self.rng.randint(-span, span) for _ in range(terms)})

    def graded(self, cls, n, k, degree=2, density=0.8):
        idxs = list(itertools.combinations(range(n), k))
        terms = {idx: self.poly(n, degree) for idx in idxs if self.rng.random() < density}
        return cls(n, terms)

    def multivector(self, n, k, degree=2):
        return self.graded(MultiVector, n, k, degree)

    def form(self, n, k, degree=2):
        return self.graded(DiffForm, n, k, degree)

    def field(self, n, degree=2):
        return self.multivector(n, 1, degree)

    def point(self, n, span=3, denom=3):
        return tuple(self.rational(span, denom) for _ in range(n))

    def generators(self, n, k, degree=2):
        return [self.poly(n, degree) for _ in range(k + 1)]


def generator_form(gens):
    """``a0 da_1 ^ ... ^ da_k`` from ``[a0, a1, ..., ak]``."""
    a0, rest = gens[0], gens[1:]
    return wedge_all([DiffForm.scalar(a0)] + [DiffForm.differential(a) for a in rest])


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: int = 0
    counterexample: dict = None
    skipped: str = None

    @property
    def ok(self):
        return self.failures == 0

    def record(self, ok, witness):
        self.cases += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = {k: _render(v) for k, v in witness().items()}

    def as_dict(self):
        out = {"name": self.name, "cases": self.cases, "failures": self.failures}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.skipped:
            out["skipped"] = self.skipped
        return out


def _render(v):
    if hasattr(v, "to_str"):
        return v.to_str()
    if isinstance(v, (list, tuple)):
        return [_render(x) for x in v]
    return str(v)


def _sign(k):
    return -1 if k % 2 else 1


def superalgebra_laws(src, cases, max_vars=3, max_degree=3, coeff_degree=2):
    """Graded antisymmetry, graded Jacobi and graded Leibniz on random triples."""
    res = SuiteResult("superalgebra")
    for _ in range(cases):
        n = src.integer(1, max_vars)
        a, b, c = (src.integer(0, min(max_degree, n)) for _ in range(3))
        u = src.multivector(n, a, coeff_degree)
        v = src.multivector(n, b, coeff_degree)
        w = src.multivector(n, c, coeff_degree)
        uv = schouten(u, v)
        anti = uv == schouten(v, u) * _sign(a * b)
        jac = (
            schouten(uv, w) * _sign(a * c)
            + schouten(schouten(v, w), u) * _sign(a * b)
            + schouten(schouten(w, u), v) * _sign(b * c)
        ).is_zero()
        leib = schouten(u, wedge(v, w)) == wedge(uv, w) + wedge(v, schouten(u, w)) * _sign(
            (a + 1) * b
        )
        res.record(
            anti and jac and leib,
            lambda: {"u": u, "v": v, "w": w, "antisymmetry": anti, "jacobi": jac, "leibniz": leib},
        )
    return res


def oracle_agreement(src, cases, max_vars=3, max_degree=3, coeff_degree=2):
    """Structural bracket against the shuffle-sum and exterior-derivative oracles."""
    res = SuiteResult("oracles")
    for _ in range(cases):
        n = src.integer(1, max_vars)
        a, b = src.integer(0, n), src.integer(0, n)
        u = src.multivector(n, a, coeff_degree)
        v = src.multivector(n, b, coeff_degree)
        s = schouten(u, v)
        ok = s == schouten_from_oracle(u, v)
        k = a + b - 1
        if ok and 0 <= k <= n:
            w = src.form(n, k, coeff_degree)
            dual = schouten_dual_oracle(u, v, w)
            ok = pair(w, s) == dual if not (s.is_zero() or w.is_zero()) else dual == 0
        res.record(ok, lambda: {"u": u, "v": v, "structural": s})
    return res


def supercommutator_differential(src, cases, max_vars=3, coeff_degree=2):
    """The supercommutator of a form with the multiplication map equals ``-d``."""
    res = SuiteResult("supercommutator")
    for _ in range(cases):
        n = src.integer(1, max_vars)
        k = src.integer(0, n - 1)
        w = src.form(n, k, coeff_degree)
        fields = [src.field(n, coeff_degree) for _ in range(k + 1)]
        lhs, rhs = supercommutator_differential_check(w, fields)
        res.record(lhs == rhs, lambda: {"form": w, "fields": fields, "lhs": lhs, "rhs": rhs})
    return res


def four_form_expansion(src, cases, n=4, coeff_degree=1):
    res = SuiteResult("four_form_expansion")
    for _ in range(cases):
        om = src.form(n, 2, coeff_degree)
        al, be = src.form(n, 1, coeff_degree), src.form(n, 1, coeff_degree)
        X, Y = src.multivector(n, 2, coeff_degree), src.multivector(n, 2, coeff_degree)
        lhs, rhs = four_form_expansion_check(om, al, be, X, Y)
        res.record(lhs == rhs, lambda: {"omega": om, "alpha": al, "beta": be, "X": X, "Y": Y})
    return res


def chain_map(p, src, cases, coeff_degree=2):
    """``anchor(d w) = [p, anchor(w)]`` on random generator forms."""
    res = SuiteResult("anchor_chain_map")
    n = p.num_vars
    for _ in range(cases):
        form = generator_form(src.generators(n, src.integer(0, n), coeff_degree))
        lhs = anchor_form(p, exterior_derivative(form))
        rhs = lichnerowicz(p, anchor_form(p, form))
        res.record(lhs == rhs, lambda: {"form": form, "lhs": lhs, "rhs": rhs})
    return res


def boundary_deviation(p, src, cases, coeff_degree=2):
    """The form bracket is the deviation of the boundary from a derivation."""
    res = SuiteResult("boundary_deviation")
    n = p.num_vars
    delta = partial(koszul_delta, p)
    for _ in range(cases):
        a = src.form(n, src.integer(0, n), coeff_degree)
        b = src.form(n, src.integer(0, n), coeff_degree)
        lhs = form_schouten_bracket(p, a, b)
        rhs = deviation_bracket(delta, a, b)
        res.record(lhs == rhs, lambda: {"alpha": a, "beta": b, "lhs": lhs, "rhs": rhs})
    return res


def boundary_generators(p, src, cases, coeff_degree=2):
    """``i_p d - d i_p`` against its expansion through brackets of generators."""
    res = SuiteResult("boundary_generators")
    n = p.num_vars
    for _ in range(cases):
        gens = src.generators(n, src.integer(0, n), coeff_degree)
        lhs = koszul_delta(p, generator_form(gens))
        rhs = koszul_delta_explicit(p, *gens)
        res.record(lhs == rhs, lambda: {"generators": gens, "lhs": lhs, "rhs": rhs})
    return res


def dual_boundary(p, src, cases, coeff_degree=2):
    res = SuiteResult("dual_boundary")
    n = p.num_vars
    for _ in range(cases):
        k = src.integer(0, n - 1)
        u = src.multivector(n, k, coeff_degree)
        w = src.form(n, k + 1, coeff_degree)
        lhs, rhs = dual_boundary_check(p, w, u)
        res.record(lhs == rhs, lambda: {"form": w, "u": u, "lhs": lhs, "rhs": rhs})
    return res


def squares_vanish(p, src, cases, coeff_degree=2):
    """``d^2 = 0``, ``[p, [p, u]] = 0`` and ``delta^2 = 0`` on random elements."""
    res = SuiteResult("squares_pointwise")
    n = p.num_vars
    d = exterior_derivative
    for _ in range(cases):
        w = src.form(n, src.integer(0, n), coeff_degree)
        u = src.multivector(n, src.integer(0, n), coeff_degree)
        dd = d(d(w)).is_zero()
        pp = lichnerowicz(p, lichnerowicz(p, u)).is_zero()
        kk = koszul_delta(p, koszul_delta(p, w)).is_zero()
        res.record(dd and pp and kk, lambda: {"form": w, "u": u, "d2": dd, "dp2": pp, "delta2": kk})
    return res


def squares_vanish_truncated(p, bound):
    """Composed truncated matrices are exactly zero for all three complexes."""
    res = SuiteResult("squares_matrices")
    n = p.num_vars
    for k in range(n + 1):
        dom = TruncationSpec("form", k, bound, n)
        for op in ("d", "delta"):
            first = operator_matrix(op, dom, p)
            second = operator_matrix(op, first.codomain, p)
            res.record(
                second.compose(first).is_zero(), lambda: {"operator": op, "degree": k, "bound": bound}
            )
        flavor = "function" if k == 0 else "multivector"
        first = operator_matrix("lichnerowicz", TruncationSpec(flavor, k, bound, n), p)
        second = operator_matrix("lichnerowicz", first.codomain, p)
        res.record(
            second.compose(first).is_zero(),
            lambda: {"operator": "lichnerowicz", "degree": k, "bound": bound},
        )
    return res


def star_identity(p, top, degrees, bound):
    res = SuiteResult("star_identity")
    try:
        for k in degrees:
            r = star_matrix_identity(p, top, k, bound)
            res.record(r.holds, lambda: {"degree": k, "mismatched_columns": r.mismatches})
    except HypothesisError as exc:
        res.skipped = str(exc)
    return res


def involutivity(p, src, cases, expect=True):
    res = SuiteResult("involutivity")
    n = p.num_vars
    for _ in range(cases):
        x = src.point(n)
        r = involutivity_criterion(p, x)
        res.record(r.holds == expect, lambda: {"point": list(x), "residual": list(r.residual)})
    return res


def structure_suites(p, seed=0, bound=2, cases=20):
    """Every identity suite that applies to a verified structure."""
    src = RandomSource(seed)
    n = p.num_vars
    top = DiffForm.basis(n, tuple(range(n))) if n else None
    suites = [
        superalgebra_laws(src, cases, max_vars=max(1, min(n, 3))),
        oracle_agreement(src, cases, max_vars=max(1, min(n, 3))),
        supercommutator_differential(src, cases, max_vars=max(1, min(n, 3))),
        four_form_expansion(src, cases),
    ]
    if n:
        suites += [
            chain_map(p, src, cases),
            boundary_deviation(p, src, cases),
            boundary_generators(p, src, cases),
            dual_boundary(p, src, cases),
            squares_vanish(p, src, cases),
            squares_vanish_truncated(p, bound),
            star_identity(p, top, range(n + 1), bound),
            involutivity(p, src, cases),
        ]
    return suites


def run_suites(suites):
    """``(all_ok, first_failure_or_None)``."""
    for s in suites:
        if not s.ok:
            return False, s
    return True, None
