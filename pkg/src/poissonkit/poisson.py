"""Poisson structures: Jacobi verification, brackets, rank and involutivity."""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .calculus import bivector_bracket, hamiltonian_vector, schouten, schouten_oracle
from .errors import DegreeError, DimensionError, UnverifiedStructureError
from .exterior import DiffForm, MultiVector, pair, wedge
from .ring import Poly, as_point

__all__ = [
    "InvolutivityResult",
    "PoissonStructure",
    "anchor_matrix",
    "anchor_rank",
    "bivector_from_form",
    "bracket",
    "four_form_expansion_check",
    "hamiltonian_field",
    "involutivity_criterion",
    "jacobi_check",
    "rank_at",
    "singular_locus_polys",
    "symplectic_form",
]

VERIFIED = "verified"
FAILED = "failed"
UNCHECKED = "unchecked"


@dataclass(frozen=True)
class PoissonStructure:
    """A bivector with the outcome of its Jacobi check.

    ``witness`` is ``(triple, value)`` when the check failed: ``triple`` holds
    1-based variable indices and ``value`` is ``[p, p]`` evaluated on those
    coordinates, i.e. twice the cyclic Jacobi sum of the brackets.
    """

    bivector: MultiVector
    status: str = UNCHECKED
    witness: tuple = None
    names: tuple = field(default=None, compare=False)

    def __post_init__(self):
        p = self.bivector
        if not p.is_zero() and p.degrees() != [2]:
            raise DegreeError(f"a Poisson structure is a bivector, got degrees {p.degrees()}")

    @property
    def num_vars(self):
        return self.bivector.num_vars

    @property
    def verified(self):
        return self.status == VERIFIED

    @property
    def coefficient_degree(self):
        """Largest coefficient degree of the bivector (-1 for p = 0)."""
        return self.bivector.coefficient_degree()

    @property
    def jacobi_sum(self):
        if self.witness is None:
            return None
        return self.witness[1] * Fraction(1, 2)

    def bracket_table(self):
        xs = Poly.variables(self.num_vars)
        return {
            (i + 1, j + 1): bivector_bracket(self.bivector, xs[i], xs[j])
            for i, j in itertools.combinations(range(self.num_vars), 2)
        }


def jacobi_check(p_raw, names=None):
    """Verify ``[p, p] = 0`` along two independent routes.

    The structural Schouten square and the compositional-product oracle on
    every coordinate triple must reach the same verdict.
    """
    if isinstance(p_raw, PoissonStructure):
        names = names or p_raw.names
        p_raw = p_raw.bivector
    if not p_raw.is_zero() and p_raw.degrees() != [2]:
        raise DegreeError(f"jacobi_check needs a bivector, got degrees {p_raw.degrees()}")
    n = p_raw.num_vars
    square = schouten(p_raw, p_raw)
    xs = Poly.variables(n)
    witness = None
    for triple in itertools.combinations(range(n), 3):
        value = schouten_oracle(p_raw, p_raw, [xs[i] for i in triple])
        if value != square.coefficient(triple):
            raise AssertionError(
                f"structural and oracle Schouten squares disagree on {triple}"
            )
        if value and witness is None:
            witness = (tuple(i + 1 for i in triple), value)
    if witness is None and not square.is_zero():
        raise AssertionError("nonzero [p, p] without a coordinate witness")
    status = VERIFIED if witness is None else FAILED
    return PoissonStructure(p_raw, status, witness, tuple(names) if names else None)


def _verified(p):
    if not isinstance(p, PoissonStructure) or not p.verified:
        raise UnverifiedStructureError("a Jacobi-verified PoissonStructure is required")
    return p.bivector


def bracket(p, f, g):
    """``{f, g} = p(f, g)``."""
    return bivector_bracket(_verified(p), f, g)


def hamiltonian_field(p, f):
    """``X_f = {f, .}``."""
    return hamiltonian_vector(_verified(p), f)


def anchor_matrix(p, point):
    """Exact matrix ``P[i][j] = {x_i, x_j}(point)``."""
    P = getattr(p, "bivector", p)
    n = P.num_vars
    point = as_point(point, n)
    mat = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), c in P.items():
        v = c.eval(point)
        mat[i][j] += v
        mat[j][i] -= v
    return mat


def _wedge_power(P, k):
    n = P.num_vars
    out = MultiVector.scalar(Poly.const(n, 1))
    for _ in range(k):
        out = wedge(out, P)
    return out


def rank_at(p, point):
    """Largest ``2k`` with ``(p ^ ... ^ p)(x) != 0`` (k factors)."""
    P = getattr(p, "bivector", p)
    point = as_point(point, P.num_vars)
    Px = P.at(point)
    k = 0
    power = _wedge_power(Px, 0)
    while True:
        power = wedge(power, Px)
        if power.is_zero():
            return 2 * k
        k += 1


def anchor_rank(p, point):
    """Dimension of ``span{p~(dx_i)|_x}``: the rank of the bracket matrix."""
    return linalg.dense_rank(anchor_matrix(p, point))


def singular_locus_polys(p):
    """``[(k, coefficients of p^k)]`` for ``k = 1 .. n // 2``.

    The rank at ``x`` is below ``2k`` exactly when every listed polynomial for
    that ``k`` vanishes at ``x``.
    """
    P = getattr(p, "bivector", p)
    out = []
    power = _wedge_power(P, 0)
    for k in range(1, P.num_vars // 2 + 1):
        power = wedge(power, P)
        out.append((k, [c for _, c in power.terms.items()]))
    return out


@dataclass(frozen=True)
class InvolutivityResult:
    holds: bool
    pi_rank: int
    square_at_point: MultiVector
    residual: tuple

    def __bool__(self):
        return self.holds


def involutivity_criterion(p_raw, point):
    """Pointwise test of ``[p, p]|_x`` lying in ``pi(x) ^ pi(x) ^ pi(x)``.

    ``pi(x)`` is spanned by the Hamiltonian directions of the coordinate
    functions.  The residual is the component of ``[p, p]|_x`` orthogonal to
    the triple wedges of a basis of ``pi(x)``, computed exactly.
    """
    P = getattr(p_raw, "bivector", p_raw)
    n = P.num_vars
    point = as_point(point, n)
    mat = anchor_matrix(P, point)
    # columns X_{x_i}(x) have components {x_i, x_j}(x)
    cols = [{j: mat[i][j] for j in range(n) if mat[i][j]} for i in range(n)]
    reduced, _ = linalg.row_reduce(cols)
    basis = [
        MultiVector(n, {(j,): Poly.const(n, v) for j, v in vec.items()}) for vec in reduced
    ]
    square = schouten(P, P).at(point)
    triples = list(itertools.combinations(range(n), 3))
    index = {t: i for i, t in enumerate(triples)}

    def as_vec(mv):
        return {index[t]: c.constant_term() for t, c in mv.items()}

    target = as_vec(square)
    spanning = []
    for a, b, c in itertools.combinations(basis, 3):
        w = as_vec(wedge(wedge(a, b), c))
        if w:
            spanning.append(w)
    residual = _orthogonal_residual(spanning, target, len(triples))
    holds = not any(residual)
    return InvolutivityResult(holds, len(basis), square, tuple(residual))


def _orthogonal_residual(spanning, target, dim):
    """``target`` minus its orthogonal projection onto ``span(spanning)``."""
    reduced, _ = linalg.row_reduce(spanning)
    # Gram-Schmidt over Q on the independent rows
    ortho = []
    for vec in reduced:
        v = [vec.get(i, Fraction(0)) for i in range(dim)]
        for q, qq in ortho:
            f = sum(a * b for a, b in zip(v, q)) / qq
            v = [a - f * b for a, b in zip(v, q)]
        ortho.append((v, sum(a * a for a in v)))
    r = [target.get(i, Fraction(0)) for i in range(dim)]
    for q, qq in ortho:
        f = sum(a * b for a, b in zip(r, q)) / qq
        r = [a - f * b for a, b in zip(r, q)]
    return r


def _sharp(X, alpha):
    """``X~(alpha)``: the vector field ``b -> X(alpha, db)``."""
    n = X.num_vars
    comps = []
    for j in range(n):
        comps.append(pair(wedge(alpha, DiffForm.basis(n, (j,))), X))
    return MultiVector.field(comps)


def four_form_expansion_check(omega, alpha, beta, X, Y):
    """Both sides of the four-form expansion on ``X ^ Y``.

    ``(w ^ a ^ b)(X ^ Y) = w(X)(a ^ b)(Y) + w(Y)(a ^ b)(X)
    - w(X~a, Y~b) + w(X~b, Y~a)``
    """
    for form, k in ((omega, 2), (alpha, 1), (beta, 1)):
        if not form.is_zero() and form.degree != k:
            raise DegreeError(f"expected a {k}-form, got degree {form.degree}")
    for mv in (X, Y):
        if not mv.is_zero() and mv.degree != 2:
            raise DegreeError(f"expected a bivector, got degree {mv.degree}")
    n = omega.num_vars
    if any(v.num_vars != n for v in (alpha, beta, X, Y)):
        raise DimensionError("arguments over different numbers of variables")
    ab = wedge(alpha, beta)
    lhs = pair(wedge(omega, ab), wedge(X, Y))
    rhs = (
        pair(omega, X) * pair(ab, Y)
        + pair(omega, Y) * pair(ab, X)
        - pair(omega, wedge(_sharp(X, alpha), _sharp(Y, beta)))
        + pair(omega, wedge(_sharp(X, beta), _sharp(Y, alpha)))
    )
    return lhs, rhs


def _constant_matrix(graded):
    n = graded.num_vars
    mat = [[Fraction(0)] * n for _ in range(n)]
    for idx, c in graded.items():
        if len(idx) != 2 or not c.is_constant():
            raise DegreeError("constant-coefficient degree-2 value expected")
        i, j = idx
        mat[i][j] += c.constant_term()
        mat[j][i] -= c.constant_term()
    return mat


def _from_matrix(cls, mat):
    n = len(mat)
    return cls(n, {(i, j): Poly.const(n, mat[i][j])
                   for i, j in itertools.combinations(range(n), 2) if mat[i][j]})


def symplectic_form(p):
    """The 2-form with ``w(X_f, X_g) = {f, g}`` for a constant nondegenerate ``p``."""
    P = getattr(p, "bivector", p)
    mat = _constant_matrix(P)
    transposed = [list(r) for r in zip(*mat)]
    return _from_matrix(DiffForm, linalg.inverse(transposed))


def bivector_from_form(omega):
    """Inverse of :func:`symplectic_form` for a constant nondegenerate 2-form."""
    mat = _constant_matrix(omega)
    inv = linalg.inverse(mat)
    return _from_matrix(MultiVector, [list(r) for r in zip(*inv)])
