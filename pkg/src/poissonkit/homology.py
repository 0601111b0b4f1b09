"""Finite truncations of the de Rham, Lichnerowicz and canonical complexes.

A truncation keeps the elements of one object degree whose coefficients have
total degree at most ``bound``.  Operators are materialized as exact sparse
matrices between truncations; an image term that leaves the codomain is an
error, never silently dropped.

Degree bookkeeping with ``D`` the coefficient degree of ``p``:

* ``d``:  form degree ``k -> k+1``, bound ``b -> b-1``;
* ``delta``:  form degree ``k -> k-1``, bound ``b -> b+D-1``;
* ``lichnerowicz``:  multivector degree ``k -> k+1``, bound ``b -> b+D-1``.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, partial
from math import comb

from . import linalg
from .calculus import (
    exterior_derivative,
    koszul_delta,
    lichnerowicz,
    star_form,
)
from .errors import HypothesisError, TruncationError, UnverifiedStructureError
from .exterior import DiffForm, MultiVector, interior, wedge
from .poisson import bracket, hamiltonian_field
from .ring import Poly, as_point, monomials_up_to

__all__ = [
    "DistributionFunctional",
    "H0Result",
    "HomologyReport",
    "OperatorMatrix",
    "StarIdentityResult",
    "TruncationSpec",
    "casimir_distributions",
    "casimir_space",
    "distribution_bracket",
    "h0_canonical",
    "homology",
    "operator_matrix",
    "star_matrix_identity",
]

FLAVORS = ("form", "multivector", "function")
OPERATORS = ("d", "delta", "lichnerowicz")


@dataclass(frozen=True)
class TruncationSpec:
    flavor: str
    degree: int
    bound: int
    num_vars: int

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"flavor must be one of {FLAVORS}")
        if self.flavor == "function" and self.degree != 0:
            raise ValueError("function truncations have object degree 0")

    @cached_property
    def basis(self):
        """``(exponents, index_tuple)`` pairs, monomial-major graded-lex."""
        n, k = self.num_vars, self.degree
        if self.bound < 0 or not 0 <= k <= n:
            return ()
        tuples = list(itertools.combinations(range(n), k))
        return tuple((m, t) for m in monomials_up_to(n, self.bound) for t in tuples)

    @cached_property
    def _index(self):
        return {b: i for i, b in enumerate(self.basis)}

    @property
    def size(self):
        return len(self.basis)

    def expected_size(self):
        if self.bound < 0 or not 0 <= self.degree <= self.num_vars:
            return 0
        return comb(self.num_vars, self.degree) * comb(self.num_vars + self.bound, self.bound)

    def element(self, vec):
        n = self.num_vars
        if self.flavor == "function":
            return Poly(n, {self.basis[i][0]: v for i, v in vec.items()})
        cls = DiffForm if self.flavor == "form" else MultiVector
        acc = {}
        for i, v in vec.items():
            mono, idx = self.basis[i]
            acc.setdefault(idx, {})[mono] = v
        return cls(n, {idx: Poly(n, terms) for idx, terms in acc.items()})

    def basis_element(self, i):
        return self.element({i: Fraction(1)})

    def coordinates(self, value):
        """Sparse coordinate vector; raises if ``value`` leaves the truncation."""
        if isinstance(value, Poly):
            items = [((), value)]
        else:
            items = list(value.items())
        vec = {}
        for idx, coeff in items:
            for mono, c in coeff.items():
                key = (mono, idx)
                i = self._index.get(key)
                if i is None:
                    raise TruncationError(
                        f"term of coefficient degree {sum(mono)} and object degree {len(idx)} "
                        f"falls outside {self.describe()}"
                    )
                vec[i] = c
        return vec

    def describe(self):
        return (
            f"{self.flavor} truncation (degree {self.degree}, coefficient degree <= {self.bound}, "
            f"{self.num_vars} variables)"
        )

    def as_dict(self):
        return {
            "flavor": self.flavor,
            "degree": self.degree,
            "bound": self.bound,
            "num_vars": self.num_vars,
        }

    def with_bound(self, bound):
        return TruncationSpec(self.flavor, self.degree, bound, self.num_vars)


@dataclass(frozen=True)
class OperatorMatrix:
    domain: TruncationSpec
    codomain: TruncationSpec
    columns: tuple
    name: str = "op"

    @property
    def shape(self):
        return (self.codomain.size, self.domain.size)

    @cached_property
    def rank(self):
        return linalg.bareiss_rank(self.columns, self.codomain.size)

    def is_zero(self):
        return not any(self.columns)

    def entry(self, i, j):
        return self.columns[j].get(i, Fraction(0))

    def to_dense(self):
        rows, cols = self.shape
        return [[self.entry(i, j) for j in range(cols)] for i in range(rows)]

    def kernel(self):
        """Kernel basis as sparse domain vectors."""
        return linalg.nullspace(linalg.transpose(self.columns), self.domain.size)

    def kernel_elements(self):
        return [self.domain.element(v) for v in self.kernel()]

    def compose(self, first):
        """Matrix of ``self o first``."""
        if first.codomain != self.domain:
            raise TruncationError("codomain/domain mismatch in composition")
        cols = []
        for col in first.columns:
            acc = {}
            for j, v in col.items():
                for i, w in self.columns[j].items():
                    s = acc.get(i, 0) + v * w
                    if s:
                        acc[i] = s
                    else:
                        acc.pop(i, None)
            cols.append(acc)
        return OperatorMatrix(first.domain, self.codomain, tuple(cols), f"{self.name}.{first.name}")


def _coefficient_shift(p):
    D = p.coefficient_degree if p is not None else -1
    return max(D, 0) - 1 if D >= 0 else -1


def _as_graded(spec, value, op):
    if spec.flavor == "function":
        cls = DiffForm if op in ("d", "delta") else MultiVector
        return cls.scalar(value)
    return value


def _default_codomain(op, domain, p):
    n, k, b = domain.num_vars, domain.degree, domain.bound
    if op == "d":
        if domain.flavor == "multivector":
            raise ValueError("d acts on forms")
        return TruncationSpec("form", k + 1, b - 1, n) if k + 1 <= n else TruncationSpec("form", k + 1, -1, n)
    shift = _coefficient_shift(p)
    if op == "delta":
        if domain.flavor == "multivector":
            raise ValueError("delta acts on forms")
        return TruncationSpec("form", max(k - 1, 0), b + shift if k >= 1 else -1, n)
    if op == "lichnerowicz":
        if domain.flavor == "form":
            raise ValueError("the Lichnerowicz differential acts on multivectors")
        return TruncationSpec("multivector", k + 1, b + shift, n)
    raise ValueError(f"unknown operator {op!r}")


def _operator_callable(op, p):
    if callable(op):
        return op
    if op == "d":
        return exterior_derivative
    if op == "delta":
        return partial(koszul_delta, p)
    if op == "lichnerowicz":
        return partial(lichnerowicz, p)
    raise ValueError(f"unknown operator {op!r}")


def operator_matrix(op, domain, p=None, codomain=None):
    """Exact matrix of ``op`` (``"d"``, ``"delta"``, ``"lichnerowicz"`` or a
    callable) from ``domain`` into ``codomain``.

    The codomain defaults to the bound dictated by the degree bookkeeping.
    An explicit codomain too small for some image raises ``TruncationError``.
    """
    if op in ("delta", "lichnerowicz") and (p is None or not p.verified):
        raise UnverifiedStructureError(f"{op} needs a Jacobi-verified PoissonStructure")
    if codomain is None:
        if callable(op):
            raise ValueError("a callable operator needs an explicit codomain")
        codomain = _default_codomain(op, domain, p)
    fn = _operator_callable(op, p)
    cols = []
    for i in range(domain.size):
        image = fn(_as_graded(domain, domain.basis_element(i), op))
        if codomain.flavor == "function" and isinstance(image, (MultiVector, DiffForm)):
            if any(len(idx) for idx, _ in image.items()):
                raise TruncationError("image is not a function")
            image = image.scalar_part()
        if image.is_zero() if hasattr(image, "is_zero") else not image:
            cols.append({})
            continue
        if isinstance(image, (MultiVector, DiffForm)) and image.degrees() != [codomain.degree]:
            raise TruncationError(
                f"image degree {image.degrees()} does not match codomain degree {codomain.degree}"
            )
        try:
            cols.append(codomain.coordinates(image))
        except TruncationError as exc:
            raise TruncationError(
                f"{op if isinstance(op, str) else 'operator'} on {domain.describe()} is not closed: "
                f"{exc}"
            ) from None
    name = op if isinstance(op, str) else getattr(op, "__name__", "op")
    return OperatorMatrix(domain, codomain, tuple(cols), name)


@dataclass(frozen=True)
class HomologyReport:
    operator: str
    domain: TruncationSpec
    rank: int
    kernel_dim: int
    incoming_rank: int
    representatives: tuple

    @property
    def homology_dim(self):
        return self.kernel_dim - self.incoming_rank

    def as_dict(self, names=None):
        return {
            "schema": 1,
            "operator": self.operator,
            "domain": self.domain.as_dict(),
            "rank": self.rank,
            "kernel_dim": self.kernel_dim,
            "incoming_rank": self.incoming_rank,
            "homology_dim": self.homology_dim,
            "representatives": [r.to_str(names) for r in self.representatives],
        }


def _reduce(vec, echelon):
    """Reduce ``vec`` against ``{pivot: row}`` rows normalized at their pivot."""
    vec = dict(vec)
    for pc in sorted(echelon):
        f = vec.get(pc)
        if f:
            for j, v in echelon[pc].items():
                t = vec.get(j, 0) - f * v
                if t:
                    vec[j] = t
                else:
                    vec.pop(j, None)
    return vec


def _insert(vec, echelon):
    """Add ``vec`` to the echelon basis; False if it was already in the span."""
    vec = _reduce(vec, echelon)
    if not vec:
        return False
    pc = min(vec)
    inv = 1 / vec[pc]
    row = {j: v * inv for j, v in vec.items()}
    # keep every stored row reduced at the new pivot so one pass suffices
    for other in echelon.values():
        f = other.get(pc)
        if f:
            for j, v in row.items():
                t = other.get(j, 0) - f * v
                if t:
                    other[j] = t
                else:
                    other.pop(j, None)
    echelon[pc] = row
    return True


def _complement(span_vectors, candidates):
    """Candidates (in order) that extend ``span_vectors`` to a larger span."""
    echelon = {}
    for vec in span_vectors:
        _insert(vec, echelon)
    return [vec for vec in candidates if _insert(vec, echelon)]


def _source_bound(op, p, bound):
    """Largest domain bound whose default image bound is ``bound``."""
    if op == "d":
        return bound + 1
    return bound - _coefficient_shift(p)


def homology(op, p, flavor, degree, bound, target_bound=None):
    """Truncated (co)homology at one degree.

    The cycles are the kernel of ``op`` on the degree-``bound`` slice, the
    boundaries the image of the largest slice one step back that lands inside
    it.  ``target_bound`` pins the outgoing codomain; a bound too small for
    some image raises ``TruncationError``.
    """
    if op != "d" and (p is None or not p.verified):
        raise UnverifiedStructureError(f"{op} needs a Jacobi-verified PoissonStructure")
    n = p.num_vars
    here = TruncationSpec(flavor, degree, bound, n)
    step = -1 if op == "delta" else 1
    out_degree = degree + step
    target = None
    if target_bound is not None:
        out_flavor = "form" if flavor == "form" else "multivector"
        in_range = 0 <= out_degree <= n
        target = TruncationSpec(out_flavor, max(out_degree, 0), target_bound if in_range else -1, n)
    outgoing = operator_matrix(op, here, p, target)
    in_degree = degree - step
    image_vectors = []
    incoming_rank = 0
    if 0 <= in_degree <= n and flavor != "function":
        if flavor == "form":
            src_flavor = "form"
        else:
            src_flavor = "function" if in_degree == 0 else "multivector"
        source = TruncationSpec(src_flavor, in_degree, _source_bound(op, p, bound), n)
        incoming = operator_matrix(op, source, p, here)
        image_vectors = [c for c in incoming.columns if c]
        incoming_rank = incoming.rank
    kernel = outgoing.kernel()
    reps = _complement(image_vectors, kernel)
    return HomologyReport(
        op, here, outgoing.rank, len(kernel), incoming_rank, tuple(here.element(v) for v in reps)
    )


def casimir_space(p, bound):
    """Basis of ``{f : deg f <= bound, [p, f] = 0}``."""
    if not p.verified:
        raise UnverifiedStructureError("casimir_space needs a Jacobi-verified structure")
    dom = TruncationSpec("function", 0, bound, p.num_vars)
    mat = operator_matrix("lichnerowicz", dom, p)
    return [dom.element(v) for v in mat.kernel()]


@dataclass(frozen=True)
class H0Result:
    dimension: int
    representatives: tuple
    image_rank: int
    domain: TruncationSpec
    codomain: TruncationSpec
    image: tuple = field(repr=False, default=())


def _delta_image(p, bound):
    """Matrix of delta from the largest 1-form truncation landing in ``bound``."""
    D = p.coefficient_degree
    src_bound = bound - D + 1 if D >= 0 else bound
    n = p.num_vars
    dom = TruncationSpec("form", 1, src_bound, n)
    cod = TruncationSpec("function", 0, bound, n)
    return operator_matrix("delta", dom, p, cod)


def h0_canonical(p, bound):
    """``C(bound) / delta(Omega^1)``: dimension and coset representatives."""
    if not p.verified:
        raise UnverifiedStructureError("h0_canonical needs a Jacobi-verified structure")
    mat = _delta_image(p, bound)
    image = [c for c in mat.columns if c]
    rank = mat.rank
    cod = mat.codomain
    # the orthogonal complement of the image (monomial inner product) gives
    # invariant-looking representatives, e.g. x^2 + y^2 + z^2 for so(3)
    reps = linalg.nullspace(image, cod.size)
    return H0Result(
        cod.size - rank,
        tuple(cod.element(v) for v in reps),
        rank,
        mat.domain,
        cod,
        tuple(image),
    )


@dataclass(frozen=True)
class DistributionFunctional:
    """A linear functional on functions.

    ``truncated_dual``: ``coeffs[i]`` is the value on the i-th basis monomial
    of ``spec``.  ``leaf``: integration over a symplectic leaf chart, held in
    ``leaf = (structure, chart)`` and evaluated numerically.
    """

    kind: str
    spec: TruncationSpec = None
    coeffs: tuple = ()
    leaf: tuple = None

    def __post_init__(self):
        if self.kind == "truncated_dual" and len(self.coeffs) != self.spec.size:
            raise ValueError("coefficient vector does not match the truncation")

    @classmethod
    def dirac(cls, point, spec):
        point = as_point(point, spec.num_vars)
        vals = []
        for mono, _ in spec.basis:
            v = Fraction(1)
            for x, e in zip(point, mono):
                v *= x ** e
            vals.append(v)
        return cls("truncated_dual", spec, tuple(vals))

    @classmethod
    def from_vector(cls, spec, vec):
        return cls("truncated_dual", spec, tuple(vec.get(i, Fraction(0)) for i in range(spec.size)))

    def __call__(self, f):
        if self.kind == "leaf":
            from .numeric import leaf_integrate

            p, chart = self.leaf
            return leaf_integrate(p, chart, f)
        return sum(
            (self.coeffs[i] * c for i, c in self.spec.coordinates(f).items()), Fraction(0)
        )

    pair = __call__

    def times(self, g):
        """``<g Phi, phi> = <Phi, g phi>`` on the largest truncation that fits."""
        spec = self.spec.with_bound(self.spec.bound - max(g.degree, 0))
        return DistributionFunctional(
            "truncated_dual", spec, tuple(self(g * spec.basis_element(i)) for i in range(spec.size))
        )

    def __add__(self, other):
        if other.spec != self.spec:
            raise TruncationError("functionals on different truncations")
        return DistributionFunctional(
            "truncated_dual", self.spec, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, c):
        return DistributionFunctional("truncated_dual", self.spec, tuple(c * a for a in self.coeffs))

    def restrict(self, spec):
        return DistributionFunctional(
            "truncated_dual", spec, tuple(self(spec.basis_element(i)) for i in range(spec.size))
        )

    def is_zero(self):
        return not any(self.coeffs)


def casimir_distributions(p, bound):
    """Functionals on degree-``bound`` functions that annihilate every bracket
    reachable inside the truncation."""
    if not p.verified:
        raise UnverifiedStructureError("casimir_distributions needs a Jacobi-verified structure")
    mat = _delta_image(p, bound)
    spec = mat.codomain
    image = [c for c in mat.columns if c]
    return [DistributionFunctional.from_vector(spec, v) for v in linalg.nullspace(image, spec.size)]


def distribution_bracket(p, phi, f, bound=None):
    """``<{f, Phi}, g> = <Phi, {g, f}>`` on functions of degree <= ``bound``."""
    if phi.kind != "truncated_dual":
        raise TypeError("distribution_bracket acts on truncated functionals")
    if bound is None:
        D = max(p.coefficient_degree, 0)
        bound = phi.spec.bound - max(0, f.degree + D - 2)
    spec = phi.spec.with_bound(bound)
    vals = []
    for i in range(spec.size):
        g = spec.basis_element(i)
        try:
            vals.append(phi(bracket(p, g, f)))
        except TruncationError as exc:
            raise TruncationError(f"{{g, f}} leaves the functional's domain: {exc}") from None
    return DistributionFunctional("truncated_dual", spec, tuple(vals))


@dataclass(frozen=True)
class StarIdentityResult:
    holds: bool
    degree: int
    shape: tuple
    mismatches: int
    hypotheses: dict

    def __bool__(self):
        return self.holds


def check_star_hypotheses(p, top):
    """Exact check of ``d top = 0``, ``dx_i ^ top = 0`` and ``d i_{U_{x_i}} top = 0``."""
    n = top.num_vars
    if top.is_zero() or top.degree != n:
        raise HypothesisError("top form must be a nonzero form of degree num_vars")
    xs = Poly.variables(n)
    checks = {
        "d_top_closed": exterior_derivative(top).is_zero(),
        "da_wedge_top_zero": all(wedge(DiffForm.differential(x), top).is_zero() for x in xs),
        "d_contraction_closed": all(
            exterior_derivative(interior(hamiltonian_field(p, x), top)).is_zero() for x in xs
        ),
    }
    broken = [k for k, ok in checks.items() if not ok]
    if broken:
        raise HypothesisError(f"star identity hypothesis violated: {', '.join(broken)}")
    return checks


def star_matrix_identity(p, top, degree, bound):
    """Compare the matrices of ``* delta`` and ``(-1)^k d *`` on k-forms."""
    hyps = check_star_hypotheses(p, top)
    n = p.num_vars
    dom = TruncationSpec("form", degree, bound, n)
    sign = -1 if degree % 2 else 1
    lhs_images, rhs_images = [], []
    for i in range(dom.size):
        w = dom.basis_element(i)
        lhs_images.append(star_form(p, top, koszul_delta(p, w)))
        rhs_images.append(exterior_derivative(star_form(p, top, w)) * sign)
    cod_bound = max(
        [g.coefficient_degree() for g in lhs_images + rhs_images if not g.is_zero()], default=0
    )
    cod = TruncationSpec("form", n - degree + 1, cod_bound, n) if degree >= 1 else TruncationSpec("form", n + 1, -1, n)

    def assemble(images, name):
        cols = []
        for g in images:
            cols.append({} if g.is_zero() else cod.coordinates(g))
        return OperatorMatrix(dom, cod, tuple(cols), name)

    A = assemble(lhs_images, "star.delta")
    B = assemble(rhs_images, "d.star")
    mismatches = sum(1 for a, b in zip(A.columns, B.columns) if a != b)
    return StarIdentityResult(mismatches == 0, degree, A.shape, mismatches, hyps)
