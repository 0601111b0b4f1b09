"""Multivector fields and differential forms with polynomial coefficients.

Both flavors store a table ``{index_tuple: Poly}`` with strictly increasing
0-based index tuples.  ``MultiVector`` tuples denote wedge products of
coordinate derivations, ``DiffForm`` tuples wedge products of coordinate
differentials.  The empty tuple is the degree-0 part.

Normalization follows the determinant convention: ``<dx_I, e_J> = 1`` when
``I == J`` and ``0`` otherwise, so ``(dx_1 ^ dx_2)(X, Y) = det``.
"""

import itertools
from fractions import Fraction
from numbers import Rational

from .errors import DegreeError, DimensionError, ParseError
from .ring import Poly, as_point, default_names, parse_expression

__all__ = [
    "DiffForm",
    "MultiVector",
    "apply_field",
    "determinant",
    "eval_multiderivation",
    "evaluate_form",
    "interior",
    "merge_sign",
    "pair",
    "parse_form",
    "parse_multivector",
    "permutation_sign",
    "wedge",
    "wedge_all",
]


def permutation_sign(seq):
    """Sign of the permutation sorting ``seq``; 0 if it has repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def merge_sign(left, right):
    """Return ``(sign, merged)`` with ``e_left ^ e_right = sign * e_merged``."""
    if set(left) & set(right):
        return 0, None
    inversions = 0
    for a in left:
        for b in right:
            if a > b:
                inversions += 1
    return (-1 if inversions & 1 else 1), tuple(sorted(left + right))


def determinant(rows):
    """Leibniz expansion; entries may be Polys or rationals."""
    k = len(rows)
    if k == 0:
        return Fraction(1)
    total = None
    for perm in itertools.permutations(range(k)):
        sign = permutation_sign(perm)
        term = sign
        for r, c in enumerate(perm):
            term = rows[r][c] * term
            if not term:
                break
        else:
            total = term if total is None else total + term
    return total if total is not None else Fraction(0)


class _Graded:
    __slots__ = ("num_vars", "_terms", "_hash")
    _basis_name = "?"

    def __init__(self, num_vars, terms=()):
        items = terms.items() if hasattr(terms, "items") else terms
        acc = {}
        for idx, coeff in items:
            idx = tuple(idx)
            if any(not 0 <= i < num_vars for i in idx):
                raise DimensionError(f"index tuple {idx} out of range for {num_vars} variables")
            sign = permutation_sign(idx)
            if not sign:
                continue
            key = tuple(sorted(idx))
            coeff = _as_poly(coeff, num_vars)
            if sign < 0:
                coeff = -coeff
            acc[key] = acc[key] + coeff if key in acc else coeff
        self.num_vars = num_vars
        self._terms = {k: c for k, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, num_vars, terms):
        obj = cls.__new__(cls)
        obj.num_vars = num_vars
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, n):
        return cls._raw(n, {})

    @classmethod
    def basis(cls, n, idx, coeff=1):
        return cls(n, {tuple(idx): coeff})

    @classmethod
    def scalar(cls, f, n=None):
        if isinstance(f, Poly):
            n = f.num_vars
        f = _as_poly(f, n)
        return cls._raw(n, {(): f} if f else {})

    # inspection

    @property
    def terms(self):
        return {k: self._terms[k] for k in sorted(self._terms, key=lambda t: (len(t), t))}

    def items(self):
        return self._terms.items()

    def coefficient(self, idx):
        return self._terms.get(tuple(idx), Poly.zero(self.num_vars))

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def degrees(self):
        return sorted({len(k) for k in self._terms})

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    @property
    def degree(self):
        """Degree of a homogeneous value; ``None`` for zero."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise DegreeError(f"inhomogeneous value with degrees {degs}")
        return degs[0]

    def component(self, k):
        return type(self)._raw(self.num_vars, {i: c for i, c in self._terms.items() if len(i) == k})

    def components(self):
        return {k: self.component(k) for k in self.degrees()}

    def coefficient_degree(self):
        return max((c.degree for c in self._terms.values()), default=-1)

    def map_coefficients(self, fn):
        out = {}
        for idx, c in self._terms.items():
            c = fn(c)
            if c:
                out[idx] = c
        return type(self)._raw(self.num_vars, out)

    def at(self, point):
        """Evaluate coefficients at a rational point (constant coefficients)."""
        point = as_point(point, self.num_vars)
        n = self.num_vars
        return self.map_coefficients(lambda c: Poly.const(n, c.eval(point)))

    def scalar_part(self):
        return self._terms.get((), Poly.zero(self.num_vars))

    # arithmetic

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.num_vars != self.num_vars:
            raise DimensionError(f"{self.num_vars} vs {other.num_vars} variables")

    def __add__(self, other):
        if isinstance(other, (int, Rational, Poly)):
            other = type(self).scalar(_as_poly(other, self.num_vars))
        self._check(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            s = acc[k] + c if k in acc else c
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
        return type(self)._raw(self.num_vars, acc)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.num_vars, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Scale by a rational or Poly; two graded values multiply by wedge."""
        if isinstance(other, _Graded):
            return wedge(self, other)
        if isinstance(other, (int, Rational)):
            if not other:
                return type(self).zero(self.num_vars)
            return type(self)._raw(self.num_vars, {k: c * other for k, c in self._terms.items()})
        if isinstance(other, Poly):
            if other.num_vars != self.num_vars:
                raise DimensionError(f"{self.num_vars} vs {other.num_vars} variables")
            return self.map_coefficients(lambda c: c * other)
        return NotImplemented

    __rmul__ = __mul__

    def wedge(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if isinstance(other, (int, Rational)) and other == 0:
            return not self._terms
        if type(other) is not type(self):
            return NotImplemented
        return self.num_vars == other.num_vars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.num_vars, frozenset(self._terms.items())))
        return self._hash

    def to_str(self, names=None):
        names = tuple(names) if names is not None else default_names(self.num_vars)
        if not self._terms:
            return "0"
        parts = []
        for idx, c in self.terms.items():
            if not idx:
                parts.append(f"({c.to_str(names)})")
                continue
            basis = f"{self._basis_name}({','.join(str(i + 1) for i in idx)})"
            if c == 1:
                parts.append(basis)
            elif c == -1:
                parts.append(f"-{basis}")
            else:
                parts.append(f"({c.to_str(names)})*{basis}")
        return " + ".join(parts)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"{type(self).__name__}({self.to_str()!r})"


class MultiVector(_Graded):
    """Sum of ``coeff * d_{i1} ^ ... ^ d_{ik}`` over increasing index tuples."""

    __slots__ = ()
    _basis_name = "e"

    @classmethod
    def field(cls, components):
        """Vector field from its component Polys."""
        components = list(components)
        n = components[0].num_vars
        return cls(n, {(i,): c for i, c in enumerate(components) if c})

    def components_vector(self):
        """Components of a degree-1 field, as a tuple of Polys."""
        n = self.num_vars
        return tuple(self._terms.get((i,), Poly.zero(n)) for i in range(n))


class DiffForm(_Graded):
    """Sum of ``coeff * dx_{i1} ^ ... ^ dx_{ik}`` over increasing index tuples."""

    __slots__ = ()
    _basis_name = "dx"

    @classmethod
    def differential(cls, f):
        """``df`` as a 1-form."""
        return cls(f.num_vars, {(i,): f.partial(i) for i in range(f.num_vars)})


def _as_poly(c, n):
    if isinstance(c, Poly):
        if n is not None and c.num_vars != n:
            raise DimensionError(f"coefficient over {c.num_vars} variables, expected {n}")
        return c
    if isinstance(c, (int, Rational)):
        if n is None:
            raise DimensionError("cannot infer the number of variables")
        return Poly.const(n, c)
    raise TypeError(f"bad coefficient {c!r}")


def wedge(a, b):
    if isinstance(a, (Poly, int, Rational)):
        return b * a
    if isinstance(b, (Poly, int, Rational)):
        return a * b
    a._check(b)
    acc = {}
    for ia, ca in a._terms.items():
        for ib, cb in b._terms.items():
            sign, idx = merge_sign(ia, ib)
            if not sign:
                continue
            term = ca * cb
            if sign < 0:
                term = -term
            acc[idx] = acc[idx] + term if idx in acc else term
    return type(a)._raw(a.num_vars, {k: c for k, c in acc.items() if c})


def wedge_all(factors, n=None, flavor=None):
    factors = list(factors)
    if not factors:
        return flavor.scalar(Poly.const(n, 1))
    out = factors[0]
    for f in factors[1:]:
        out = wedge(out, f)
    return out


def pair(form, mv):
    """``<form, mv>`` over matching index tuples (no factorial weights).

    Both arguments must be homogeneous of the same degree unless one of them
    is zero; inhomogeneous arguments pair component by component.
    """
    if not isinstance(form, DiffForm) or not isinstance(mv, MultiVector):
        raise TypeError("pair expects (DiffForm, MultiVector)")
    if form.num_vars != mv.num_vars:
        raise DimensionError(f"{form.num_vars} vs {mv.num_vars} variables")
    fd, md = form.degrees(), mv.degrees()
    if len(fd) == 1 and len(md) == 1 and fd != md:
        raise DegreeError(f"pairing a {fd[0]}-form with a {md[0]}-vector")
    total = Poly.zero(form.num_vars)
    small, large = (form, mv) if len(form._terms) <= len(mv._terms) else (mv, form)
    for idx, c in small._terms.items():
        other = large._terms.get(idx)
        if other is not None:
            total = total + c * other
    return total


def interior(u, form):
    """``i_u form`` defined by ``(i_u form)(v) = form(u ^ v)``."""
    if form.num_vars != u.num_vars:
        raise DimensionError(f"{u.num_vars} vs {form.num_vars} variables")
    acc = {}
    for iu, cu in u._terms.items():
        su = set(iu)
        for iw, cw in form._terms.items():
            if len(iu) > len(iw) or not su.issubset(iw):
                continue
            rest = tuple(i for i in iw if i not in su)
            sign, _ = merge_sign(iu, rest)
            term = cu * cw
            if sign < 0:
                term = -term
            acc[rest] = acc[rest] + term if rest in acc else term
    return DiffForm._raw(form.num_vars, {k: c for k, c in acc.items() if c})


def eval_multiderivation(u, args):
    """``u(a_1, ..., a_k) = sum_I u_I det[d_{i_r} a_s]``."""
    if u.is_zero():
        n = u.num_vars
        return Poly.zero(n)
    k = u.degree
    args = list(args)
    if len(args) != k:
        raise DegreeError(f"degree-{k} multiderivation takes {k} arguments, got {len(args)}")
    n = u.num_vars
    for a in args:
        if a.num_vars != n:
            raise DimensionError(f"argument over {a.num_vars} variables, expected {n}")
    if k == 0:
        return u.scalar_part()
    grads = [a.gradient() for a in args]
    total = Poly.zero(n)
    for idx, c in u._terms.items():
        rows = [[grads[s][i] for s in range(k)] for i in idx]
        det = determinant(rows)
        if det:
            total = total + c * det
    return total


def apply_field(field, f):
    """Apply a degree-1 multivector as a derivation."""
    return eval_multiderivation(field, [f])


def evaluate_form(form, fields):
    """``form(X_1, ..., X_k) = sum_I form_I det[X_s^{i_r}]`` for vector fields."""
    fields = list(fields)
    k = len(fields)
    n = form.num_vars
    if form.is_zero():
        return Poly.zero(n)
    if form.degree != k:
        raise DegreeError(f"{form.degree}-form evaluated on {k} fields")
    comps = [X.components_vector() for X in fields]
    total = Poly.zero(n)
    for idx, c in form._terms.items():
        rows = [[comps[s][i] for s in range(k)] for i in idx]
        det = determinant(rows)
        if det:
            total = total + c * det
    return total


# parsing


def _parse_graded(text, names, flavor, basis_name):
    names = tuple(names)
    n = len(names)
    index = {name: i for i, name in enumerate(names)}
    if basis_name in index:
        raise ParseError(f"variable name {basis_name!r} is reserved")

    def atom(name, node, fail):
        if isinstance(name, tuple):
            func, args = name
            if func != basis_name:
                fail(f"unknown basis {func!r}, expected {basis_name}(...)", node)
            idx = [a - 1 for a in args]
            if any(not 0 <= i < n for i in idx):
                fail(f"basis index out of range 1..{n}", node)
            return flavor.basis(n, idx)
        if name not in index:
            fail(f"undeclared variable {name!r}", node)
        return Poly.var(n, index[name])

    value = parse_expression(text, names, atom)
    if isinstance(value, (Fraction, Poly)):
        value = flavor.scalar(_as_poly(value, n), n)
    return value


def parse_multivector(text, names):
    """Parse e.g. ``"x*e(2,3) + y*e(3,1) + z*e(1,2)"``."""
    return _parse_graded(text, names, MultiVector, "e")


def parse_form(text, names):
    """Parse e.g. ``"x*dx(1,2) - dx(3)"``."""
    return _parse_graded(text, names, DiffForm, "dx")
