"""Graded differential operators on multivectors and forms.

Sign conventions
----------------
The bracket of multiderivations is fixed by the supercommutator of the
compositional product,

    [u, v] = (-1)^((m+1) n) u o v + (-1)^m v o u,     m = |u|, n = |v|,

evaluated by :func:`schouten_oracle`.  With this normalization
``[X, f] = [f, X] = X(f)`` for a vector field ``X``, ``[X, Y]`` is the Lie
bracket, ``[u, v] = (-1)^(m n) [v, u]`` and, for a bivector ``p``,
``[p, f] = p(f, .)`` is the Hamiltonian field of ``f`` (global sign +1).
The structural :func:`schouten` reproduces these signs term by term; the
agreement is part of the test suite rather than an assumption.
"""

import itertools

from .errors import DegreeError, DimensionError, UnverifiedStructureError
from .exterior import (
    DiffForm,
    MultiVector,
    apply_field,
    eval_multiderivation,
    evaluate_form,
    interior,
    merge_sign,
    pair,
    permutation_sign,
    wedge,
    wedge_all,
)
from .ring import Poly

__all__ = [
    "HAMILTONIAN_SIGN",
    "anchor_form",
    "anchor_lift",
    "bivector_bracket",
    "compositional_product",
    "deviation_bracket",
    "dual_boundary_check",
    "exterior_derivative",
    "form_pairing_p",
    "form_schouten_bracket",
    "hamiltonian_vector",
    "koszul_delta",
    "koszul_delta_explicit",
    "lichnerowicz",
    "schouten",
    "schouten_dual_oracle",
    "schouten_from_oracle",
    "schouten_oracle",
    "star",
    "star_form",
    "supercommutator_differential_check",
]

# [p, f] = HAMILTONIAN_SIGN * X_f with X_f = {f, .}; pinned by test_calculus.
HAMILTONIAN_SIGN = 1


def _bivector(p):
    return getattr(p, "bivector", p)


def _require_verified(p):
    if not getattr(p, "verified", False):
        raise UnverifiedStructureError(
            "operation needs a Jacobi-verified PoissonStructure (run jacobi_check first)"
        )
    return p.bivector


def _sign(k):
    return -1 if k & 1 else 1


def _deg(x):
    """Degree of a homogeneous graded value (None for zero)."""
    return x.degree


# exterior derivative


def exterior_derivative(form):
    n = form.num_vars
    acc = {}
    for idx, c in form.items():
        for i in range(n):
            if i in idx:
                continue
            dc = c.partial(i)
            if not dc:
                continue
            sign, key = merge_sign((i,), idx)
            if sign < 0:
                dc = -dc
            acc[key] = acc[key] + dc if key in acc else dc
    return DiffForm._raw(n, {k: v for k, v in acc.items() if v})


# Schouten bracket, structural route


def _lie_coordinate(f, i, g, j):
    """``[f d_i, g d_j]`` for coordinate-aligned vector fields."""
    n = f.num_vars
    out = MultiVector.zero(n)
    a = f * g.partial(i)
    if a:
        out = out + MultiVector.basis(n, (j,), a)
    b = g * f.partial(j)
    if b:
        out = out - MultiVector.basis(n, (i,), b)
    return out


def _contract_function(idx, a, b):
    """``[a e_I, b]`` = ``a * sum_r (-1)^r (d_{i_r} b) e_{I minus i_r}``."""
    n = a.num_vars
    acc = {}
    for r, i in enumerate(idx):
        db = b.partial(i)
        if not db:
            continue
        term = a * db
        if r & 1:
            term = -term
        rest = idx[:r] + idx[r + 1:]
        acc[rest] = acc[rest] + term if rest in acc else term
    return MultiVector._raw(n, {k: v for k, v in acc.items() if v})


def _schouten_terms(I, a, J, b):
    m, n = len(I), len(J)
    nv = a.num_vars
    if m == 0 and n == 0:
        return MultiVector.zero(nv)
    if n == 0:
        return _contract_function(I, a, b)
    if m == 0:
        return _contract_function(J, b, a)
    one = Poly.const(nv, 1)
    # decompose into vector fields: the coefficient rides on the first factor
    us = [(a if r == 0 else one, i) for r, i in enumerate(I)]
    vs = [(b if s == 0 else one, j) for s, j in enumerate(J)]
    out = MultiVector.zero(nv)
    for r, (fu, iu) in enumerate(us):
        for s, (gv, jv) in enumerate(vs):
            br = _lie_coordinate(fu, iu, gv, jv)
            if not br:
                continue
            rest = [MultiVector.basis(nv, (ii,), ff) for k, (ff, ii) in enumerate(us) if k != r]
            rest += [MultiVector.basis(nv, (jj,), gg) for k, (gg, jj) in enumerate(vs) if k != s]
            term = wedge_all([br] + rest)
            # (-1)^(m + i + j - 1) with 1-based i, j
            if (m + r + s + 1) & 1:
                term = -term
            out = out + term
    return out


def schouten(u, v):
    """Schouten bracket, expanded bilinearly over terms of ``u`` and ``v``."""
    if u.num_vars != v.num_vars:
        raise DimensionError(f"{u.num_vars} vs {v.num_vars} variables")
    out = MultiVector.zero(u.num_vars)
    for I, a in u.items():
        for J, b in v.items():
            out = out + _schouten_terms(I, a, J, b)
    return out


# Schouten bracket, compositional-product oracle


def _eval(u, args):
    if u.is_zero():
        return Poly.zero(u.num_vars)
    return eval_multiderivation(u, args)


def compositional_product(alpha, beta, args):
    """Evaluate ``(alpha o beta)(args)`` by the shuffle sum."""
    n_vars = alpha.num_vars
    if alpha.is_zero() or beta.is_zero():
        return Poly.zero(n_vars)
    m, n = alpha.degree, beta.degree
    args = list(args)
    if len(args) != m + n - 1:
        raise DegreeError(f"compositional product takes {m + n - 1} arguments, got {len(args)}")
    if m == 0:
        return Poly.zero(n_vars)
    total = Poly.zero(n_vars)
    positions = range(m + n - 1)
    for chosen in itertools.combinations(positions, n):
        rest = [i for i in positions if i not in chosen]
        sign = permutation_sign(list(chosen) + rest)
        inner = _eval(beta, [args[i] for i in chosen])
        val = _eval(alpha, [inner] + [args[i] for i in rest])
        total = total + val if sign > 0 else total - val
    return total


def schouten_oracle(u, v, args):
    """``[u, v](args)`` from ``(-1)^((m+1)n) u o v + (-1)^m v o u``."""
    nv = u.num_vars
    if u.is_zero() or v.is_zero():
        return Poly.zero(nv)
    m, n = u.degree, v.degree
    args = list(args)
    if len(args) != max(m + n - 1, 0):
        raise DegreeError(f"[u, v] takes {m + n - 1} arguments, got {len(args)}")
    if m + n - 1 < 0:
        return Poly.zero(nv)
    first = compositional_product(u, v, args)
    second = compositional_product(v, u, args)
    return first * _sign((m + 1) * n) + second * _sign(m)


def schouten_from_oracle(u, v):
    """Materialize ``[u, v]`` by evaluating the oracle on coordinate tuples."""
    nv = u.num_vars
    if u.is_zero() or v.is_zero():
        return MultiVector.zero(nv)
    k = u.degree + v.degree - 1
    if k < 0:
        return MultiVector.zero(nv)
    xs = Poly.variables(nv)
    terms = {}
    for idx in itertools.combinations(range(nv), k):
        c = schouten_oracle(u, v, [xs[i] for i in idx])
        if c:
            terms[idx] = c
    return MultiVector._raw(nv, terms)


def schouten_dual_oracle(u, v, form):
    """``form([u, v])`` through exterior derivatives of contractions.

    ``(-1)^((m+1)n) (d i_v w)(u) + (-1)^m (d i_u w)(v) - (dw)(u ^ v)``
    """
    nv = u.num_vars
    if u.is_zero() or v.is_zero() or form.is_zero():
        return Poly.zero(nv)
    m, n = u.degree, v.degree
    if form.degree != m + n - 1:
        raise DegreeError(f"need a {m + n - 1}-form, got degree {form.degree}")
    a = pair(exterior_derivative(interior(v, form)), u)
    b = pair(exterior_derivative(interior(u, form)), v)
    c = pair(exterior_derivative(form), wedge(u, v))
    return a * _sign((m + 1) * n) + b * _sign(m) - c


# Poisson-level operators


def bivector_bracket(P, f, g):
    """``P(f, g)`` for a bivector, i.e. ``sum c_ij (d_i f d_j g - d_j f d_i g)``."""
    total = Poly.zero(P.num_vars)
    gf, gg = f.gradient(), g.gradient()
    for idx, c in P.items():
        if len(idx) != 2:
            raise DegreeError("bivector expected")
        i, j = idx
        t = gf[i] * gg[j] - gf[j] * gg[i]
        if t:
            total = total + c * t
    return total


def hamiltonian_vector(P, f):
    """``X_f = {f, .}`` as a vector field, for any bivector ``P``."""
    xs = Poly.variables(P.num_vars)
    return MultiVector.field([bivector_bracket(P, f, x) for x in xs])


def lichnerowicz(p, u):
    """``d_p(u) = [p, u]``."""
    return schouten(_require_verified(p), u)


def koszul_delta(p, form):
    """Canonical boundary ``i_p d - d i_p``."""
    P = _require_verified(p)
    return interior(P, exterior_derivative(form)) - exterior_derivative(interior(P, form))


def koszul_delta_explicit(p, a0, *args):
    """Boundary of the generator ``a0 da_1 ^ ... ^ da_n`` from brackets alone."""
    P = _require_verified(p)
    nv = a0.num_vars
    n = len(args)
    diffs = [DiffForm.differential(a) for a in args]
    out = DiffForm.zero(nv)
    one = DiffForm.scalar(Poly.const(nv, 1))
    for i in range(n):
        br = bivector_bracket(P, a0, args[i])
        if not br:
            continue
        rest = wedge_all([one] + diffs[:i] + diffs[i + 1:])
        term = rest * br
        # (-1)^(i+1) with 1-based i
        out = out + (term if i % 2 == 0 else -term)
    for i, j in itertools.combinations(range(n), 2):
        br = bivector_bracket(P, args[i], args[j])
        if not br:
            continue
        others = [diffs[k] for k in range(n) if k not in (i, j)]
        term = wedge_all([DiffForm.differential(br)] + others) * a0
        out = out + (term if (i + j) % 2 == 0 else -term)
    return out


def form_pairing_p(p, alpha, beta):
    """``p(a, b) = i_p(a ^ b) - i_p a ^ b - a ^ i_p b``."""
    P = _bivector(p)
    return interior(P, wedge(alpha, beta)) - wedge(interior(P, alpha), beta) - wedge(
        alpha, interior(P, beta)
    )


def form_schouten_bracket(p, alpha, beta):
    """Bracket of forms ``d p(a, b) - p(da, b) - (-1)^|a| p(a, db)``."""
    nv = alpha.num_vars
    if alpha.is_zero() or beta.is_zero():
        return DiffForm.zero(nv)
    d = exterior_derivative
    out = d(form_pairing_p(p, alpha, beta)) - form_pairing_p(p, d(alpha), beta)
    last = form_pairing_p(p, alpha, d(beta))
    return out - last * _sign(alpha.degree)


def deviation_bracket(op, alpha, beta):
    """How far ``op`` is from an antiderivation:
    ``op(a) ^ b + (-1)^|a| a ^ op(b) - op(a ^ b)``."""
    nv = alpha.num_vars
    if alpha.is_zero() or beta.is_zero():
        return DiffForm.zero(nv)
    return (
        wedge(op(alpha), beta)
        + wedge(alpha, op(beta)) * _sign(alpha.degree)
        - op(wedge(alpha, beta))
    )


def supercommutator_differential_check(form, fields):
    """Both sides of ``[mu, w](u_1..u_{n+1}) = -(dw)(u_1 ^ ... ^ u_{n+1})``.

    The left side is assembled from commutators of first-order operators:
    ``[g, u]`` acts as multiplication by ``g u(1) - u(g)``, and ``[u_i, u_j]``
    is read off from its action on the coordinate functions.
    """
    fields = list(fields)
    nv = form.num_vars
    k = len(fields)
    if not form.is_zero() and form.degree + 1 != k:
        raise DegreeError(f"a {form.degree}-form needs {form.degree + 1} fields, got {k}")
    for u in fields:
        if not u.is_zero() and u.degree != 1:
            raise DegreeError("fields must be degree-1 multivectors")
    one = Poly.const(nv, 1)
    xs = Poly.variables(nv)

    def commutator_with_function(g, u):
        return g * apply_field(u, one) - apply_field(u, g * one)

    def commutator_fields(u, v):
        return MultiVector.field(
            [apply_field(u, apply_field(v, x)) - apply_field(v, apply_field(u, x)) for x in xs]
        )

    def omega(vs):
        if form.is_zero():
            return Poly.zero(nv)
        return evaluate_form(form, vs)

    lhs = Poly.zero(nv)
    for i in range(k):
        g = omega(fields[:i] + fields[i + 1:])
        term = commutator_with_function(g, fields[i])
        lhs = lhs + (term if i % 2 == 0 else -term)
    for i, j in itertools.combinations(range(k), 2):
        rest = [fields[t] for t in range(k) if t not in (i, j)]
        term = omega([commutator_fields(fields[i], fields[j])] + rest)
        # (-1)^(i+j-1) with 1-based indices
        lhs = lhs + (term if (i + j + 1) % 2 == 0 else -term)
    rhs = -pair(exterior_derivative(form), wedge_all(fields)) if fields else -pair(
        exterior_derivative(form), MultiVector.scalar(one)
    )
    return lhs, rhs


def anchor_lift(p, a0, *args):
    """``a0 U_{a_1} ^ ... ^ U_{a_k}`` with ``U_a = {a, .}``."""
    P = _bivector(p)
    out = MultiVector.scalar(a0)
    for a in args:
        out = wedge(out, hamiltonian_vector(P, a))
    return out


def anchor_form(p, form):
    """Linear extension of :func:`anchor_lift` through coordinate generators."""
    P = _bivector(p)
    nv = form.num_vars
    xs = Poly.variables(nv)
    out = MultiVector.zero(nv)
    for idx, c in form.items():
        out = out + anchor_lift(P, c, *[xs[i] for i in idx])
    return out


def star(p, top, a0, *args):
    """``a0 (i_{U_{a_k}} o ... o i_{U_{a_1}}) top``."""
    P = _bivector(p)
    nv = top.num_vars
    if top.is_zero() or top.degree != nv:
        raise DegreeError("the star operator needs a nonzero top-degree form")
    out = top
    for a in args:
        out = interior(hamiltonian_vector(P, a), out)
    return out * a0


def star_form(p, top, form):
    """Linear extension of :func:`star` through coordinate generators."""
    nv = form.num_vars
    xs = Poly.variables(nv)
    out = DiffForm.zero(nv)
    for idx, c in form.items():
        out = out + star(p, top, c, *[xs[i] for i in idx])
    return out


def dual_boundary_check(p, form, u):
    """Both sides of the dual-boundary identity for ``w([p, u])``.

    Returns ``(w([p, u]), (d i_p - i_p d)(w)(u) + (-1)^|u| (d i_u w)(p))``.
    """
    P = _bivector(p)
    nv = form.num_vars
    lhs = pair(form, schouten(P, u)) if not form.is_zero() else Poly.zero(nv)
    if form.is_zero() or u.is_zero():
        return lhs, Poly.zero(nv)
    if form.degree != u.degree + 1:
        raise DegreeError(f"need a {u.degree + 1}-form, got degree {form.degree}")
    d = exterior_derivative
    boundary = interior(P, d(form)) - d(interior(P, form))
    rhs = -pair(boundary, u) + pair(d(interior(u, form)), P) * _sign(u.degree)
    return lhs, rhs
