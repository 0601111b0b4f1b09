"""Floating-point layer: Hamiltonian flows, leaf forms and leaf integrals.

Exact objects (``Poly``, ``PoissonStructure``) are compiled to vectorized
numpy callables once; everything downstream runs in float64.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from .errors import ChartError, DegreeError, NumericError
from .exterior import DiffForm, wedge_all
from .poisson import (
    bivector_from_form,
    bracket,
    hamiltonian_field,
    jacobi_check,
)
from .ring import Poly, as_point

__all__ = [
    "FlowSpec",
    "LeafChart",
    "TopPowerResult",
    "bracket_invariance_check",
    "compile_poly",
    "dirac_pairing",
    "flow",
    "leaf_distribution_check",
    "leaf_form_at",
    "leaf_integrate",
    "top_power_bracket_check",
    "top_power_sign",
]


def compile_poly(f):
    """Vectorized evaluator: ``points`` of shape ``(..., n)`` -> ``(...)``."""
    items = [(np.array(m, dtype=int), float(c)) for m, c in f.items()]

    def evaluate(points):
        pts = np.asarray(points, dtype=float)
        out = np.zeros(pts.shape[:-1])
        for exps, c in items:
            out = out + c * np.prod(pts ** exps, axis=-1)
        return out

    return evaluate


def _compile_matrix(p):
    """Evaluator of the bracket matrix ``P[i][j] = {x_i, x_j}``."""
    P = getattr(p, "bivector", p)
    n = P.num_vars
    entries = [(i, j, compile_poly(c)) for (i, j), c in P.items()]

    def evaluate(points):
        pts = np.asarray(points, dtype=float)
        out = np.zeros(pts.shape[:-1] + (n, n))
        for i, j, fn in entries:
            v = fn(pts)
            out[..., i, j] += v
            out[..., j, i] -= v
        return out

    return evaluate


def _compile_gradient(f):
    grads = [compile_poly(g) for g in f.gradient()]
    return lambda pts: np.stack([g(pts) for g in grads], axis=-1)


@dataclass(frozen=True)
class FlowSpec:
    hamiltonian: Poly
    start: tuple
    duration: float
    steps: int

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("a flow needs at least one step")
        if not math.isfinite(self.duration):
            raise ValueError("duration must be finite")

    @property
    def dt(self):
        return self.duration / self.steps


def _field_evaluator(p, h):
    X = hamiltonian_field(p, h)
    comps = [compile_poly(X.coefficient((j,))) for j in range(p.num_vars)]
    return lambda x: np.stack([c(x) for c in comps], axis=-1)


def _rk4(field, x0, dt, steps):
    x = np.array(x0, dtype=float)
    traj = np.empty((steps + 1,) + x.shape)
    traj[0] = x
    for s in range(steps):
        # overflow is detected below, not warned about
        with np.errstate(over="ignore", invalid="ignore"):
            k1 = field(x)
            k2 = field(x + 0.5 * dt * k1)
            k3 = field(x + 0.5 * dt * k2)
            k4 = field(x + dt * k3)
            x = x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(x)):
            raise NumericError(f"non-finite state after {s + 1} steps")
        traj[s + 1] = x
    return traj


def flow(p, spec):
    """Fixed-step RK4 trajectory of ``x' = X_h(x)``, shape ``(steps + 1, n)``."""
    start = np.array([float(c) for c in spec.start])
    if start.shape != (p.num_vars,):
        raise ValueError("start point has the wrong dimension")
    return _rk4(_field_evaluator(p, spec.hamiltonian), start, spec.dt, spec.steps)


def bracket_invariance_check(p, spec, g, h, t=None, fd_step=1e-5):
    """``|{g o phi_t, h o phi_t}(x) - {g, h}(phi_t(x))|`` at ``x = spec.start``.

    ``phi_t`` is the RK4 flow map of ``spec`` run for time ``t`` (default
    ``spec.duration``) at the step size of ``spec``; its Jacobian comes from
    central differences.
    """
    t = spec.duration if t is None else t
    n = p.num_vars
    x0 = np.array([float(c) for c in spec.start])
    if t == 0:
        steps, dt = 0, 0.0
    else:
        steps = max(1, round(abs(t) / abs(spec.dt)))
        dt = t / steps
    field = _field_evaluator(p, spec.hamiltonian)

    def phi(x):
        return x if steps == 0 else _rk4(field, x, dt, steps)[-1]

    # batch all 2n perturbed starts through one integration
    offsets = np.concatenate([np.eye(n), -np.eye(n)]) * fd_step
    ends = phi(x0[None, :] + offsets)
    J = (ends[:n] - ends[n:]).T / (2 * fd_step)
    y = phi(x0)
    Pmat = _compile_matrix(p)
    gg = _compile_gradient(g)(y)
    gh = _compile_gradient(h)(y)
    pulled = gg @ J @ Pmat(x0) @ J.T @ gh
    direct = compile_poly(bracket(p, g, h))(y)
    residual = float(abs(pulled - direct))
    if not math.isfinite(residual):
        raise NumericError("non-finite residual")
    return residual


def _solve_sharp(P, u):
    """Least-squares ``alpha`` with ``P^T alpha = u`` and its residual."""
    alpha, *_ = np.linalg.lstsq(P.T, u, rcond=None)
    return alpha, float(np.linalg.norm(P.T @ alpha - u))


def leaf_form_at(p, x, u, v, tol=1e-9):
    """``w_N(u, v)`` at ``x`` for tangent vectors in the image of ``p~_x``.

    With ``X_f = P^T grad f`` and ``{f, g} = grad f . P grad g``, a covector
    ``alpha`` with ``P^T alpha = u`` gives ``w_N(u, v) = -alpha . v``.
    """
    P = _compile_matrix(p)(np.array(x, dtype=float))
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    scale = max(1.0, float(np.linalg.norm(u)), float(np.linalg.norm(v)))
    alpha, res = _solve_sharp(P, u)
    if res > tol * scale:
        raise NumericError(f"u is not tangent to the leaf (residual {res:.3e})")
    _, res_v = _solve_sharp(P, v)
    if res_v > tol * scale:
        raise NumericError(f"v is not tangent to the leaf (residual {res_v:.3e})")
    value = -float(alpha @ v)
    # the pairing must not depend on the null-space part of alpha
    _, s, vt = np.linalg.svd(P.T)
    null = vt[np.sum(s > 1e-12 * max(1.0, s.max(initial=0.0))):]
    for k in null:
        shifted = -float((alpha + k) @ v)
        if abs(shifted - value) > 1e-9 * max(1.0, abs(value)):
            raise NumericError("leaf form depends on the covector representative")
    return value


_ALLOWED_FUNCS = {"sin": sympy.sin, "cos": sympy.cos}


@dataclass(frozen=True)
class LeafChart:
    params: tuple
    bounds: tuple
    map: tuple
    nodes: tuple

    def __post_init__(self):
        if len(self.params) % 2 or not self.params:
            raise ChartError("a leaf chart needs an even, positive number of parameters")
        if len(self.bounds) != len(self.params) or len(self.nodes) != len(self.params):
            raise ChartError("bounds and node counts must match the parameters")
        if any(int(k) < 1 for k in self.nodes):
            raise ChartError("node counts must be positive")

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(
                tuple(data["params"]),
                tuple((float(a), float(b)) for a, b in data["bounds"]),
                tuple(data["map"]),
                tuple(int(k) for k in data["nodes"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ChartError(f"malformed chart: {exc}") from None

    def with_nodes(self, nodes):
        return LeafChart(self.params, self.bounds, self.map, tuple(nodes))

    @property
    def leaf_dim(self):
        return len(self.params)

    def symbols(self):
        return sympy.symbols(self.params, real=True)

    def expressions(self):
        syms = self.symbols()
        local = dict(zip(self.params, syms), **_ALLOWED_FUNCS)
        out = []
        for text in self.map:
            try:
                expr = sympy.sympify(text, locals=local, rational=True)
            except (sympy.SympifyError, SyntaxError, TypeError) as exc:
                raise ChartError(f"cannot parse chart expression {text!r}: {exc}") from None
            extra = expr.free_symbols - set(syms)
            if extra:
                raise ChartError(f"unknown symbols {sorted(map(str, extra))} in {text!r}")
            for fn in expr.atoms(sympy.Function):
                if fn.func not in (sympy.sin, sympy.cos):
                    raise ChartError(f"only sin and cos are allowed, got {fn.func}")
            out.append(expr)
        return out

    def compile(self):
        """``(points, tangents)`` evaluators on parameter arrays."""
        syms = self.symbols()
        exprs = self.expressions()
        pos = sympy.lambdify(syms, exprs, "numpy")
        tan = sympy.lambdify(syms, [[sympy.diff(e, s) for s in syms] for e in exprs], "numpy")

        def broadcast(values, shape):
            return np.stack([np.broadcast_to(np.asarray(v, dtype=float), shape) for v in values], -1)

        def points(theta):
            return broadcast(pos(*theta.T), theta.shape[:-1])

        def tangents(theta):
            rows = [broadcast(row, theta.shape[:-1]) for row in tan(*theta.T)]
            return np.stack(rows, axis=-2)  # (..., n, 2k)

        return points, tangents

    def quadrature(self):
        """Tensor Gauss-Legendre nodes ``(N, 2k)`` and weights ``(N,)``."""
        axes, weights = [], []
        for (a, b), k in zip(self.bounds, self.nodes):
            t, w = np.polynomial.legendre.leggauss(k)
            axes.append(0.5 * (b - a) * t + 0.5 * (b + a))
            weights.append(0.5 * (b - a) * w)
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
        wgrid = np.ones(1)
        for w in weights:
            wgrid = np.multiply.outer(wgrid, w).reshape(-1)
        return grid, wgrid


def _pfaffian(W):
    """Pfaffian of antisymmetric matrices stacked along the leading axes."""
    m = W.shape[-1]
    if m == 0:
        return np.ones(W.shape[:-2])
    if m == 2:
        return W[..., 0, 1]
    total = np.zeros(W.shape[:-2])
    for j in range(1, m):
        keep = [i for i in range(1, m) if i != j]
        minor = W[..., keep, :][..., :, keep]
        total = total + (-1) ** (j + 1) * W[..., 0, j] * _pfaffian(minor)
    return total


def leaf_density(p, chart, tol=1e-8):
    """Nodes, weights, image points and the pulled-back ``w_N^k`` density.

    Raises ``ChartError`` if a node image has the wrong rank or a chart
    tangent leaves the span of the Hamiltonian directions.
    """
    if chart.map and len(chart.map) != p.num_vars:
        raise ChartError(f"chart maps into R^{len(chart.map)}, structure lives on R^{p.num_vars}")
    points, tangents = chart.compile()
    theta, weights = chart.quadrature()
    x = points(theta)
    T = tangents(theta)
    P = _compile_matrix(p)(x)
    Pt = np.swapaxes(P, -1, -2)
    two_k = chart.leaf_dim
    s = np.linalg.svd(P, compute_uv=False)
    top = np.maximum(s[..., :1], 1.0)
    ranks = np.sum(s > tol * top, axis=-1)
    bad = np.flatnonzero(ranks != two_k)
    if bad.size:
        raise ChartError(
            f"structure rank {int(ranks[bad[0]])} at node {bad[0]} differs from leaf dimension {two_k}",
            residual=float(s[bad[0], two_k - 1]) if two_k <= s.shape[-1] else None,
        )
    alpha = np.linalg.pinv(Pt, rcond=tol) @ T
    residual = np.linalg.norm(Pt @ alpha - T, axis=-2) / np.maximum(np.linalg.norm(T, axis=-2), 1.0)
    worst = float(residual.max(initial=0.0))
    if worst > 1e-7:
        raise ChartError(f"chart tangents leave the leaf (max residual {worst:.3e})", residual=worst)
    W = -np.swapaxes(alpha, -1, -2) @ T
    k = two_k // 2
    density = math.factorial(k) * _pfaffian(W)
    return theta, weights, x, density


def leaf_integrate(p, chart, f):
    """``<delta_N, f>``: integral of ``f`` against ``w_N^k`` over the chart."""
    _, weights, x, density = leaf_density(p, chart)
    values = compile_poly(f)(x) * density * weights
    total = math.fsum(values.tolist())
    if not math.isfinite(total):
        raise NumericError("non-finite leaf integral")
    return total


def leaf_distribution_check(p, chart, phi, psi):
    """``|<delta_N, {phi, psi}>|``; exactly zero when the bracket is zero."""
    b = bracket(p, phi, psi)
    if b.is_zero():
        return 0.0
    return abs(leaf_integrate(p, chart, b))


def dirac_pairing(p, a, f, g):
    """``<delta_a, {f, g}> = {f, g}(a)``, exact."""
    return bracket(p, f, g).eval(as_point(a, p.num_vars))


@dataclass(frozen=True)
class TopPowerResult:
    holds: bool
    sign: int
    lhs: DiffForm
    rhs: DiffForm

    def __bool__(self):
        return self.holds


def _top_power_sides(omega, f, g):
    n = omega.num_vars
    if n % 2:
        raise DegreeError("a symplectic form needs an even number of variables")
    k = n // 2
    p = jacobi_check(bivector_from_form(omega))
    lhs = wedge_all([omega] * k) * bracket(p, f, g)
    rest = wedge_all([DiffForm.differential(g), DiffForm.differential(f)] + [omega] * (k - 1))
    return lhs, rest * k


def top_power_sign(omega):
    """The global sign fixed by the coordinate pair ``(x_1, x_2)``."""
    xs = Poly.variables(omega.num_vars)
    lhs, rhs = _top_power_sides(omega, xs[0], xs[1])
    if rhs.is_zero():
        raise DegreeError("degenerate form: the sign is not determined")
    top = tuple(range(omega.num_vars))
    ratio = lhs.coefficient(top).constant_term() / rhs.coefficient(top).constant_term()
    if ratio not in (1, -1):
        raise AssertionError(f"sides differ by {ratio}, not a sign")
    return int(ratio)


def top_power_bracket_check(omega, f, g, sign=None):
    """``{f, g} w^k = sign * k * dg ^ df ^ w^(k-1)`` for constant symplectic ``w``."""
    sign = top_power_sign(omega) if sign is None else sign
    lhs, rhs = _top_power_sides(omega, f, g)
    return TopPowerResult(lhs == rhs * Fraction(sign), sign, lhs, rhs)
