"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Poly` maps exponent tuples to nonzero :class:`~fractions.Fraction`
coefficients.  Terms are kept in graded-lex order (highest first), so two
polynomials are equal exactly when their term tables are equal.
"""

import ast
import itertools
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .errors import DimensionError, ParseError

__all__ = [
    "Poly",
    "as_point",
    "default_names",
    "grlex_key",
    "monomials_up_to",
    "parse_poly",
    "poly_add",
    "poly_eval",
    "poly_mul",
    "poly_partial",
]


def grlex_key(exps):
    return (sum(exps), exps)


def default_names(n):
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i + 1}" for i in range(n))


@lru_cache(maxsize=None)
def monomials_up_to(n, d):
    """Exponent tuples of total degree <= d in ascending graded-lex order."""
    out = []
    for total in range(d + 1):
        block = []
        for combo in itertools.combinations_with_replacement(range(n), total):
            exps = [0] * n
            for i in combo:
                exps[i] += 1
            block.append(tuple(exps))
        out.extend(sorted(block))
    return tuple(out)


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"exact rational coefficient expected, got {type(c).__name__}")


def as_point(coords, num_vars=None):
    """Convert coordinates to a tuple of Fractions, checking the length."""
    pt = tuple(_as_fraction(c) for c in coords)
    if num_vars is not None and len(pt) != num_vars:
        raise DimensionError(f"point has {len(pt)} coordinates, expected {num_vars}")
    return pt


class Poly:
    __slots__ = ("num_vars", "_terms", "_hash")

    def __init__(self, num_vars, terms=()):
        if num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        items = terms.items() if hasattr(terms, "items") else terms
        acc = {}
        for exps, c in items:
            exps = tuple(exps)
            if len(exps) != num_vars or any(e < 0 for e in exps):
                raise DimensionError(f"bad exponent tuple {exps} for {num_vars} variables")
            c = _as_fraction(c)
            if c:
                acc[exps] = acc.get(exps, 0) + c
        self.num_vars = num_vars
        self._terms = {k: c for k, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, num_vars, terms):
        # terms already nonzero Fractions; display order is applied lazily
        obj = cls.__new__(cls)
        obj.num_vars = num_vars
        obj._terms = terms
        obj._hash = None
        return obj

    # construction helpers

    @classmethod
    def zero(cls, n):
        return cls._raw(n, {})

    @classmethod
    def const(cls, n, c):
        c = _as_fraction(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def var(cls, n, i):
        if not 0 <= i < n:
            raise DimensionError(f"variable index {i} out of range for {n} variables")
        exps = [0] * n
        exps[i] = 1
        return cls._raw(n, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, exps, c=1):
        return cls(len(exps), {tuple(exps): c})

    @classmethod
    def variables(cls, n):
        return tuple(cls.var(n, i) for i in range(n))

    # inspection

    @property
    def terms(self):
        """Term table in descending graded-lex order."""
        return {k: self._terms[k] for k in sorted(self._terms, key=grlex_key, reverse=True)}

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return not self._terms or (len(self._terms) == 1 and (0,) * self.num_vars in self._terms)

    def constant_term(self):
        return self._terms.get((0,) * self.num_vars, Fraction(0))

    @property
    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def coefficient(self, exps):
        return self._terms.get(tuple(exps), Fraction(0))

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.num_vars != self.num_vars:
                raise DimensionError(
                    f"polynomials over {self.num_vars} and {other.num_vars} variables"
                )
            return other
        if isinstance(other, (int, Rational)):
            return Poly.const(self.num_vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for k, c in other._terms.items():
            s = acc.get(k, 0) + c
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
        return Poly._raw(self.num_vars, acc)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.num_vars, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            c = _as_fraction(other)
            if not c:
                return Poly.zero(self.num_vars)
            return Poly._raw(self.num_vars, {k: v * c for k, v in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = {}
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                acc[k] = acc.get(k, 0) + ca * cb
        return Poly._raw(self.num_vars, {k: c for k, c in acc.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)) and other != 0:
            return self * (Fraction(1) / _as_fraction(other))
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = Poly.const(self.num_vars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def partial(self, i):
        if not 0 <= i < self.num_vars:
            raise DimensionError(f"variable index {i} out of range for {self.num_vars} variables")
        acc = {}
        for exps, c in self._terms.items():
            e = exps[i]
            if e:
                k = exps[:i] + (e - 1,) + exps[i + 1:]
                acc[k] = c * e
        return Poly._raw(self.num_vars, acc)

    def gradient(self):
        return tuple(self.partial(i) for i in range(self.num_vars))

    def eval(self, point):
        point = as_point(point, self.num_vars)
        total = Fraction(0)
        for exps, c in self._terms.items():
            term = c
            for x, e in zip(point, exps):
                if e:
                    term *= x ** e
            total += term
        return total

    __call__ = eval

    def substitute(self, values):
        """Compose with a tuple of Polys, one per variable."""
        values = list(values)
        if len(values) != self.num_vars:
            raise DimensionError("wrong number of substitution values")
        n = values[0].num_vars if values else 0
        out = Poly.zero(n)
        for exps, c in self._terms.items():
            term = Poly.const(n, c)
            for v, e in zip(values, exps):
                if e:
                    term = term * v ** e
            out = out + term
        return out

    # comparison

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.num_vars == other.num_vars and self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num_vars, frozenset(self._terms.items())))
        return self._hash

    # text

    def to_str(self, names=None):
        names = tuple(names) if names is not None else default_names(self.num_vars)
        if not self._terms:
            return "0"
        parts = []
        for exps, c in self.terms.items():
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.to_str()!r}, num_vars={self.num_vars})"


# operation-level names


def poly_add(a, b):
    return a + b


def poly_mul(a, b):
    return a * b


def poly_partial(a, i):
    return a.partial(i)


def poly_eval(a, x):
    return a.eval(x)


# parsing

_CARET = re.compile(r"\^")


def _prepare(text):
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression", text, 0)
    if "**" in text:
        raise ParseError("use '^' for powers", text, text.index("**"))
    return _CARET.sub("**", text)


def _column(original, node):
    # map a column of the '^'->'**' rewritten text back to the original
    col = getattr(node, "col_offset", 0)
    lead = len(original) - len(original.lstrip())
    src_pos = 0
    for i, ch in enumerate(original[lead:]):
        if src_pos >= col:
            return lead + i
        src_pos += 2 if ch == "^" else 1
    return len(original)


def parse_expression(text, names, atom=None, zero=None):
    """Evaluate the ring grammar over an arbitrary algebra.

    ``atom(name, node)`` resolves bare names; calls such as ``e(1,2)`` are
    passed to ``atom`` as ``(func_name, args)``.  Integers stay ``Fraction``
    until they meet an algebra element.
    """
    src = _prepare(text)
    try:
        tree = ast.parse(src.strip(), mode="eval")
    except SyntaxError as exc:
        col = (exc.offset or 1) - 1
        raise ParseError(f"syntax error: {exc.msg}", text, col) from None

    def fail(msg, node):
        raise ParseError(msg, text, _column(text, node))

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                fail(f"unsupported literal {node.value!r}", node)
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            return atom(node.id, node, fail)
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.keywords:
                fail("unsupported call", node)
            args = []
            for a in node.args:
                if not (isinstance(a, ast.Constant) and isinstance(a.value, int)):
                    fail("basis indices must be integer literals", a)
                args.append(a.value)
            return atom((node.func.id, tuple(args)), node, fail)
        if isinstance(node, ast.UnaryOp):
            v = ev(node.operand)
            if isinstance(node.op, ast.USub):
                return -v
            if isinstance(node.op, ast.UAdd):
                return v
            fail("unsupported unary operator", node)
        if isinstance(node, ast.BinOp):
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not isinstance(right, Fraction):
                    fail("division only by rational constants", node)
                if right == 0:
                    fail("division by zero", node)
                return left / right
            if isinstance(node.op, ast.Pow):
                if not (isinstance(right, Fraction) and right.denominator == 1 and right >= 0):
                    fail("exponent must be a non-negative integer", node)
                return left ** int(right)
            fail("unsupported operator", node)
        fail(f"unsupported syntax {type(node).__name__}", node)

    value = ev(tree)
    if isinstance(value, Fraction) and zero is not None:
        value = zero + value
    return value


def parse_poly(text, names):
    """Parse e.g. ``"3/2*x^2*y - z"`` over the declared variable names."""
    names = tuple(names)
    n = len(names)
    index = {name: i for i, name in enumerate(names)}

    def atom(name, node, fail):
        if isinstance(name, tuple):
            fail(f"unexpected call {name[0]}(...) in a polynomial", node)
        if name not in index:
            fail(f"undeclared variable {name!r}", node)
        return Poly.var(n, index[name])

    return parse_expression(text, names, atom, zero=Poly.zero(n))
