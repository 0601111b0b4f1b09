"""Structure and chart files.

Structure: ``{"vars": ["x", "y", "z"], "poisson": [[coeff, [i, j]], ...]}``
with 1-based ``i < j``; ``coeff`` is an integer or a polynomial string.
Chart: ``{"params": [...], "bounds": [[lo, hi], ...], "map": [...], "nodes": [...]}``.
"""

import json
from fractions import Fraction

from .errors import ChartError, ParseError
from .exterior import MultiVector
from .numeric import LeafChart
from .poisson import jacobi_check
from .ring import Poly, parse_poly

__all__ = ["load_chart", "load_structure", "parse_structure", "structure_to_dict"]


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc.msg}", exc.doc, exc.colno) from None


def parse_structure(data):
    """Bivector and variable names from decoded structure JSON (unverified)."""
    if not isinstance(data, dict) or "vars" not in data or "poisson" not in data:
        raise ParseError('structure needs "vars" and "poisson" keys')
    names = data["vars"]
    if not isinstance(names, list) or not all(isinstance(v, str) and v.isidentifier() for v in names):
        raise ParseError('"vars" must be a list of identifiers')
    if len(set(names)) != len(names):
        raise ParseError('"vars" contains duplicates')
    if {"e", "dx"} & set(names):
        raise ParseError('"e" and "dx" are reserved names')
    n = len(names)
    terms = {}
    for pos, entry in enumerate(data["poisson"]):
        try:
            coeff, (i, j) = entry
        except (TypeError, ValueError):
            raise ParseError(f"poisson entry {pos}: expected [coeff, [i, j]]") from None
        if not (isinstance(i, int) and isinstance(j, int) and 1 <= i < j <= n):
            raise ParseError(f"poisson entry {pos}: need 1 <= i < j <= {n}, got [{i}, {j}]")
        if isinstance(coeff, bool) or not isinstance(coeff, (int, str)):
            raise ParseError(f"poisson entry {pos}: coefficient must be an integer or a string")
        c = Poly.const(n, coeff) if isinstance(coeff, int) else parse_poly(coeff, names)
        key = (i - 1, j - 1)
        terms[key] = terms[key] + c if key in terms else c
    return MultiVector(n, {k: c for k, c in terms.items() if c}), tuple(names)


def load_structure(path):
    """Read a structure file and run the Jacobi check on it."""
    bivector, names = parse_structure(_read_json(path))
    return jacobi_check(bivector, names)


def structure_to_dict(p):
    names = list(p.names) if p.names else None
    return {
        "vars": names,
        "poisson": [[c.to_str(names), [i + 1, j + 1]] for (i, j), c in p.bivector.terms.items()],
    }


def load_chart(path):
    data = _read_json(path)
    if not isinstance(data, dict):
        raise ParseError("chart must be a JSON object")
    try:
        return LeafChart.from_dict(data)
    except ChartError as exc:
        raise ParseError(str(exc)) from None


def fraction_str(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
