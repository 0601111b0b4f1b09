"""Exact linear algebra over the rationals.

Vectors are sparse ``{index: Fraction}`` dicts; a matrix is a list of such
columns (or rows, depending on the caller).  Rank uses fraction-free
Bareiss elimination on an integer scaling of the input, kernels use
Gauss-Jordan reduction over ``Fraction``.
"""

from fractions import Fraction
from math import lcm


def _integer_rows(rows, ncols):
    out = []
    for row in rows:
        items = {j: Fraction(v) for j, v in row.items() if v}
        if not items:
            continue
        scale = lcm(*(v.denominator for v in items.values()))
        dense = [0] * ncols
        for j, v in items.items():
            dense[j] = int(v * scale)
        out.append(dense)
    return out


def bareiss_rank(rows, ncols):
    """Rank of a sparse-row matrix by fraction-free elimination."""
    m = _integer_rows(rows, ncols)
    rank = 0
    prev = 1
    nrows = len(m)
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        piv = m[rank][col]
        for r in range(rank + 1, nrows):
            f = m[r][col]
            row_r, row_p = m[r], m[rank]
            for c in range(col, ncols):
                # exact by Sylvester's identity
                row_r[c] = (piv * row_r[c] - f * row_p[c]) // prev
        prev = piv
        rank += 1
        if rank == nrows:
            break
    return rank


def row_reduce(rows):
    """Reduced row echelon form of sparse rows.

    Returns ``(reduced_rows, pivots)`` where ``pivots[i]`` is the pivot
    column of ``reduced_rows[i]``; pivots are increasing.
    """
    work = [{j: Fraction(v) for j, v in row.items() if v} for row in rows]
    work = [r for r in work if r]
    reduced = []
    pivots = []
    for row in work:
        for prow, pc in zip(reduced, pivots):
            f = row.get(pc)
            if f:
                for j, v in prow.items():
                    s = row.get(j, 0) - f * v
                    if s:
                        row[j] = s
                    else:
                        row.pop(j, None)
        if not row:
            continue
        pc = min(row)
        inv = 1 / row[pc]
        row = {j: v * inv for j, v in row.items()}
        for i, prow in enumerate(reduced):
            f = prow.get(pc)
            if f:
                for j, v in row.items():
                    s = prow.get(j, 0) - f * v
                    if s:
                        prow[j] = s
                    else:
                        prow.pop(j, None)
        reduced.append(row)
        pivots.append(pc)
    order = sorted(range(len(pivots)), key=pivots.__getitem__)
    return [reduced[i] for i in order], [pivots[i] for i in order]


def nullspace(rows, ncols):
    """Basis of ``{x : row . x = 0 for every row}``."""
    reduced, pivots = row_reduce(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = {free: Fraction(1)}
        for row, pc in zip(reduced, pivots):
            v = row.get(free)
            if v:
                vec[pc] = -v
        basis.append(vec)
    return basis


def transpose(vectors):
    out = {}
    for j, vec in enumerate(vectors):
        for i, v in vec.items():
            out.setdefault(i, {})[j] = v
    return [out[i] for i in sorted(out)]


def solve_in_span(columns, target):
    """Coefficients ``c`` with ``sum c_j columns[j] = target``, or ``None``."""
    ncols = len(columns)
    aug = transpose(list(columns) + [target])
    reduced, pivots = row_reduce(aug)
    if ncols in pivots:
        return None
    coeffs = {}
    for row, pc in zip(reduced, pivots):
        v = row.get(ncols)
        if v:
            coeffs[pc] = v
    return coeffs


def dense_rank(matrix):
    rows = [{j: v for j, v in enumerate(r) if v} for r in matrix]
    ncols = max((len(r) for r in matrix), default=0)
    return bareiss_rank(rows, ncols)


def inverse(matrix):
    """Exact inverse of a square matrix given as nested lists."""
    n = len(matrix)
    rows = []
    for i, r in enumerate(matrix):
        row = {j: Fraction(v) for j, v in enumerate(r) if v}
        row[n + i] = Fraction(1)
        rows.append(row)
    reduced, pivots = row_reduce(rows)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [[reduced[i].get(n + j, Fraction(0)) for j in range(n)] for i in range(n)]
