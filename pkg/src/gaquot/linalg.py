"""Exact rational Gaussian elimination for small dense systems.

Deterministic pivoting (first nonzero entry in row order) so nullspace
bases are reproducible bit for bit.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List


def rref(rows: List[List[Fraction]]):
    """Reduced row echelon form in place-free copy; returns (rows, pivots)."""
    matrix = [list(row) for row in rows]
    nrows = len(matrix)
    ncols = len(matrix[0]) if matrix else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if matrix[i][c] != 0), None)
        if pivot_row is None:
            continue
        matrix[r], matrix[pivot_row] = matrix[pivot_row], matrix[r]
        scale = matrix[r][c]
        matrix[r] = [x / scale for x in matrix[r]]
        for i in range(nrows):
            if i != r and matrix[i][c] != 0:
                factor = matrix[i][c]
                matrix[i] = [x - factor * y for x, y in zip(matrix[i], matrix[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return matrix[:r], pivots


def nullspace(rows: List[List[Fraction]], ncols: int):
    """Canonical basis of the solution space of rows * x = 0.

    One vector per free column: 1 at the free column, the negated reduced
    column elsewhere.
    """
    reduced, pivots = rref(rows) if rows else ([], [])
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -reduced[r][free]
        basis.append(vec)
    return basis
