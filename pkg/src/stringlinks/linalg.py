"""Small exact linear algebra over the rationals for calibration and rank
computations."""

from __future__ import annotations

from fractions import Fraction


def rref(matrix):
    """Reduced row echelon form.  Returns (rows, pivot column indices)."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    if not rows:
        return [], []
    cols = len(rows[0])
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def solve(matrix, rhs):
    """Solve A x = b exactly.

    Returns (particular solution, nullspace basis) or None when inconsistent.
    """
    if not matrix:
        return [], []
    cols = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows, pivots = rref(aug)
    if cols in pivots:
        return None
    particular = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        particular[c] = rows[r][cols]
    free = [c for c in range(cols) if c not in pivots]
    null_basis = []
    for f in free:
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -rows[r][f]
        null_basis.append(vec)
    return particular, null_basis


def in_row_span(matrix, vector) -> bool:
    """Whether the vector lies in the row span of the matrix."""
    base = rank(matrix)
    return rank(list(matrix) + [list(vector)]) == base
