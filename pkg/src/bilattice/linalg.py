"""Exact Gaussian elimination over :class:`ExactScalar`."""

from __future__ import annotations

from typing import Sequence

from .scalar import ONE, ZERO, ExactScalar


def det(matrix: Sequence[Sequence[ExactScalar]]) -> ExactScalar:
    """Determinant by row reduction with nonzero pivot search."""
    a = [list(row) for row in matrix]
    n = len(a)
    sign = ONE
    out = ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        p = a[col][col]
        out = out * p
        inv = p.inverse()
        for r in range(col + 1, n):
            f = a[r][col]
            if f.is_zero():
                continue
            f = f * inv
            row_r, row_c = a[r], a[col]
            for c in range(col + 1, n):
                row_r[c] = row_r[c] - f * row_c[c]
    return sign * out


def solve(matrix: Sequence[Sequence[ExactScalar]], rhs: Sequence[ExactScalar]) -> list:
    """Solve a square nonsingular system; raises ``ZeroDivisionError`` if singular."""
    n = len(matrix)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if pivot is None:
            raise ZeroDivisionError(f"singular system (column {col})")
        a[col], a[pivot] = a[pivot], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r == col or a[r][col].is_zero():
                continue
            f = a[r][col]
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]
