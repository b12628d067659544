"""Exact solver for linear systems over the integers.

Brings the coefficient matrix to column echelon form with unimodular
column operations (Hermite-style gcd elimination), solves the triangular
system with divisibility checks, and maps the solution back.  Returns one
solution of A z = b, or None when no integer solution exists.
"""

from __future__ import annotations

from typing import Optional, Sequence


def solve_integer_system(
    rows: Sequence[Sequence[int]], rhs: Sequence[int]
) -> Optional[list[int]]:
    """One integer solution z of ``rows * z == rhs``, or None.

    ``rows`` is a list of equal-length coefficient rows; an empty system
    (or one with no variables) is handled degenerately.
    """
    m = len(rows)
    if m != len(rhs):
        raise ValueError("rhs length does not match row count")
    n = len(rows[0]) if m else 0
    if any(len(r) != n for r in rows):
        raise ValueError("ragged coefficient matrix")
    if n == 0:
        return [] if all(v == 0 for v in rhs) else None

    a = [list(r) for r in rows]
    # v accumulates the column operations: a_original @ v == a_current
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    pivots: list[tuple[int, int]] = []
    next_col = 0
    for r in range(m):
        if next_col >= n:
            break
        # gcd-eliminate row r across columns next_col..n-1
        for c in range(next_col + 1, n):
            while a[r][c]:
                if a[r][next_col]:
                    q = a[r][next_col] // a[r][c]
                    for t in range(m):
                        a[t][next_col] -= q * a[t][c]
                    for t in range(n):
                        v[t][next_col] -= q * v[t][c]
                # swap so the (possibly zero) remainder moves right
                for t in range(m):
                    a[t][next_col], a[t][c] = a[t][c], a[t][next_col]
                for t in range(n):
                    v[t][next_col], v[t][c] = v[t][c], v[t][next_col]
        if a[r][next_col]:
            pivots.append((r, next_col))
            next_col += 1

    # forward-substitute on the echelon matrix
    y = [0] * n
    for r, c in pivots:
        acc = rhs[r] - sum(a[r][cc] * y[cc] for _, cc in pivots if cc < c)
        piv = a[r][c]
        if acc % piv:
            return None
        y[c] = acc // piv

    # verify every equation (rows without pivots included)
    for r in range(m):
        if sum(a[r][c] * y[c] for c in range(n)) != rhs[r]:
            return None

    z = [sum(v[i][j] * y[j] for j in range(n)) for i in range(n)]
    return z
