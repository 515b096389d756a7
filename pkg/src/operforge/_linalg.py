"""Exact linear algebra over Fraction, on small dense matrices.

Matrices are lists of lists (rows); vectors are lists.  Everything copies
its input, nothing is modified in place from the caller's point of view.
"""

from __future__ import annotations

from fractions import Fraction as Q


def _copy(mat):
    return [list(row) for row in mat]


def _eliminate(mat):
    """Row echelon form; returns (echelon rows, pivot column list)."""
    rows = _copy(mat)
    n = len(rows)
    m = len(rows[0]) if n else 0
    pivots = []
    r = 0
    for c in range(m):
        pivot = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Q(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return rows, pivots


def matrix_rank(mat):
    if not mat:
        return 0
    return len(_eliminate(mat)[1])


def solve_unique(mat, rhs):
    """Solve mat @ x = rhs with mat square invertible; raises on failure."""
    n = len(mat)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(mat)]
    rows, pivots = _eliminate(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [rows[i][n] for i in range(n)]


def is_invertible(mat):
    n = len(mat)
    return matrix_rank(mat) == n


def inverse(mat):
    n = len(mat)
    aug = [list(row) + [Q(1) if i == j else Q(0) for j in range(n)]
           for i, row in enumerate(mat)]
    rows, pivots = _eliminate(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in rows]


def nullspace(mat):
    """Basis of the right kernel, deterministic order."""
    if not mat:
        return []
    m = len(mat[0])
    rows, pivots = _eliminate(mat)
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        v = [Q(0)] * m
        v[fc] = Q(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(v)
    return basis


def solve_in_span(columns, target):
    """Coefficients expressing target in the span of the given columns.

    Raises ValueError when target is outside the span or the expression is
    not unique (columns dependent).
    """
    n = len(target)
    k = len(columns)
    aug = [[columns[j][i] for j in range(k)] + [target[i]] for i in range(n)]
    rows, pivots = _eliminate(aug)
    if k in pivots:
        raise ValueError("target not in span")
    if pivots != list(range(k)):
        raise ValueError("columns are linearly dependent")
    coeffs = [Q(0)] * k
    for r, pc in enumerate(pivots):
        coeffs[pc] = rows[r][k]
    return coeffs


def charpoly(mat):
    """Characteristic polynomial of a square matrix, monic.

    Returns [1, c_1, ..., c_n] with det(xI - M) = x^n + c_1 x^{n-1} + ... + c_n,
    by the Faddeev-LeVerrier recursion (exact over Fraction).
    """
    n = len(mat)
    coeffs = [Q(1)]
    m_prev = [[Q(1) if i == j else Q(0) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        am = _matmul(mat, m_prev)
        ck = -sum(am[i][i] for i in range(n)) / k
        coeffs.append(ck)
        m_prev = [[am[i][j] + (ck if i == j else 0) for j in range(n)]
                  for i in range(n)]
    return coeffs


def _matmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = [[Q(0)] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        oi[j] += x * bt[j]
    return out


def mat_power_rank(mat, power):
    p = _copy(mat)
    for _ in range(power - 1):
        p = _matmul(p, mat)
    return matrix_rank(p)
