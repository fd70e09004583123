"""Exact rational linear algebra: ranks, kernels and LP feasibility over Q."""

from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple


def row_echelon(rows: Sequence[Sequence], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    rows = list(rows)
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    return len(row_echelon(rows, ncols)[1])


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> List[List[Fraction]]:
    if not a:
        return []
    inner = len(b)
    ncols = len(b[0]) if b else 0
    return [[sum((Fraction(a[i][k]) * b[k][j] for k in range(inner)), Fraction(0))
             for j in range(ncols)] for i in range(len(a))]


def is_zero_matrix(m: Sequence[Sequence]) -> bool:
    return all(x == 0 for r in m for x in r)


def feasible_point(A: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[List[Fraction]]:
    """A point ``x >= 0`` with ``A x = b`` over Q, or ``None`` if there is none.

    Phase-one simplex on an exact tableau with Bland's rule (so it cannot cycle).
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return [Fraction(0)] * n
    rows = []
    rhs = []
    for i in range(m):
        sgn = -1 if b[i] < 0 else 1
        rows.append([Fraction(sgn * x) for x in A[i]] + [Fraction(int(k == i)) for k in range(m)])
        rhs.append(Fraction(sgn * b[i]))
    basis = list(range(n, n + m))
    # minimise the sum of artificials: reduced costs in terms of the nonbasic columns
    cost = [-sum(rows[i][j] for i in range(m)) for j in range(n)] + [Fraction(0)] * m
    while True:
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if rows[i][enter] > 0:
                ratio = rhs[i] / rows[i][enter]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # unbounded direction; cannot happen for a sum of artificials
            break
        piv = best[1]
        pv = rows[piv][enter]
        rows[piv] = [x / pv for x in rows[piv]]
        rhs[piv] /= pv
        for i in range(m):
            if i != piv and rows[i][enter] != 0:
                f = rows[i][enter]
                rows[i] = [a - f * c for a, c in zip(rows[i], rows[piv])]
                rhs[i] -= f * rhs[piv]
        f = cost[enter]
        cost = [a - f * c for a, c in zip(cost, rows[piv])]
        basis[piv] = enter
    if any(rhs[i] != 0 for i, j in enumerate(basis) if j >= n):
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rhs[i]
    return x


def clear_denominators(v: Sequence[Fraction]) -> Tuple[int, ...]:
    d = lcm(*(Fraction(x).denominator for x in v)) if v else 1
    return tuple(int(x * d) for x in v)
