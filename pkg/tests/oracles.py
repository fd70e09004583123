"""Brute-force oracles that share no code with the package under test."""

import random
from fractions import Fraction
from itertools import combinations, product
from math import comb, gcd


def det(m):
    """Laplace expansion; fine for the tiny matrices used here."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * det([row[:j] + row[j + 1:] for row in m[1:]])
               for j in range(n) if m[0][j])


def determinantal_invariants(rows, ncols):
    """Nonzero invariant factors from gcds of k x k minors."""
    nrows = len(rows)
    divisors = [1]
    for k in range(1, min(nrows, ncols) + 1):
        g = 0
        for ri in combinations(range(nrows), k):
            for ci in combinations(range(ncols), k):
                g = gcd(g, det([[rows[i][j] for j in ci] for i in ri]))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[k] // divisors[k - 1] for k in range(1, len(divisors))]


def rational_rank(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[rank], m[p] = m[p], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def elements_up_to(gens, psi, bound):
    """All elements of the monoid generated by ``gens`` with psi-degree <= bound.

    ``psi`` must be positive on every generator, so the search terminates.
    """
    dot = lambda a, b: sum(x * y for x, y in zip(a, b))
    zero = tuple(0 for _ in psi)
    seen = {zero}
    stack = [zero]
    while stack:
        v = stack.pop()
        for g in gens:
            w = tuple(a + b for a, b in zip(v, g))
            if w not in seen and dot(psi, w) <= bound:
                seen.add(w)
                stack.append(w)
    return seen


def brute_hilbert_basis(gens, psi):
    """Irreducible generators, found by enumerating everything of smaller degree."""
    dot = lambda a, b: sum(x * y for x, y in zip(a, b))
    top = max(dot(psi, g) for g in gens)
    elems = elements_up_to(gens, psi, top)
    zero = tuple(0 for _ in psi)
    out = set()
    for g in set(gens):
        reducible = any(
            a != zero and a != g and tuple(x - y for x, y in zip(g, a)) in elems
            for a in elems if dot(psi, a) < dot(psi, g)
        )
        if not reducible:
            out.add(g)
    return sorted(out)


def random_pointed_monoid(rng: random.Random, dim=3, lo=-4, hi=4, max_gens=6):
    psi = tuple(rng.randint(1, 3) for _ in range(dim))
    gens = []
    target = rng.randint(2, max_gens)
    while len(gens) < target:
        g = tuple(rng.randint(lo, hi) for _ in range(dim))
        if sum(a * b for a, b in zip(psi, g)) > 0:
            gens.append(g)
    return psi, gens


def koszul_rule(rho_columns, n, weight):
    """Cohomology dims of the weight piece: binomials if the weight dies in V, else zeros."""
    r = rational_rank(rho_columns) if rho_columns else 0
    d = n - r
    dies = (rational_rank(list(rho_columns) + [list(weight)]) if rho_columns else
            rational_rank([list(weight)])) == r
    return tuple(comb(d, m) if dies else 0 for m in range(d + 1))


def random_matrix(rng: random.Random, max_rows=4, max_cols=5, bound=9):
    r, c = rng.randint(1, max_rows), rng.randint(1, max_cols)
    return [[rng.randint(-bound, bound) for _ in range(c)] for _ in range(r)]


def box(dim, radius):
    return product(range(-radius, radius + 1), repeat=dim)


def random_koszul_case(rng: random.Random):
    """Rank <= 4, up to two base generators, and a weight in N^n.

    About half the time the weight is built inside the image of rho, so both
    branches of the closed-form rule get exercised.
    """
    n = rng.randint(1, 4)
    cols = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(rng.randint(0, 2))]
    if cols and rng.random() < 0.5:
        t = [rng.randint(-2, 2) for _ in cols]
        w = [sum(ti * c[i] for ti, c in zip(t, cols)) for i in range(n)]
        if min(w) >= 0:
            return n, cols, w
    return n, cols, [rng.randint(0, 3) for _ in range(n)]
