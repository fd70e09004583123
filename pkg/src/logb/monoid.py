"""Affine monoids: finitely generated submonoids of a lattice Z^n.

A monoid is stored by its generators.  Whenever a construction lands in a
quotient lattice ``Z^m / L`` the quotient is re-coordinatized immediately
(``intlat.quotient_map``) so every monoid lives in a free ambient lattice.
Monoid equality means mutual containment of generators.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

from . import qlin
from .errors import DimensionGuard, MalformedInput, NotPointed, SearchBudgetExceeded, UnsupportedMonoid, step_budget
from .intlat import (
    IntMatrix,
    Vector,
    hermite_rows,
    kernel_lattice,
    lattice_basis,
    left_inverse,
    quotient_map,
    reduce_mod_lattice,
    solve_integral,
)

PREIMAGE_MAX_DIM = 10


def _vec(v, n=None) -> Vector:
    v = tuple(int(x) for x in v)
    if n is not None and len(v) != n:
        raise MalformedInput(f"vector {v} does not live in Z^{n}")
    return v


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _scale(c, a):
    return tuple(c * x for x in a)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class AffineMonoid:
    ambient_rank: int
    generators: Tuple[Vector, ...]
    quotient_normalization: Optional[IntMatrix] = field(default=None, compare=False)

    def __post_init__(self):
        gens = {_vec(g, self.ambient_rank) for g in self.generators}
        gens.discard((0,) * self.ambient_rank)
        object.__setattr__(self, "generators", tuple(sorted(gens, reverse=True)))

    @classmethod
    def free(cls, n: int) -> "AffineMonoid":
        """The standard monoid N^n."""
        return cls(n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def generator_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.generators, rows=self.ambient_rank)

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def to_json(self):
        return {"ambient_rank": self.ambient_rank, "generators": [list(g) for g in self.generators]}


@dataclass(frozen=True)
class UnitSplitting:
    unit_basis: IntMatrix
    pointed_generators: Tuple[Vector, ...]
    is_free_pointed: bool
    iso_to_standard: Optional[IntMatrix]

    @property
    def free_rank(self) -> int:
        return len(self.pointed_generators)

    @property
    def unit_rank(self) -> int:
        return self.unit_basis.cols

    def to_json(self):
        return {
            "free_rank": self.free_rank,
            "unit_rank": self.unit_rank,
            "is_free_pointed": self.is_free_pointed,
            "unit_basis": [list(c) for c in self.unit_basis.columns()],
            "pointed_generators": [list(g) for g in self.pointed_generators],
            "iso_to_standard": None if self.iso_to_standard is None else self.iso_to_standard.to_rows(),
        }


@dataclass(frozen=True)
class _Structure:
    unit_indices: Tuple[int, ...]
    unit_hermite: Tuple[Vector, ...]
    functional: Vector  # zero on units, positive on every other generator


@lru_cache(maxsize=512)
def _structure(M: AffineMonoid) -> _Structure:
    gens = M.generators
    k, n = len(gens), M.ambient_rank
    cols = [[g[i] for g in gens] for i in range(n)]  # rows of the generator matrix

    # generator i is a unit iff some c >= 0 with c_i = 1 solves sum c_j g_j = 0
    units = set()
    for i in range(k):
        if i in units:
            continue
        A = cols + [[int(j == i) for j in range(k)]]
        sol = qlin.feasible_point(A, [0] * n + [1])
        if sol is not None:
            units.update(j for j, c in enumerate(sol) if c != 0)
    unit_idx = tuple(sorted(units))
    unit_hermite = tuple(hermite_rows([gens[i] for i in unit_idx], n))

    others = [g for i, g in enumerate(gens) if i not in units]
    if not others:
        return _Structure(unit_idx, unit_hermite, (0,) * n)
    # phi = phi_plus - phi_minus; phi(u) = 0 on units, phi(g) - s_g = 1 otherwise
    rows, rhs = [], []
    for i in unit_idx:
        g = gens[i]
        rows.append(list(g) + [-x for x in g] + [0] * len(others))
        rhs.append(0)
    for t, g in enumerate(others):
        rows.append(list(g) + [-x for x in g] + [-int(s == t) for s in range(len(others))])
        rhs.append(1)
    sol = qlin.feasible_point(rows, rhs)
    if sol is None:  # impossible: the quotient by the unit face is pointed
        raise AssertionError("no separating functional for a pointed quotient")
    phi = qlin.clear_denominators([sol[j] - sol[n + j] for j in range(n)])
    return _Structure(unit_idx, unit_hermite, phi)


def groupification(M: AffineMonoid) -> IntMatrix:
    """Hermite basis (as columns) of the lattice spanned by the generators."""
    return lattice_basis(M.generators, M.ambient_rank)


def is_pointed(M: AffineMonoid) -> bool:
    return not _structure(M).unit_indices


def contains(M: AffineMonoid, v: Sequence[int]) -> bool:
    """Decide whether ``v`` is an N-combination of the generators.

    Units are split off first; a functional that vanishes on units and is
    positive on the remaining generators bounds every coefficient, and the
    bounded combinations are searched exhaustively.
    """
    v = _vec(v, M.ambient_rank)
    if not any(v):
        return True
    if not M.generators:
        return False
    if solve_integral(M.generator_matrix, v) is None:
        return False
    st = _structure(M)
    phi = st.functional
    target = _dot(phi, v)
    if target < 0:
        return False
    pos = [(g, _dot(phi, g)) for i, g in enumerate(M.generators) if i not in st.unit_indices]
    pos.sort(key=lambda gw: (-gw[1], gw[0]))
    units = st.unit_hermite

    def in_units(r):
        return not any(reduce_mod_lattice(r, units))

    if not pos:
        return in_units(v)

    budget = step_budget()
    steps = 0
    dead = set()

    def search(idx, rem, rem_phi):
        nonlocal steps
        steps += 1
        if steps > budget:
            raise SearchBudgetExceeded(f"membership search exceeded {budget} steps")
        g, w = pos[idx]
        if idx == len(pos) - 1:
            if rem_phi % w:
                return False
            return in_units(_sub(rem, _scale(rem_phi // w, g)))
        key = (idx, rem)
        if key in dead:
            return False
        for c in range(rem_phi // w, -1, -1):
            if search(idx + 1, _sub(rem, _scale(c, g)), rem_phi - c * w):
                return True
        dead.add(key)
        return False

    return search(0, v, target)


def same_monoid(A: AffineMonoid, B: AffineMonoid) -> bool:
    if A.ambient_rank != B.ambient_rank:
        return False
    return all(contains(B, g) for g in A.generators) and all(contains(A, g) for g in B.generators)


def generated_with(M: AffineMonoid, extra: Iterable[Sequence[int]]) -> AffineMonoid:
    extra = [_vec(e, M.ambient_rank) for e in extra]
    return AffineMonoid(M.ambient_rank, M.generators + tuple(extra), M.quotient_normalization)


def image_monoid(f: IntMatrix, M: AffineMonoid, normalization: Optional[IntMatrix] = None) -> AffineMonoid:
    if f.cols != M.ambient_rank:
        raise MalformedInput(f"map with {f.cols} columns applied to a monoid in Z^{M.ambient_rank}")
    return AffineMonoid(f.rows, tuple(f.apply(g) for g in M.generators), normalization)


def quotient_monoid(M: AffineMonoid, lattice: Sequence[Sequence[int]]) -> AffineMonoid:
    """Image of ``M`` in ``Z^n / L``, re-coordinatized to a free lattice.

    The projection is recorded as ``quotient_normalization``.  Quotients with
    torsion cannot be represented by an affine monoid and are rejected.
    """
    proj, torsion = quotient_map([_vec(x, M.ambient_rank) for x in lattice], M.ambient_rank)
    if torsion:
        raise UnsupportedMonoid(f"quotient lattice has torsion {list(torsion)}")
    return image_monoid(proj, M, normalization=proj)


def direct_sum(A: AffineMonoid, B: AffineMonoid) -> AffineMonoid:
    za, zb = (0,) * A.ambient_rank, (0,) * B.ambient_rank
    gens = tuple(g + zb for g in A.generators) + tuple(za + g for g in B.generators)
    return AffineMonoid(A.ambient_rank + B.ambient_rank, gens)


def integral_pushout(qa: IntMatrix, A: AffineMonoid, qb: IntMatrix, B: AffineMonoid) -> AffineMonoid:
    """``(A (+)_Q B)^int`` for maps ``Q -> A``, ``Q -> B`` given by the images of
    the generators of a free Q (columns of ``qa`` and ``qb``)."""
    if qa.cols != qb.cols:
        raise MalformedInput("both maps must start from the same Q")
    if qa.rows != A.ambient_rank or qb.rows != B.ambient_rank:
        raise MalformedInput("map targets do not match the monoids' lattices")
    anti = [qa.column(j) + tuple(-x for x in qb.column(j)) for j in range(qa.cols)]
    return quotient_monoid(direct_sum(A, B), anti)


def conformal_le(a: Sequence[int], b: Sequence[int]) -> bool:
    """``a`` lies in the same orthant as ``b`` and is componentwise no larger."""
    return all(x * y >= 0 and abs(x) <= abs(y) for x, y in zip(a, b))


def graver_basis(generators: Sequence[Sequence[int]], dim: int) -> List[Vector]:
    """Graver basis of a lattice by Pottier's completion procedure.

    Start from a symmetric generating set, complete under pairwise sums with
    conformal normal forms, then keep the conformally minimal elements.
    """
    budget = step_budget()
    G: List[Vector] = []
    for b in hermite_rows(generators, dim):
        G += [b, tuple(-x for x in b)]
    pending = deque(_add(G[i], G[j]) for i in range(len(G)) for j in range(i + 1, len(G)))
    steps = 0
    while pending:
        s = pending.popleft()
        while any(s):
            steps += 1
            if steps > budget:
                raise SearchBudgetExceeded(f"Graver completion exceeded {budget} steps")
            g = next((g for g in G if conformal_le(g, s)), None)
            if g is None:
                break
            s = _sub(s, g)
        if any(s):
            pending.extend(_add(s, g) for g in G)
            G.append(s)
    return sorted(g for g in G if not any(h != g and conformal_le(h, g) for h in G))


def preimage_monoid(h: IntMatrix, k: int, m: int, max_dim: int = PREIMAGE_MAX_DIM) -> AffineMonoid:
    """``{x in Z^m : h x in N^k}`` by its Hilbert basis plus a unit lattice basis."""
    if h.rows != k or h.cols != m:
        raise MalformedInput(f"expected a {k}x{m} map, got {h.rows}x{h.cols}")
    if m > max_dim:
        raise DimensionGuard(f"source rank {m} exceeds the guard {max_dim}")
    units = kernel_lattice(h).columns()
    image_hb = [g for g in graver_basis(h.columns(), k) if all(x >= 0 for x in g)]
    lifts = []
    for y in image_hb:
        x = solve_integral(h, y)
        assert x is not None
        lifts.append(x)
    gens = lifts + units + [tuple(-x for x in u) for u in units]
    return AffineMonoid(m, tuple(gens))


def _irreducible(candidates: Sequence[Vector], units: Sequence[Vector], n: int) -> List[Vector]:
    """Members of ``candidates`` not generated by the others together with ``units``."""
    unit_gens = list(units) + [tuple(-x for x in u) for u in units]
    keep = []
    for i, g in enumerate(candidates):
        rest = [c for j, c in enumerate(candidates) if j != i]
        if not contains(AffineMonoid(n, tuple(rest + unit_gens)), g):
            keep.append(g)
    return keep


def split_units(M: AffineMonoid) -> UnitSplitting:
    n = M.ambient_rank
    st = _structure(M)
    unit_basis = IntMatrix.from_columns(st.unit_hermite, rows=n)
    # one representative per class modulo units, then drop the reducible ones
    reps = {}
    for i, g in enumerate(M.generators):
        if i in st.unit_indices:
            continue
        reps.setdefault(reduce_mod_lattice(g, st.unit_hermite), g)
    pointed = _irreducible(sorted(reps.values()), st.unit_hermite, n)
    a, b = len(pointed), len(st.unit_hermite)
    free = qlin.rank(list(pointed) + list(st.unit_hermite), n) == a + b if a + b else True
    iso = None
    if free:
        B = IntMatrix.from_columns(list(pointed) + list(st.unit_hermite), rows=n)
        iso = left_inverse(B)
    return UnitSplitting(unit_basis, tuple(pointed), free, iso)


def hilbert_basis(M: AffineMonoid, pointed: bool = True) -> List[Vector]:
    """The unique minimal generating set of a pointed monoid."""
    if pointed and not is_pointed(M):
        raise NotPointed("monoid has nontrivial units")
    return sorted(_irreducible(list(M.generators), [], M.ambient_rank))
