"""Log differentials of a chart and weight-graded log de Rham cohomology.

Everything is over Q with exact fractions.  For a monoid algebra the weight-w
piece of the log de Rham complex is the Koszul complex ``(Λ^• V, w̄ ∧ -)``
where ``V = (P^gp / im rho) ⊗ Q``; cohomology dimensions are exact ranks.
"""

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import List, Sequence, Tuple

from . import qlin
from .chart import BoundaryChart, boundary_monoid, rho_in_lattice_coordinates
from .errors import MalformedInput, WeightNotInMonoid
from .intlat import IntMatrix, cokernel_invariants, lattice_basis, smith_normal_form, solve_integral
from .monoid import AffineMonoid, contains
from .smooth import order_invertible


@dataclass(frozen=True)
class DifferentialInvariants:
    free_rank: int
    torsion: Tuple[int, ...]
    residue_char: int

    @property
    def locally_free_over_residue(self) -> bool:
        # torsion tensored with the residue field vanishes
        return all(order_invertible(d, self.residue_char) for d in self.torsion)

    def to_json(self):
        return {
            "free_rank": self.free_rank,
            "torsion": list(self.torsion),
            "locally_free_over_residue": self.locally_free_over_residue,
        }


def differential_invariants(c: BoundaryChart) -> DifferentialInvariants:
    """Invariants of ``P^gp / rho(Q^gp)``, the module of log differentials at a generic point."""
    _, r = rho_in_lattice_coordinates(c)
    inv = cokernel_invariants(r)
    return DifferentialInvariants(inv.free_rank, inv.torsion, c.residue_char)


def restriction_rank_check(c: BoundaryChart) -> bool:
    """Same invariants when P is replaced by the interior monoid P'."""
    inner = boundary_monoid(c)
    basis = lattice_basis(inner.generators, inner.ambient_rank)
    cols = [solve_integral(basis, col) for col in c.rho_columns()]
    if any(x is None for x in cols):
        return False
    inv = cokernel_invariants(IntMatrix.from_columns(cols, rows=basis.cols))
    d = differential_invariants(c)
    return (inv.free_rank, inv.torsion) == (d.free_rank, d.torsion)


# --- Koszul complexes ------------------------------------------------------------


def exterior_basis(d: int, m: int) -> List[Tuple[int, ...]]:
    return list(combinations(range(d), m))


def wedge_matrix(w: Sequence, m: int) -> List[List]:
    """Matrix of ``x -> w ∧ x`` from ``Λ^m`` to ``Λ^(m+1)`` in the sorted-subset bases."""
    d = len(w)
    src = exterior_basis(d, m)
    tgt = {s: k for k, s in enumerate(exterior_basis(d, m + 1))}
    M = [[0] * len(src) for _ in range(len(tgt))]
    for j, S in enumerate(src):
        for i in range(d):
            if i in S or not w[i]:
                continue
            sign = -1 if sum(1 for s in S if s < i) % 2 else 1
            M[tgt[tuple(sorted(S + (i,)))]][j] += sign * w[i]
    return M


def koszul_complex(w: Sequence) -> List[List[List]]:
    d = len(w)
    return [wedge_matrix(w, m) for m in range(d)]


def _rank(M) -> int:
    if not M or not M[0]:
        return 0
    return qlin.rank(M, len(M[0]))


def complex_cohomology(dims: Sequence[int], maps: Sequence[List[List]]) -> Tuple[int, ...]:
    """Cohomology dimensions of ``C^0 -> C^1 -> ...``; ``maps[k]: C^k -> C^(k+1)``.

    Raises ``AssertionError`` if two consecutive maps do not compose to zero.
    """
    for k in range(len(maps) - 1):
        if dims[k] and dims[k + 1] and dims[k + 2]:
            if not qlin.is_zero_matrix(qlin.matmul(maps[k + 1], maps[k])):
                raise AssertionError(f"d∘d != 0 at degree {k}")
    ranks = [_rank(M) if dims[k] and dims[k + 1] else 0 for k, M in enumerate(maps)]
    out = []
    for k, dk in enumerate(dims):
        r_out = ranks[k] if k < len(ranks) else 0
        r_in = ranks[k - 1] if k > 0 else 0
        out.append(dk - r_out - r_in)
    return tuple(out)


def koszul_dims(w: Sequence) -> Tuple[int, ...]:
    d = len(w)
    return complex_cohomology([comb(d, m) for m in range(d + 1)], koszul_complex(w))


def quotient_class(c: BoundaryChart, weight: Sequence[int]) -> Tuple[int, ...]:
    """Class of ``weight`` in ``P^gp / im rho`` modulo torsion, in SNF coordinates."""
    basis, r = rho_in_lattice_coordinates(c)
    x = solve_integral(basis, weight)
    if x is None:
        raise WeightNotInMonoid(f"weight {list(weight)} is not in P^gp")
    snf = smith_normal_form(r)
    return snf.U.apply(x)[snf.rank:]


def graded_affine_derham(c: BoundaryChart, weight: Sequence[int]) -> Tuple[int, ...]:
    """Dimensions of the weight-``weight`` piece of log de Rham cohomology, per degree."""
    if c.residue_char != 0:
        raise MalformedInput("graded de Rham cohomology is computed in characteristic 0 only")
    weight = tuple(int(x) for x in weight)
    if len(weight) != c.n:
        raise MalformedInput(f"weight has length {len(weight)}, expected {c.n}")
    if not contains(c.P, weight):
        raise WeightNotInMonoid(f"weight {list(weight)} is not in P")
    return koszul_dims(quotient_class(c, weight))


def affine_line_chart() -> BoundaryChart:
    """``k[x]`` with a log pole at 0, over the trivial base."""
    return BoundaryChart(0, AffineMonoid.free(1), IntMatrix.zeros(1, 0), names=("x",))


# --- P^1 with log poles at 0 and infinity ----------------------------------------


@dataclass(frozen=True)
class CohomologyReport:
    truncation: int
    weights: Tuple[Tuple[int, Tuple[int, ...]], ...]

    @property
    def totals(self) -> Tuple[int, ...]:
        width = max(len(d) for _, d in self.weights)
        return tuple(sum(d[m] for _, d in self.weights if m < len(d)) for m in range(width))

    def to_json(self):
        return {
            "truncation": self.truncation,
            "weights": [{"w": w, "dims": list(d)} for w, d in self.weights],
            "totals": list(self.totals),
        }


def cech_weight_complex(w: int, charts: Sequence[AffineMonoid], overlap: AffineMonoid):
    """Total complex of the two-chart Čech–de Rham double complex in torus weight ``w``.

    ``C^{p,q}``: p = 0 is both charts, p = 1 the overlap; q is the form degree.
    Each nonzero piece is a copy of ``Λ^q Q`` (rank one torus), the de Rham
    differential is ``w ∧ -`` and the total differential is ``δ + (-1)^p d``.
    Returns ``(dims, maps)`` for total degrees 0, 1, 2.
    """
    def present(M):
        return contains(M, (w,))

    # block list per total degree: (p, q, index of open) with the open present
    opens = {0: [k for k, M in enumerate(charts) if present(M)], 1: [0] if present(overlap) else []}
    blocks = {n: [(p, n - p, o) for p in (0, 1) if 0 <= n - p <= 1 for o in opens[p]] for n in range(3)}
    dims = [len(blocks[n]) for n in range(3)]
    maps = []
    for n in range(2):
        src, tgt = blocks[n], blocks[n + 1]
        M = [[0] * len(src) for _ in tgt]
        for j, (p, q, o) in enumerate(src):
            for i, (p2, q2, o2) in enumerate(tgt):
                if p2 == p and q2 == q + 1 and o2 == o:
                    M[i][j] += (-1) ** p * w  # d(f) = w f dlog x
                elif p2 == p + 1 and q2 == q and p == 0:
                    M[i][j] += 1 if o == 1 else -1  # δ(s_0, s_inf) = s_inf - s_0
        maps.append(M)
    return dims, maps


P1_CHARTS = (AffineMonoid(1, ((1,),)), AffineMonoid(1, ((-1,),)))
P1_OVERLAP = AffineMonoid(1, ((1,), (-1,)))


def cech_weight_piece(w: int, charts=P1_CHARTS, overlap=P1_OVERLAP) -> Tuple[int, ...]:
    return complex_cohomology(*cech_weight_complex(w, charts, overlap))


def p1_log_cech(weight_bound: int) -> CohomologyReport:
    if weight_bound < 0:
        raise MalformedInput("weight_bound must be nonnegative")
    pieces = tuple((w, cech_weight_piece(w)) for w in range(-weight_bound, weight_bound + 1))
    pieces = tuple(sorted(pieces, key=lambda t: (abs(t[0]), t[0])))
    return CohomologyReport(weight_bound, pieces)
