"""Exactification of the diagonal ``X̄ -> X̄ ×̄_T X̄`` at chart level.

For ``P = N^n`` and ``rho = rho(q)``:

* ``L = Z (rho, -rho)`` and ``H`` is the image of ``N^2n`` in ``Z^2n / L``;
* ``h: Z^2n / L -> Z^n`` is the class of ``(a, b) -> a + b``;
* ``K = h^-1(N^n)``, split as ``N^a (+) Z^b``;
* ``g: H -> K`` is the inclusion, written in the split coordinates.

Besides the canonical splitting found by ``split_units`` there is an adapted
one, ``(x, y) -> (x + y, Psi x)`` where the rows of Psi are the Hermite basis of
the integral vectors orthogonal to rho.  The change of basis between the two
is recorded and checked to be a change of splitting.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .chart import (
    BinomialPresentation,
    BoundaryChart,
    _pos,
    is_standard_free,
    normalize_presentation,
    second_copy_names,
)
from .errors import UnsupportedMonoid
from .intlat import (
    IntMatrix,
    Vector,
    cokernel_invariants,
    kernel_lattice,
    quotient_map,
    right_inverse,
    same_lattice,
)
from .monoid import (
    AffineMonoid,
    UnitSplitting,
    hilbert_basis,
    image_monoid,
    preimage_monoid,
    same_monoid,
    split_units,
)
from .smooth import product_closure


@dataclass(frozen=True)
class Exactification:
    rho: Vector
    L: Tuple[Vector, ...]
    H: AffineMonoid
    h: IntMatrix  # on the normalized coordinates of Z^2n / L
    K: AffineMonoid
    splitting: UnitSplitting
    g_raw: IntMatrix  # columns: images of the 2n generators in K's normalized coordinates
    g_canonical: Optional[IntMatrix]  # same, in the split_units coordinates
    adapted: Optional[IntMatrix]  # (x, y) -> (x + y, Psi x) on the normalized coordinates
    transform: Optional[IntMatrix]  # split_units coordinates -> adapted coordinates
    source_names: Tuple[str, ...]
    target_names: Tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.rho)

    @property
    def g_matrix(self) -> IntMatrix:
        """g in the coordinates used for reporting (adapted, else canonical, else raw)."""
        if self.adapted is not None:
            return self.adapted @ self.g_raw
        if self.g_canonical is not None:
            return self.g_canonical
        return self.g_raw

    @property
    def g_map(self) -> Dict[str, Vector]:
        G = self.g_matrix
        return {s: G.column(j) for j, s in enumerate(self.source_names)}

    def g_table(self) -> List[Tuple[str, List[Tuple[int, str]]]]:
        return [(s, [(e, t) for e, t in zip(v, self.target_names) if e]) for s, v in self.g_map.items()]

    def g_strings(self) -> Dict[str, str]:
        out = {}
        for s, terms in self.g_table():
            parts = [t if e == 1 else f"{t}^{e}" for e, t in terms]
            out[s] = "*".join(parts) if parts else "1"
        return out

    def to_json(self, strict: Optional[bool] = None):
        out = {
            "K_split": {"free_rank": self.splitting.free_rank, "unit_rank": self.splitting.unit_rank},
            "g": [{"from": s, "to": [[e, t] for e, t in terms]} for s, terms in self.g_table()],
        }
        if strict is not None:
            out["strict"] = strict
        out["coordinates"] = "adapted" if self.adapted is not None else (
            "canonical" if self.g_canonical is not None else "raw")
        out["transform"] = None if self.transform is None else self.transform.to_rows()
        return out


def orthogonal_rows(rho: Sequence[int]) -> List[Vector]:
    """Hermite basis of ``{v in Z^n : v . rho = 0}``."""
    n = len(rho)
    return kernel_lattice(IntMatrix.from_rows([rho], cols=n)).columns()


def adapted_map(rho: Sequence[int]) -> IntMatrix:
    """``Phi: Z^2n -> Z^(2n - rank L)``, ``(x, y) -> (x + y, Psi x)``; kernel is L."""
    n = len(rho)
    rows = [tuple(int(j == i) for j in range(n)) * 2 for i in range(n)]
    rows += [tuple(v) + (0,) * n for v in orthogonal_rows(rho)]
    return IntMatrix.from_rows(rows, cols=2 * n)


def _change_of_splitting(C: IntMatrix, a: int) -> bool:
    """C maps split coordinates to split coordinates: it permutes the free part
    and sends units to units."""
    if C.rows != C.cols or abs(C.det()) != 1:
        return False
    m = C.rows
    if any(C[i, j] for i in range(a) for j in range(a, m)):
        return False
    top = [C.row(i)[:a] for i in range(a)]
    return sorted(top) == sorted(tuple(int(j == i) for j in range(a)) for i in range(a))


def diagonal_exactification(c: BoundaryChart, target_prefix: str = "S") -> Exactification:
    if c.q_rank != 1 or not is_standard_free(c.P):
        raise UnsupportedMonoid("diagonal exactification needs P = N^n and a single base generator")
    rho = c.rho.column(0)
    n = len(rho)
    L = (rho + tuple(-x for x in rho),) if any(rho) else ()
    proj, torsion = quotient_map(L, 2 * n)
    if torsion:
        raise UnsupportedMonoid(f"Z^2n / L has torsion {list(torsion)}; rho must be primitive")
    m = proj.rows
    H = image_monoid(proj, AffineMonoid.free(2 * n), normalization=proj)
    section = right_inverse(proj)
    sum_map = IntMatrix.from_rows([tuple(int(j == i) for j in range(n)) * 2 for i in range(n)], cols=2 * n)
    h = sum_map @ section
    K = preimage_monoid(h, n, m)
    sp = split_units(K)
    g_raw = proj  # H sits inside K: same coordinates
    g_can = None if sp.iso_to_standard is None else sp.iso_to_standard @ g_raw

    adapted, transform = None, None
    Phi = adapted_map(rho)
    Phi_norm = Phi @ section
    if sp.iso_to_standard is not None and abs(Phi_norm.det()) == 1:
        # iso_to_standard is square here since K^gp is all of Z^m
        T_inv = IntMatrix.from_columns(list(sp.pointed_generators) + sp.unit_basis.columns(), rows=m)
        C = Phi_norm @ T_inv
        if _change_of_splitting(C, sp.free_rank):
            adapted, transform = Phi_norm, C

    src = c.variable_names + second_copy_names(c.variable_names, c.variable_names)
    if src[n:] == src[:n]:
        src = src[:n] + tuple(s + "'" for s in src[:n])
    tgt = tuple(f"{target_prefix}{k + 1}" for k in range(m))
    return Exactification(rho, L, H, h, K, sp, g_raw, g_can, adapted, transform, src, tgt)


@dataclass(frozen=True)
class StrictnessReport:
    pullback_iso: bool
    details: Dict[str, object]

    def to_json(self):
        return {"pullback_iso": self.pullback_iso, "details": self.details}


def strictness_report(e: Exactification, c: BoundaryChart, g: Optional[IntMatrix] = None) -> StrictnessReport:
    """Chart-level strictness of the two projections ``Z -> X̄``.

    ``g`` (columns: images of the generators of ``N^2n`` in the reported split
    coordinates) defaults to ``e.g_matrix``; passing a modified one is how the
    check is exercised on corrupted maps.
    """
    G = e.g_matrix if g is None else g
    n = e.n
    rho = c.rho.column(0)
    a = e.splitting.free_rank if (e.adapted is not None or e.g_canonical is not None) else None
    details: Dict[str, object] = {}
    # well defined on H: kills L, lands in K
    details["kills_L"] = all(not any(G.apply(v)) for v in e.L)
    details["lands_in_K"] = a is not None and all(all(x >= 0 for x in col[:a]) for col in G.columns())
    # log etale at lattice level: Z^2n / L -> K^gp is an isomorphism
    coker = cokernel_invariants(G)
    details["surjective"] = coker.is_trivial
    details["kernel_is_L"] = same_lattice(kernel_lattice(G).columns(), list(e.L), 2 * n)
    # each projection P -> K -> K / K^x must be an isomorphism N^n -> N^a
    for j, label in ((0, "first"), (1, "second")):
        ok = a == n
        if ok:
            block = [G.column(j * n + i)[:a] for i in range(n)]
            image = AffineMonoid(a, tuple(block))
            target = AffineMonoid.free(a)
            # distinct images, same monoid, same Hilbert basis: a bijection on generators
            ok = (len(set(block)) == n and all(any(b) for b in block) and same_monoid(image, target)
                  and hilbert_basis(image) == hilbert_basis(target))
        details[f"{label}_projection_strict"] = ok
    details["rho_matches"] = tuple(rho) == e.rho
    return StrictnessReport(all(bool(v) for v in details.values()), details)


def corrupt_drop_units(e: Exactification) -> IntMatrix:
    """Negative control: g with every unit coordinate set to zero."""
    G = e.g_matrix
    a = e.splitting.free_rank
    return IntMatrix.from_columns([col[:a] + (0,) * (len(col) - a) for col in G.columns()], rows=G.rows)


@dataclass(frozen=True)
class BaseChange:
    X11: BinomialPresentation
    X12: BinomialPresentation
    XT1: BinomialPresentation

    @property
    def all_equal(self) -> bool:
        return self.X11 == self.X12 == self.XT1

    def to_json(self):
        return {
            "X11": self.X11.to_json(),
            "X12": self.X12.to_json(),
            "XT1": self.XT1.to_json(),
            "all_equal": self.all_equal,
        }


def base_change_fixture(c: BoundaryChart) -> BaseChange:
    """The three closed subschemes over ``q = 0`` inside ``X̄ ×̄_T X̄``.

    With ``X̄ = W[P]``, the special fiber ``X̄_T`` is cut out by ``u^plus``
    (``plus`` = positive part of rho).  ``X̄_1,j`` pulls it back along the j-th
    projection; ``X̄_T,1`` imposes it on both factors.
    """
    if c.q_rank != 1 or not is_standard_free(c.P):
        raise UnsupportedMonoid("base change needs P = N^n and a single base generator")
    rho = c.rho.column(0)
    n = len(rho)
    prod = product_closure(c, c)
    plus = _pos(rho)
    first = plus + (0,) * n
    second = (0,) * n + plus

    def cut(monos):
        pres = BinomialPresentation((), prod.names, prod.relations, tuple(monos))
        out = normalize_presentation(pres)
        if out.relations:
            raise UnsupportedMonoid("a binomial survives; comparison needs general elimination")
        return out

    return BaseChange(cut([first]), cut([second]), cut([first, second]))
