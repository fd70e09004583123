"""Sufficient smoothness criterion for charts, and products of charts.

The criterion is one-sided: when it fails the report says so, but that is not
a proof of non-smoothness.
"""

from dataclasses import dataclass
from math import gcd
from typing import Optional, Tuple

from .chart import (
    BinomialPresentation,
    BinomialRelation,
    BoundaryChart,
    _neg,
    _pos,
    boundary_monoid,
    is_standard_free,
    rho_in_lattice_coordinates,
    second_copy_names,
)
from .errors import MalformedInput, UnsupportedMonoid
from .intlat import AbelianInvariants, IntMatrix, cokernel_invariants, kernel_lattice, lattice_basis
from .monoid import AffineMonoid, direct_sum, image_monoid, integral_pushout


def order_invertible(n: int, residue_char: int) -> bool:
    """Is the integer ``n`` a unit on W?"""
    return residue_char == 0 or gcd(n, residue_char) == 1


@dataclass(frozen=True)
class CriterionReport:
    kernel_invariants: AbelianInvariants
    cokernel_invariants: AbelianInvariants
    residue_char: int
    condition_ii_asserted: bool = False
    verdict_weakly_smooth: bool = False
    verdict_smooth: bool = False

    @property
    def cokernel_torsion(self) -> Tuple[int, ...]:
        return self.cokernel_invariants.torsion

    @property
    def kernel_finite(self) -> bool:
        # kernels of maps between lattices are free, so finite means zero
        return self.kernel_invariants.free_rank == 0

    @property
    def orders_invertible(self) -> bool:
        orders = self.kernel_invariants.torsion + self.cokernel_torsion
        return all(order_invertible(d, self.residue_char) for d in orders)

    @property
    def condition_i_holds(self) -> bool:
        return self.kernel_finite and self.orders_invertible

    def to_json(self):
        return {
            "condition_i": self.condition_i_holds,
            "kernel": self.kernel_invariants.to_json(),
            "kernel_finite": self.kernel_finite,
            "cokernel": self.cokernel_invariants.to_json(),
            "cokernel_torsion": list(self.cokernel_torsion),
            "orders_invertible": self.orders_invertible,
            "residue_char": self.residue_char,
            "condition_ii_asserted": self.condition_ii_asserted,
            "criterion": "sufficient",
            "verdict_weakly_smooth": self.verdict_weakly_smooth,
            "verdict_smooth": self.verdict_smooth,
        }


def criterion_i(c: BoundaryChart) -> CriterionReport:
    """Kernel and cokernel torsion of ``rho: Q^gp -> P^gp``."""
    _, r = rho_in_lattice_coordinates(c)
    ker = AbelianInvariants(kernel_lattice(r).cols)
    return CriterionReport(ker, cokernel_invariants(r), c.residue_char)


def smoothness_verdict(c: BoundaryChart, assert_condition_ii: bool = False) -> CriterionReport:
    """Criterion (i) plus condition (ii); the latter holds for monomial charts."""
    rep = criterion_i(c)
    ii = bool(assert_condition_ii or c.monomial)
    ok = rep.condition_i_holds and ii
    return CriterionReport(rep.kernel_invariants, rep.cokernel_invariants, rep.residue_char, ii, ok, ok)


@dataclass(frozen=True)
class FiberProduct:
    R: AffineMonoid
    interior: AffineMonoid
    closure: Optional[BinomialPresentation]
    closure_error: Optional[str] = None

    def to_json(self):
        return {
            "R": self.R.to_json(),
            "interior": self.interior.to_json(),
            "closure": None if self.closure is None else self.closure.to_json(),
            "closure_error": self.closure_error,
        }


def _check_compatible(c1: BoundaryChart, c2: BoundaryChart):
    if c1.q_rank != c2.q_rank:
        raise MalformedInput("charts have different base ranks")
    if c1.residue_char != c2.residue_char:
        raise MalformedInput("charts have different residue characteristics")


def product_closure(c1: BoundaryChart, c2: BoundaryChart) -> BinomialPresentation:
    """Closure of the product inside ``W[P (+) F]`` for free P, F and one base generator.

    The relation is ``u^minus = u^plus`` with ``plus - minus = (rho1, -rho2)`` up to
    swapping sides; sides are ordered so the presentation is canonical.
    """
    if c1.q_rank != 1:
        raise UnsupportedMonoid("product closures are implemented for a single base generator")
    if not (is_standard_free(c1.P) and is_standard_free(c2.P)):
        raise UnsupportedMonoid("product closure needs both P-monoids free")
    w = c1.rho.column(0) + tuple(-x for x in c2.rho.column(0))
    names = c1.variable_names + second_copy_names(c2.variable_names, c1.variable_names)
    rels = ()
    if any(w):
        a, b = sorted((_neg(w), _pos(w)))
        rels = (BinomialRelation((), a, b),)
    return BinomialPresentation((), names, rels)


def fiber_product_chart(c1: BoundaryChart, c2: BoundaryChart) -> FiberProduct:
    _check_compatible(c1, c2)
    P1, F1 = boundary_monoid(c1), boundary_monoid(c2)
    interior = integral_pushout(c1.rho, P1, c2.rho, F1)
    proj = interior.quotient_normalization
    R = image_monoid(proj, direct_sum(c1.P, c2.P), normalization=proj)
    closure, err = None, None
    try:
        closure = product_closure(c1, c2)
    except UnsupportedMonoid as exc:
        err = str(exc)
    return FiberProduct(R, interior, closure, err)


@dataclass(frozen=True)
class LatticeComparison:
    kernel_b: AbelianInvariants
    cokernel_b: AbelianInvariants
    kernel_a: AbelianInvariants
    cokernel_a: AbelianInvariants

    @property
    def agree(self) -> bool:
        return self.kernel_a == self.kernel_b and self.cokernel_a == self.cokernel_b


def sglatt_comparison(c1: BoundaryChart, c2: BoundaryChart) -> LatticeComparison:
    """Compare ``b = rho1: Q^gp -> P^gp`` with the inclusion
    ``a: F^gp -> (P^gp (+) F^gp) / (rho1, -rho2)(Q^gp)`` of the second factor."""
    _check_compatible(c1, c2)
    _, r1 = rho_in_lattice_coordinates(c1)
    _, r2 = rho_in_lattice_coordinates(c2)
    p, f, q = r1.rows, r2.rows, r1.cols
    kb = AbelianInvariants(kernel_lattice(r1).cols)
    cb = cokernel_invariants(r1)
    # coker(a) = (P + F) / (im(rho1, -rho2) + F)
    cols = [r1.column(j) + tuple(-x for x in r2.column(j)) for j in range(q)]
    cols += [(0,) * p + tuple(int(i == k) for i in range(f)) for k in range(f)]
    ca = cokernel_invariants(IntMatrix.from_columns(cols, rows=p + f))
    # ker(a) = {y : (0, y) in im(rho1, -rho2)} = {-rho2 t : rho1 t = 0}
    kt = kernel_lattice(r1)
    ys = [r2.apply(t) for t in kt.columns()]
    ka = AbelianInvariants(lattice_basis(ys, f).cols if ys else 0)
    return LatticeComparison(kb, cb, ka, ca)


def verify_sglatt_comparison(c1: BoundaryChart, c2: BoundaryChart) -> bool:
    return sglatt_comparison(c1, c2).agree
