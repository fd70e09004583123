"""Exact chart-level computations for log schemes with boundary.

Integer lattices and affine monoids (``intlat``, ``monoid``), charts and their
closures (``chart``), a sufficient smoothness criterion and chart products
(``smooth``), exactification of the diagonal (``exactify``) and weight-graded
log de Rham cohomology (``derham``).  All arithmetic is exact.
"""

from .chart import BoundaryChart, closure_binomial, free_chart, standard_semistable, validate_chart
from .derham import differential_invariants, graded_affine_derham, p1_log_cech
from .errors import LogbError, MalformedInput, UnsupportedMonoid
from .exactify import base_change_fixture, diagonal_exactification, strictness_report
from .intlat import IntMatrix, smith_normal_form
from .monoid import AffineMonoid, hilbert_basis, split_units
from .smooth import fiber_product_chart, smoothness_verdict, verify_sglatt_comparison

__all__ = [
    "AffineMonoid",
    "BoundaryChart",
    "IntMatrix",
    "LogbError",
    "MalformedInput",
    "UnsupportedMonoid",
    "base_change_fixture",
    "closure_binomial",
    "diagonal_exactification",
    "differential_invariants",
    "fiber_product_chart",
    "free_chart",
    "graded_affine_derham",
    "hilbert_basis",
    "p1_log_cech",
    "smith_normal_form",
    "smoothness_verdict",
    "split_units",
    "standard_semistable",
    "strictness_report",
    "validate_chart",
    "verify_sglatt_comparison",
]

__version__ = "0.1.0"
