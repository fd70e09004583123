import random
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from logb import qlin
from logb.chart import BoundaryChart, free_chart, standard_semistable
from logb.derham import (
    affine_line_chart,
    complex_cohomology,
    differential_invariants,
    graded_affine_derham,
    koszul_complex,
    p1_log_cech,
    restriction_rank_check,
)
from logb.errors import MalformedInput, WeightNotInMonoid
from logb.intlat import IntMatrix
from logb.monoid import AffineMonoid
from oracles import koszul_rule, random_koszul_case


def test_differential_invariants_examples():
    d = differential_invariants(free_chart((-1, 1)))
    assert (d.free_rank, d.torsion, d.locally_free_over_residue) == (1, (), True)
    d = differential_invariants(standard_semistable(3, 3))
    assert (d.free_rank, d.torsion) == (2, ())
    d = differential_invariants(free_chart((2, 0), residue_char=2))
    assert (d.free_rank, d.torsion, d.locally_free_over_residue) == (1, (2,), False)
    assert differential_invariants(free_chart((2, 0), residue_char=0)).locally_free_over_residue


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4))
def test_restriction_check(rho):
    assert restriction_rank_check(free_chart(rho))


def test_graded_examples():
    b = free_chart((1, 1))
    assert graded_affine_derham(b, (1, 1)) == (1, 1)
    assert graded_affine_derham(b, (1, 0)) == (0, 0)
    assert graded_affine_derham(free_chart((1, 0, 2)), (0, 0, 0)) == (1, 2, 1)
    assert graded_affine_derham(affine_line_chart(), (0,)) == (1, 1)


def test_graded_errors():
    with pytest.raises(WeightNotInMonoid):
        graded_affine_derham(free_chart((1, 1)), (-1, 0))
    with pytest.raises(MalformedInput):
        graded_affine_derham(free_chart((1, 1), residue_char=3), (1, 0))


def test_d_squared_violation_is_caught():
    with pytest.raises(AssertionError):
        complex_cohomology([1, 1, 1], [[[1]], [[1]]])


@given(st.integers(0, 10**6))
def test_koszul_dims_follow_closed_form(seed):
    n, cols, w = random_koszul_case(random.Random(seed))
    c = BoundaryChart(len(cols), AffineMonoid.free(n), IntMatrix.from_columns(cols, rows=n))
    assert graded_affine_derham(c, w) == koszul_rule(cols, n, w)


@given(st.lists(st.integers(-3, 3), min_size=0, max_size=5))
def test_koszul_complex_is_a_complex(w):
    mats = koszul_complex(w)
    for a, b in zip(mats, mats[1:]):
        if a and b and a[0] and b[0]:
            assert qlin.is_zero_matrix(qlin.matmul(b, a))
    dims = [comb(len(w), m) for m in range(len(w) + 1)]
    h = complex_cohomology(dims, mats)
    # rank-nullity: alternating sums of chains and of cohomology agree
    assert sum((-1) ** m * x for m, x in enumerate(h)) == sum((-1) ** m * x for m, x in enumerate(dims))


def test_p1_totals():
    for k in range(9):
        rep = p1_log_cech(k)
        assert rep.totals == (1, 1, 0)
        for w, dims in rep.weights:
            assert dims == ((1, 1, 0) if w == 0 else (0, 0, 0))
    out = p1_log_cech(2).to_json()
    assert out["truncation"] == 2 and out["weights"][0] == {"w": 0, "dims": [1, 1, 0]}
    with pytest.raises(MalformedInput):
        p1_log_cech(-1)
