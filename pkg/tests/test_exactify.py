from itertools import product
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from logb.chart import chart, free_chart
from logb.errors import UnsupportedMonoid
from logb.exactify import (
    adapted_map,
    base_change_fixture,
    corrupt_drop_units,
    diagonal_exactification,
    strictness_report,
)
from logb.intlat import cokernel_invariants, is_unimodular
from logb.monoid import contains


def test_boundary_example_map_table():
    e = diagonal_exactification(free_chart((-1, 1), names=("U1", "U2")))
    assert e.g_strings() == {"U1": "S1*S3", "U2": "S2*S3", "V1": "S1", "V2": "S2"}
    assert (e.splitting.free_rank, e.splitting.unit_rank) == (2, 1)
    assert adapted_map(e.rho).to_rows() == [[1, 0, 1, 0], [0, 1, 0, 1], [1, 1, 0, 0]]
    assert e.transform is not None and is_unimodular(e.transform)


def test_extending_example_map_table():
    e = diagonal_exactification(free_chart((1, 1)))
    assert e.g_strings() == {"U1": "S1*S3", "U2": "S2*S3^-1", "V1": "S1", "V2": "S2"}
    assert adapted_map(e.rho).to_rows() == [[1, 0, 1, 0], [0, 1, 0, 1], [1, -1, 0, 0]]


def test_adapted_coordinates_factor_through_the_quotient():
    # the adapted coordinates are the recorded transform applied to the canonical ones
    e = diagonal_exactification(free_chart((-1, 1)))
    assert e.transform @ e.g_canonical == e.g_matrix
    for col in e.L:
        assert not any(adapted_map(e.rho).apply(col))


def test_zero_rho():
    e = diagonal_exactification(free_chart((0,)))
    assert e.L == () and e.H.ambient_rank == 2
    assert (e.splitting.free_rank, e.splitting.unit_rank) == (1, 1)
    for x in product(range(-3, 4), repeat=2):
        assert contains(e.K, x) == (sum(e.h.apply(x)) >= 0)


def test_rejections():
    with pytest.raises(UnsupportedMonoid):
        diagonal_exactification(chart([(1, 0), (1, 1)], [(1, 1)]))
    with pytest.raises(UnsupportedMonoid):
        diagonal_exactification(free_chart((2, 0)))  # Z^4 / L has torsion


def test_strictness_and_negative_control():
    for rho in ((-1, 1), (1, 1)):
        c = free_chart(rho)
        e = diagonal_exactification(c)
        assert strictness_report(e, c).pullback_iso
        bad = strictness_report(e, c, corrupt_drop_units(e))
        assert not bad.pullback_iso and not bad.details["surjective"]


rhos = st.lists(st.integers(-2, 2), min_size=1, max_size=3).filter(lambda r: gcd(*r) <= 1)


@given(rhos)
def test_exactification_properties(rho):
    c = free_chart(rho)
    e = diagonal_exactification(c)
    m = e.h.cols
    # K is exactly h^-1(N^n) on a box
    radius = 2 if m <= 3 else 1
    for x in product(range(-radius, radius + 1), repeat=m):
        assert contains(e.K, x) == all(v >= 0 for v in e.h.apply(x))
    # H lands in K, and sums of generators do too
    gens = e.H.generators
    for a in gens:
        assert contains(e.K, a)
        for b in gens:
            assert contains(e.K, tuple(x + y for x, y in zip(a, b)))
    # H^gp -> K^gp has index one
    assert cokernel_invariants(e.g_raw).is_trivial
    assert strictness_report(e, c).pullback_iso
    assert e.transform is not None


def test_base_change_boundary_example():
    bc = base_change_fixture(free_chart((-1, 1), names=("U1", "U2")))
    assert bc.X11.names == ("U1", "V1", "V2") and bc.X11.eliminated == ("U2",)
    assert bc.X11.monomial_relations == ((1, 0, 1),)  # U1 V2
    assert bc.X12.names == ("U1", "U2", "V1") and bc.X12.monomial_relations == ((0, 1, 1),)  # U2 V1
    assert bc.XT1.names == ("U1", "V1") and not bc.XT1.monomial_relations and not bc.XT1.relations
    assert not bc.all_equal


def test_base_change_extending_example():
    assert base_change_fixture(free_chart((1, 1))).all_equal
    assert base_change_fixture(free_chart((1,))).all_equal


@given(st.lists(st.integers(0, 3), min_size=1, max_size=3))
def test_base_change_nonnegative_rho_all_equal(rho):
    assert base_change_fixture(free_chart(rho)).all_equal


def test_json_shape():
    c = free_chart((-1, 1))
    e = diagonal_exactification(c)
    out = e.to_json(strict=True)
    assert out["K_split"] == {"free_rank": 2, "unit_rank": 1}
    assert out["g"][0] == {"from": "U1", "to": [[1, "S1"], [1, "S3"]]}
    assert out["strict"] is True
