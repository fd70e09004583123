"""Acceptance checks, one per criterion, each printing a single PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for just the summary lines,
or through pytest, which also lists them in the terminal summary.
"""

import random
import time
from itertools import product

import pytest

from logb import qlin
from logb.chart import BoundaryChart, closure_binomial, free_chart, standard_semistable
from logb.derham import (
    P1_CHARTS,
    P1_OVERLAP,
    cech_weight_complex,
    graded_affine_derham,
    koszul_complex,
    p1_log_cech,
    quotient_class,
)
from logb.exactify import _change_of_splitting, adapted_map, base_change_fixture, diagonal_exactification
from logb.intlat import IntMatrix, is_unimodular, smith_normal_form
from logb.monoid import AffineMonoid, _structure, contains, hilbert_basis
from logb.smooth import smoothness_verdict, verify_sglatt_comparison

from oracles import (
    brute_hilbert_basis,
    determinantal_invariants,
    elements_up_to,
    koszul_rule,
    random_koszul_case,
    random_matrix,
    random_pointed_monoid,
)

RESULTS = []


def _cold():
    smith_normal_form.cache_clear()
    _structure.cache_clear()


def _exactification_matches(rho, table, coords):
    c = free_chart(rho, names=("U1", "U2"))
    _cold()
    t0 = time.perf_counter()
    e = diagonal_exactification(c)
    dt = time.perf_counter() - t0
    problems = []
    if e.g_strings() != table:
        problems.append(f"map table {e.g_strings()}")
    if (e.splitting.free_rank, e.splitting.unit_rank) != (2, 1):
        problems.append("K is not N^2 + Z")
    if adapted_map(e.rho).to_rows() != coords:
        problems.append(f"coordinates {adapted_map(e.rho).to_rows()}")
    T = e.transform
    if T is None or not is_unimodular(T) or not _change_of_splitting(T, 2) or T @ e.g_canonical != e.g_matrix:
        problems.append("no valid recorded transform to the stored coordinates")
    # K in the stored coordinates is {first two >= 0}
    Phi = e.adapted
    for x in product(range(-2, 3), repeat=3):
        y = Phi.apply(x)
        if contains(e.K, x) != (y[0] >= 0 and y[1] >= 0):
            problems.append(f"membership disagrees at {x}")
            break
    return problems, dt


def check_exactification_boundary():
    problems, dt = _exactification_matches(
        (-1, 1), {"U1": "S1*S3", "U2": "S2*S3", "V1": "S1", "V2": "S2"},
        [[1, 0, 1, 0], [0, 1, 0, 1], [1, 1, 0, 0]])
    if dt >= 0.1:
        problems.append(f"took {dt * 1000:.1f} ms")
    return not problems, f"{dt * 1000:.1f} ms (limit 100 ms)" + ("; " + "; ".join(problems) if problems else "")


def check_exactification_extending():
    problems, dt = _exactification_matches(
        (1, 1), {"U1": "S1*S3", "U2": "S2*S3^-1", "V1": "S1", "V2": "S2"},
        [[1, 0, 1, 0], [0, 1, 0, 1], [1, -1, 0, 0]])
    return not problems, "exact match" if not problems else "; ".join(problems)


def check_closures():
    bad = []
    for i in range(-3, 4):
        cl = closure_binomial(free_chart((i, 1)))
        r = cl.relation
        if i >= 0:
            ok = r.q_exponents == (1,) and r.minus == (0, 0) and r.plus == (i, 1) and cl.iso_to_ambient
        else:
            ok = r.q_exponents == (1,) and r.minus == (-i, 0) and r.plus == (0, 1) and not cl.iso_to_ambient
        if not ok:
            bad.append(i)
    return not bad, "7/7 cases" if not bad else f"failing i: {bad}"


def check_base_change():
    a = base_change_fixture(free_chart((-1, 1), names=("U1", "U2")))
    b = base_change_fixture(free_chart((1, 1), names=("U1", "U2")))
    checks = {
        "X11 = W[U1,V1,V2]/(U1 V2)": a.X11.names == ("U1", "V1", "V2") and a.X11.monomial_relations == ((1, 0, 1),)
        and not a.X11.relations,
        "X12 = W[U1,U2,V1]/(U2 V1)": a.X12.names == ("U1", "U2", "V1") and a.X12.monomial_relations == ((0, 1, 1),)
        and not a.X12.relations,
        "XT1 free on U1, V1": a.XT1.names == ("U1", "V1") and not a.XT1.monomial_relations and not a.XT1.relations,
        "boundary case not all equal": a.all_equal is False,
        "extending case all equal": b.all_equal is True,
    }
    bad = [k for k, v in checks.items() if not v]
    return not bad, "5/5 checks" if not bad else f"failing: {bad}"


def check_smoothness():
    bad = []
    n = 0
    for p in (0, 2, 3, 5):
        for rho in ((-1, 1), (1, 1)):
            n += 1
            if not smoothness_verdict(free_chart(rho, residue_char=p)).verdict_smooth:
                bad.append((rho, p))
        for i2 in range(1, 5):
            for i1 in range(1, i2 + 1):
                for r in product(range(-3, 4), repeat=i2 - i1):
                    n += 1
                    if not smoothness_verdict(standard_semistable(i1, i2, r, residue_char=p)).verdict_smooth:
                        bad.append((i1, i2, r, p))
        n += 1
        if smoothness_verdict(free_chart((2,), residue_char=p)).verdict_smooth != (p != 2):
            bad.append(("rho=(2)", p))
    return not bad, f"{n} verdicts" if not bad else f"{len(bad)} mismatches, first {bad[:3]}"


def _d_squared_zero(maps):
    for a, b in zip(maps, maps[1:]):
        if a and b and a[0] and b[0] and not qlin.is_zero_matrix(qlin.matmul(b, a)):
            return False
    return True


def check_p1():
    t0 = time.perf_counter()
    bad = []
    for k in range(9):
        totals = p1_log_cech(k).totals
        if totals != (1, 1, 0):
            bad.append((k, totals))
    dt = time.perf_counter() - t0
    for w in range(-8, 9):
        if not _d_squared_zero(cech_weight_complex(w, P1_CHARTS, P1_OVERLAP)[1]):
            bad.append(("d∘d", w))
    ok = not bad and dt < 1.0
    return ok, f"bounds 0..8, {dt * 1000:.1f} ms (limit 1 s)" + (f"; {bad}" if bad else "")


def check_property_suite():
    rng = random.Random(20261015)
    t0 = time.perf_counter()
    failures = []
    complexes = 0

    for _ in range(500):
        rows = random_matrix(rng)
        A = IntMatrix.from_rows(rows)
        s = smith_normal_form(A)
        d = [x for x in s.diagonal if x]
        ok = (s.U @ A @ s.V == s.D and is_unimodular(s.U) and is_unimodular(s.V)
              and all(d[k + 1] % d[k] == 0 for k in range(len(d) - 1))
              and d == determinantal_invariants(rows, A.cols))
        if not ok:
            failures.append(("snf", rows))

    for _ in range(100):
        psi, gens = random_pointed_monoid(rng)
        hb = hilbert_basis(AffineMonoid(3, tuple(gens)))
        top = max(sum(a * b for a, b in zip(psi, g)) for g in gens)
        if hb != brute_hilbert_basis(gens, psi) or elements_up_to(hb, psi, top) != elements_up_to(gens, psi, top):
            failures.append(("hilbert", gens))

    for _ in range(100):
        n, cols, w = random_koszul_case(rng)
        c = BoundaryChart(len(cols), AffineMonoid.free(n), IntMatrix.from_columns(cols, rows=n))
        if graded_affine_derham(c, w) != koszul_rule(cols, n, w):
            failures.append(("koszul", cols, w))
        # the complex itself, rebuilt and checked
        mats = koszul_complex(quotient_class(c, w))
        complexes += 1
        if not _d_squared_zero(mats):
            failures.append(("d∘d", n))

    for _ in range(200):
        n1, n2 = rng.randint(1, 4), rng.randint(1, 4)
        r1 = [0] * n1
        while not any(r1):
            r1 = [rng.randint(-3, 3) for _ in range(n1)]
        r2 = [rng.randint(-3, 3) for _ in range(n2)]
        if not verify_sglatt_comparison(free_chart(r1), free_chart(r2)):
            failures.append(("sglatt", r1, r2))

    dt = time.perf_counter() - t0
    ok = not failures and dt < 60
    detail = f"500 SNF, 100 Hilbert, 100 Koszul ({complexes} complexes), 200 pairs in {dt:.1f} s (limit 60 s)"
    if failures:
        detail += f"; {len(failures)} failures, first {failures[:2]}"
    return ok, detail


CRITERIA = [
    ("diagonal exactification, chart q -> U1^-1 U2", check_exactification_boundary),
    ("diagonal exactification, chart q -> U1 U2", check_exactification_extending),
    ("closure equations for rho = (i, 1), i in -3..3", check_closures),
    ("special fibers of the self-product", check_base_change),
    ("smoothness verdicts across residue characteristics", check_smoothness),
    ("log de Rham cohomology of P^1, bounds 0..8", check_p1),
    ("property suite against independent oracles", check_property_suite),
]


@pytest.mark.parametrize("label,check", CRITERIA, ids=[c[1].__name__[6:] for c in CRITERIA])
def test_criterion(label, check):
    ok, detail = check()
    line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    import sys
    failed = 0
    for label, check in CRITERIA:
        ok, detail = check()
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
    sys.exit(1 if failed else 0)
