"""Acceptance suite: one test and one printed PASS/FAIL line per criterion."""

import time
from fractions import Fraction

import numpy as np
import pytest

from hanoi_schreier import decimation as dec
from hanoi_schreier import spectrum as sp
from hanoi_schreier.automaton import Word
from hanoi_schreier.exact import Poly
from hanoi_schreier.graph import adjacency, bfs_distance, build_graph, diameter, is_connected
from hanoi_schreier.numeric import compare_with_closed_form


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail, seconds, limit):
        within = seconds < limit
        verdict = "PASS" if ok and within else "FAIL"
        with capsys.disabled():
            print(f"\n[acceptance {number:2d}] {verdict}  {title}: {detail} ({seconds:.2f}s, limit {limit:g}s)")
        assert ok, detail
        assert within, f"took {seconds:.1f}s, limit {limit}s"

    return emit


def test_01_distance_and_diameter(report):
    t0 = time.perf_counter()
    rows = []
    for n in range(1, 9):
        g = build_graph(3, n)
        rows.append((n, bfs_distance(g, Word.constant(0, n), Word.constant(1, n)), diameter(g)))
    ok = all(d == diam == 2**n - 1 for n, d, diam in rows)
    report(1, "d(0^n,1^n) = diameter = 2^n-1, n=1..8", ok, f"diameters {[r[2] for r in rows]}",
           time.perf_counter() - t0, 60)


def test_02_spectrum_counts(report):
    t0 = time.perf_counter()
    bad = []
    for n in range(1, 21):
        t = sp.level_spectrum(n)
        if t.distinct_count != 3 * 2 ** (n - 1) - 1 or t.multiplicity_sum != 3**n:
            bad.append(n)
    report(2, "3*2^(n-1)-1 distinct eigenvalues, multiplicities sum to 3^n, n=1..20", not bad,
           f"failures {bad}" if bad else "all levels exact", time.perf_counter() - t0, 1)


def test_03_numeric_oracle(report):
    t0 = time.perf_counter()
    reports = [compare_with_closed_form(n) for n in range(1, 7)]
    t6 = time.perf_counter() - t0
    worst = max(r.max_deviation for r in reports)
    ok = all(r.passed and r.cluster_counts == r.closed_form_counts for r in reports) and worst <= 1e-8
    report(3, "numeric vs closed form, n=1..6", ok, f"max deviation {worst:.2e}, multiplicities exact", t6, 30)


def test_03b_numeric_oracle_level_seven(report):
    t0 = time.perf_counter()
    r = compare_with_closed_form(7)
    ok = r.passed and r.max_deviation <= 1e-6 and r.cluster_counts == r.closed_form_counts
    report(3, "numeric vs closed form, n=7 (optional)", ok, f"max deviation {r.max_deviation:.2e}",
           time.perf_counter() - t0, 600)


def test_04_exact_oracle(report):
    t0 = time.perf_counter()
    rec = {n: all(dec.recursion_check(n, p) for p in dec.sample_points(20, n, seed=n)) for n in (2, 3, 4)}
    fac = {n: all(dec.factorization_check(n, p) for p in dec.sample_points(20, 0, seed=100 + n)) for n in (1, 2, 3, 4)}
    ok = all(rec.values()) and all(fac.values())
    report(4, "recursion (n=2..4) and factorisation (n=1..4), 20 rational points each", ok,
           f"recursion {rec}, factorisation {fac}", time.perf_counter() - t0, 300)


def test_05_semiconjugacy(report):
    t0 = time.perf_counter()
    residual = dec.semiconjugacy_residual()
    report(5, "Psi(F) - f(Psi) cleared numerator is zero", residual.is_zero(),
           f"{len(residual.terms)} surviving terms", time.perf_counter() - t0, 1)


def test_06_psi_splitting(report):
    t0 = time.perf_counter()
    ok = dec.psi_split_identity()
    report(6, "Psi_theta splitting identity in Q[x, y, theta]", ok, "exact trivariate identity",
           time.perf_counter() - t0, 1)


def test_07_char_poly(report):
    t0 = time.perf_counter()
    bad = []
    for n in range(1, 5):
        expanded = sp.char_poly_factored(n).expand()
        size = 3**n
        xs = range(-(size // 2), size - size // 2 + 1)
        assert len(xs) == size + 1
        for xv in xs:
            if expanded.evaluate([Fraction(xv)]) != dec.det_pencil(n, xv, 1):
                bad.append((n, xv))
                break
    assert sp.char_poly_factored(0).expand() == Poly.const(3, 1) - sp.X1
    conj = [n for n in range(1, 11) if not sp.conjugation_identity(n)]
    report(7, "P_n = D_n(x,1) at 3^n+1 points (n<=4); g^n(x+2) = f^n(x)+2 (n<=10)",
           not bad and not conj, f"sample failures {bad}, conjugation failures {conj}", time.perf_counter() - t0, 60)


def test_08_kns_measure(report):
    t0 = time.perf_counter()
    masses_ok = all(a.mass == Fraction(1, 6 * 3**a.eigenvalue.depth) for a in sp.kns_atoms(6))
    partial_ok = all(sp.kns_partial_mass(d) == 1 - Fraction(2, 3) ** (d + 1) for d in range(31))
    rep = sp.kns_limit_check(0, 15)
    gap_ok = all(r["gap"] == Fraction(3, 2 * 3 ** r["n"]) for r in rep["rows"]) and rep["limit"] == Fraction(1, 6)
    report(8, "KNS masses 1/(6*3^i), partial sums 1-(2/3)^(D+1) for D<=30, gap 3/(2*3^n)",
           masses_ok and partial_ok and gap_ok, f"masses {masses_ok}, partial sums {partial_ok}, gaps {gap_ok}",
           time.perf_counter() - t0, 1)


def test_09_containment_and_disjointness(report):
    t0 = time.perf_counter()
    inside = True
    for base in (0.0, -2.0):
        for d in range(11):
            fam = sp.preimage_family(base, d)
            inside &= bool(fam.lo.min() >= -2.0 and fam.hi.max() <= 3.0)
            inside &= bool(np.all(fam.lo <= fam.values) and np.all(fam.values <= fam.hi))
    disjoint = sp.families_disjoint(0.0, 10) and sp.families_disjoint(-2.0, 10)
    report(9, "preimages in [-2,3]; f^-i(0) and f^-i(-2) enclosures disjoint across i<=10",
           inside and disjoint, f"contained {inside}, disjoint {disjoint}", time.perf_counter() - t0, 10)


def test_10_structure(report):
    t0 = time.perf_counter()
    bad = []
    for k, top in ((3, 7), (4, 5)):
        for n in range(0, top + 1):
            g = build_graph(k, n)
            a = adjacency(g)
            regular = bool((np.asarray(a.sum(axis=1)).ravel() == k * (k - 1) // 2).all())
            loops_ok = k != 3 or n == 0 or len(g.loops()) == 3
            if not (regular and loops_ok and is_connected(g) and (a != a.T).nnz == 0):
                bad.append((k, n))
    report(10, "3 loops (k=3, n>=1); k(k-1)/2-regular and connected (k=3 n<=7, k=4 n<=5)", not bad,
           f"failures {bad}" if bad else "all levels", time.perf_counter() - t0, 60)


def test_julia_property_substitutes():
    j = sp.julia_approx(12)
    assert j.min >= -2 and j.max <= 3
    assert sorted(sp.julia_approx(1).points.tolist()) == [-2.0, 3.0]
    assert sp.boundary_spectrum_description(4)["min_distance_isolated_to_julia"] > 1e-3
