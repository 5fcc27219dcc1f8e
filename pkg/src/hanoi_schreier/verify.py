"""Verification suites shared by ``hanoi-schreier verify`` and the test suite.

Each check returns a :class:`CheckResult`.  ``mutation`` names one check whose
reference value is deliberately corrupted, to confirm the suite can fail.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import decimation as dec
from . import spectrum as sp
from .automaton import Word
from .graph import adjacency, bfs_distance, build_graph, diameter, is_connected

MUTATIONS = ("semiconjugacy", "split", "recursion", "factorization", "multiplicity", "bfs", "conjugation")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name:<28} {self.seconds:7.2f}s  {self.detail}"

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "seconds": round(self.seconds, 4)}


def _timed(name: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    t0 = time.perf_counter()
    passed, detail = fn()
    return CheckResult(name, bool(passed), detail, time.perf_counter() - t0)


def check_semiconjugacy(mutation: str | None = None) -> CheckResult:
    coeffs = (1, -1, -2) if mutation == "semiconjugacy" else dec.F_COEFFS

    def run():
        residual = dec.semiconjugacy_residual(coeffs)
        return residual.is_zero(), f"cleared numerator has {len(residual.terms)} terms"

    return _timed("semiconjugacy", run)


def check_psi_split(mutation: str | None = None) -> CheckResult:
    prod = (lambda t: -t) if mutation == "split" else None
    return _timed("psi_split", lambda: (dec.psi_split_identity(prod), "trivariate identity in (x, y, theta)"))


def check_recursion(max_n: int = 4, points: int = 20, seed: int = 0, mutation: str | None = None) -> CheckResult:
    def run():
        bad = []
        for n in range(2, max_n + 1):
            for pt in dec.sample_points(points, n, seed=seed + n):
                if mutation == "recursion":
                    x, y = pt
                    e = 3 ** (n - 2)
                    pre = (x * x - (1 + y) ** 2) ** e * dec.K_POLY.evaluate(pt) ** e
                    ok = dec.det_pencil(n, *pt) == pre * dec.det_pencil(n - 1, *dec.apply_F(pt))
                else:
                    ok = dec.recursion_check(n, pt)
                if not ok:
                    bad.append((n, str(pt[0]), str(pt[1])))
        return not bad, f"n=2..{max_n}, {points} points each" + (f"; failures {bad[:3]}" if bad else "")

    return _timed("recursion", run)


def check_factorization(max_n: int = 4, points: int = 20, seed: int = 0, mutation: str | None = None) -> CheckResult:
    def run():
        bad = []
        for n in range(1, max_n + 1):
            fam = dec.build_factorization(n)
            if mutation == "factorization":
                fam.factors[-1].exponent += 1
            for pt in dec.sample_points(points, 0, seed=seed + 100 + n):
                if dec.det_pencil(n, *pt) != fam.evaluate(pt):
                    bad.append((n, str(pt[0]), str(pt[1])))
        return not bad, f"n=1..{max_n}, {points} points each" + (f"; failures {bad[:3]}" if bad else "")

    return _timed("factorization", run)


def check_multiplicities(max_n: int = 20, mutation: str | None = None) -> CheckResult:
    a = sp.multiplicity_a
    if mutation == "multiplicity":
        a = lambda m: (3 ** (m - 1) + 1) // 2  # noqa: E731
    b = sp.multiplicity_b

    def run():
        problems = []
        for n in range(1, max_n + 1):
            total = 1 + sum(2**i * a(n - i) for i in range(n)) + sum(2**j * b(n - j) for j in range(n - 1))
            distinct = sp.level_spectrum(n).distinct_count
            if total != 3**n or distinct != 3 * 2 ** (n - 1) - 1:
                problems.append(n)
        for n in range(2, 13):
            m = dec.exponent_m(n)
            ok = (
                3 ** (n - 2) == m + 1
                and 2 * 3 ** (n - 2) == m + a(n - 1) + b(n - 1)
                and a(n) == m + a(n - 1) + 1
                and b(n) == b(n - 1) + 3 ** (n - 2)
            )
            if not ok:
                problems.append(("exponents", n))
        return not problems, f"levels 1..{max_n}, exponent identities 2..12" + (f"; failures {problems[:3]}" if problems else "")

    return _timed("multiplicities", run)


def check_bfs(max_n: int = 8, mutation: str | None = None) -> CheckResult:
    def run():
        bad = []
        for n in range(1, max_n + 1):
            g = build_graph(3, n)
            want = 2**n if mutation == "bfs" else 2**n - 1
            dist = bfs_distance(g, Word.constant(0, n), Word.constant(1, n))
            diam = diameter(g)
            if dist != want or diam != want:
                bad.append((n, dist, diam))
        return not bad, f"d(0^n,1^n) = diam = 2^n-1 for n=1..{max_n}" + (f"; failures {bad[:3]}" if bad else "")

    return _timed("bfs_distance_diameter", run)


def check_conjugation(max_n: int = 10, mutation: str | None = None) -> CheckResult:
    x = sp.X1
    g = x * x - 5 * x + 4 if mutation == "conjugation" else None

    def run():
        bad = [n for n in range(1, max_n + 1) if not sp.conjugation_identity(n, g)]
        return not bad, f"g^n(x+2) = f^n(x)+2 for n=1..{max_n}" + (f"; failures {bad}" if bad else "")

    return _timed("conjugation", run)


def check_char_poly(max_n: int = 4) -> CheckResult:
    def run():
        bad = []
        for n in range(0, max_n + 1):
            expanded = sp.char_poly_factored(n).expand()
            if expanded.degree() != 3**n:
                bad.append((n, "degree"))
                continue
            half = (3**n + 1) // 2
            for xv in range(-half, 3**n + 1 - half):
                if n == 0:
                    det = Fraction(3 - xv)
                else:
                    det = dec.det_pencil(n, xv, 1)
                if expanded.evaluate([Fraction(xv)]) != det:
                    bad.append((n, xv))
                    break
        return not bad, f"expanded P_n = D_n(x,1) at 3^n+1 points, n<={max_n}" + (f"; failures {bad}" if bad else "")

    return _timed("char_poly", run)


def check_kns(max_depth: int = 30) -> CheckResult:
    def run():
        ok = all(sp.kns_partial_mass(d) == 1 - Fraction(2, 3) ** (d + 1) for d in range(max_depth + 1))
        rep = sp.kns_limit_check(0, 12)
        ok &= all(r["gap"] == Fraction(3, 2 * 3 ** r["n"]) for r in rep["rows"])
        ok &= all(q == Fraction(1, 3) for q in rep["gap_ratios"])
        ok &= all(atom.mass == Fraction(1, 6 * 3**atom.eigenvalue.depth) for atom in sp.kns_atoms(4))
        return ok, f"partial masses D<={max_depth}, limit gaps n<=12"

    return _timed("kns_measure", run)


def check_containment(max_depth: int = 10) -> CheckResult:
    def run():
        inside = True
        for base in (0.0, -2.0, 3.0):
            for d in range(max_depth + 1):
                pf = sp.preimage_family(base, d)
                inside &= bool((pf.lo >= -2.0 - 1e-12).all() and (pf.hi <= 3.0 + 1e-12).all())
        disjoint = sp.families_disjoint(0.0, max_depth) and sp.families_disjoint(-2.0, max_depth)
        return inside and disjoint, f"contained in [-2,3] and disjoint across depths <= {max_depth}"

    return _timed("containment_disjointness", run)


def check_structure(cases=((3, 7), (4, 5))) -> CheckResult:
    def run():
        bad = []
        for k, top in cases:
            for n in range(0, top + 1):
                g = build_graph(k, n)
                a = adjacency(g)
                rows = a.sum(axis=1).A.ravel()
                loops = len(g.loops())
                want_loops = k * (k - 1) // 2 if n == 0 else (3 if k == 3 else None)
                if (rows != k * (k - 1) // 2).any() or not is_connected(g) or (a != a.T).nnz:
                    bad.append((k, n))
                if want_loops is not None and loops != want_loops:
                    bad.append((k, n, "loops", loops))
        return not bad, "regular, symmetric, connected; 3 loops for k=3" + (f"; failures {bad}" if bad else "")

    return _timed("structure", run)


def check_numeric(max_n: int = 6) -> CheckResult:
    from .numeric import compare_with_closed_form

    def run():
        reports = [compare_with_closed_form(n) for n in range(1, max_n + 1)]
        worst = max(r.max_deviation for r in reports)
        return all(r.passed for r in reports), f"n=1..{max_n}, max deviation {worst:.2e}"

    return _timed("numeric_vs_closed_form", run)


DEFAULT_SUITE = ("semiconjugacy", "psi_split", "recursion", "factorization", "multiplicities", "bfs", "conjugation")
FULL_EXTRA = ("char_poly", "kns", "containment", "structure", "numeric")


def run_suite(
    seed: int = 0, points: int = 20, full: bool = False, mutation: str | None = None, max_n: int = 4
) -> list[CheckResult]:
    if mutation is not None and mutation not in MUTATIONS:
        raise ValueError(f"unknown mutation {mutation!r}")
    results = [
        check_semiconjugacy(mutation),
        check_psi_split(mutation),
        check_recursion(max_n, points, seed, mutation),
        check_factorization(min(max_n, 4), points, seed, mutation),
        check_multiplicities(mutation=mutation),
        check_bfs(mutation=mutation),
        check_conjugation(mutation=mutation),
    ]
    if full:
        results += [check_char_poly(), check_kns(), check_containment(), check_structure(), check_numeric()]
    return results

