"""Dense symmetric eigensolver used as an independent numerical check.

Householder reduction to tridiagonal form followed by implicit-shift QL
(the QL sweep runs in the compiled kernel when available).
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .graph import adjacency, build_graph
from .spectrum import SpectrumTable, level_spectrum

__all__ = [
    "ConvergenceError",
    "EigenResult",
    "householder_tridiagonal",
    "dense_sym_eig",
    "cluster",
    "compare_with_closed_form",
    "ComparisonReport",
    "histogram_csv",
    "char_poly_enclosure",
    "compare_char_poly",
]

MAX_SIZE = 2187
QL_MAX_ITER = 60
SYMMETRY_TOL = 1e-12


class ConvergenceError(ArithmeticError):
    def __init__(self, block: int):
        super().__init__(f"implicit QL did not converge for the block starting at index {block}")
        self.block = block


def householder_tridiagonal(m: np.ndarray, accumulate: bool = False):
    """Reduce a symmetric matrix to tridiagonal form ``Q^T M Q = T``.

    Returns ``(diagonal, off_diagonal, Q)``; ``Q`` is ``None`` unless
    ``accumulate`` is set.
    """
    a = np.array(m, dtype=np.float64, copy=True)
    n = a.shape[0]
    q = np.eye(n) if accumulate else None
    for k in range(n - 2):
        x = a[k + 1 :, k]
        tail = np.linalg.norm(x[1:])
        if tail == 0.0:
            continue
        norm = np.hypot(x[0], tail)
        alpha = -norm if x[0] >= 0 else norm
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        sub = a[k + 1 :, k + 1 :]
        p = sub @ v
        w = p - (v @ p) * v
        w *= 2.0
        sub -= np.outer(v, w)
        sub -= np.outer(w, v)
        a[k + 1, k] = a[k, k + 1] = alpha
        a[k + 2 :, k] = 0.0
        a[k, k + 2 :] = 0.0
        if q is not None:
            qv = q[:, k + 1 :] @ v
            q[:, k + 1 :] -= 2.0 * np.outer(qv, v)
    d = np.diagonal(a).copy()
    e = np.diagonal(a, 1).copy()
    return d, e, q


@dataclass
class EigenResult:
    eigenvalues: np.ndarray
    clusters: list[tuple[float, int]]
    trace_residual: float
    frobenius_residual: float
    n: int | None = None

    @property
    def size(self) -> int:
        return self.eigenvalues.size


def _tridiagonal_eigenvalues(d: np.ndarray, e: np.ndarray) -> np.ndarray:
    d = np.ascontiguousarray(d, dtype=np.float64).copy()
    ee = np.zeros(d.size, dtype=np.float64)
    ee[: e.size] = e
    # absolute deflation at eps*||T||: backward stable, and needed where tiny
    # off-diagonals sit between near-zero diagonals (highly repeated eigenvalues)
    norm = float(np.max(np.abs(d) + np.abs(ee) + np.abs(np.roll(ee, 1)))) if d.size else 0.0
    status = kernels.tridiag_ql(d, ee, QL_MAX_ITER, np.finfo(np.float64).eps * norm)
    if status >= 0:
        raise ConvergenceError(int(status))
    return np.sort(d)


def dense_sym_eig(m, gap: float | None = None, level: int | None = None) -> EigenResult:
    """All eigenvalues of a real symmetric matrix, ascending, plus clusters."""
    m = np.asarray(m.toarray() if hasattr(m, "toarray") else m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if m.shape[0] > MAX_SIZE:
        raise ValueError(f"dense eigensolver is capped at {MAX_SIZE} rows")
    if m.size and np.max(np.abs(m - m.T)) > SYMMETRY_TOL:
        raise ValueError("matrix is not symmetric")
    d, e, _ = householder_tridiagonal(m)
    vals = _tridiagonal_eigenvalues(d, e)
    radius = float(np.max(np.abs(vals))) if vals.size else 0.0
    if gap is None:
        gap = 1e-6 * max(radius, 1.0)
    return EigenResult(
        eigenvalues=vals,
        clusters=cluster(vals, gap),
        trace_residual=float(abs(vals.sum() - np.trace(m))),
        frobenius_residual=float(abs((vals**2).sum() - (m**2).sum())),
        n=level,
    )


def cluster(values, gap: float, min_separation: float | None = None) -> list[tuple[float, int]]:
    """Merge consecutive sorted values closer than ``gap``; mean representative."""
    if min_separation is not None and gap > 0.5 * min_separation:
        warnings.warn(
            f"cluster gap {gap:g} exceeds half the minimal eigenvalue separation {min_separation:g}",
            stacklevel=2,
        )
    vals = np.asarray(values, dtype=np.float64)
    if vals.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(vals) > gap) + 1
    return [(float(chunk.mean()), int(chunk.size)) for chunk in np.split(vals, breaks)]


@dataclass
class ComparisonReport:
    n: int
    passed: bool
    max_deviation: float
    tolerance: float
    cluster_counts: list[int]
    closed_form_counts: list[int]
    mismatches: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "cluster_counts": self.cluster_counts,
            "closed_form_counts": self.closed_form_counts,
            "mismatches": self.mismatches,
        }


def compare_with_closed_form(n: int, tolerance: float | None = None) -> ComparisonReport:
    """Numerical spectrum of ``Delta_n`` against the closed form, cluster by cluster."""
    if not 0 <= n <= 7:
        raise ValueError("numeric comparison is limited to n <= 7")
    if tolerance is None:
        tolerance = 1e-8 if n <= 6 else 1e-6
    table: SpectrumTable = level_spectrum(n)
    min_sep = table.min_separation()
    gap = 1e-6 * 3.0
    if not gap < 0.5 * min_sep:
        raise AssertionError(f"default cluster gap {gap:g} is not below half the separation {min_sep:g}")
    res = dense_sym_eig(adjacency(build_graph(3, n)), gap=gap, level=n)
    clusters = cluster(res.eigenvalues, gap, min_separation=min_sep)
    entries = table.entries()
    counts = [c for _, c in clusters]
    expected = [mult for _, mult, _ in entries]
    mismatches: list[dict] = []
    max_dev = 0.0
    if len(clusters) != len(entries):
        mismatches.append({"reason": "cluster count", "numeric": len(clusters), "closed_form": len(entries)})
        max_dev = float("inf")
    else:
        start = 0
        for (rep, count), (ev, mult, prov) in zip(clusters, entries):
            members = res.eigenvalues[start : start + count]
            start += count
            dev = float(np.max(np.abs(members - ev.value)))
            max_dev = max(max_dev, dev)
            if count != mult or dev > tolerance:
                mismatches.append(
                    {
                        "provenance": prov,
                        "path": ev.path_string,
                        "value": ev.value,
                        "numeric": rep,
                        "count": count,
                        "multiplicity": mult,
                        "deviation": dev,
                    }
                )
    return ComparisonReport(n, not mismatches and max_dev <= tolerance, max_dev, tolerance, counts, expected, mismatches)


def histogram_csv(clusters: list[tuple[float, int]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["eigenvalue", "count"])
    for value, count in clusters:
        w.writerow([repr(value), count])
    return buf.getvalue()


def histogram_from_csv(text: str) -> list[tuple[float, int]]:
    return [(float(r["eigenvalue"]), int(r["count"])) for r in csv.DictReader(io.StringIO(text))]


# ---------------------------------------------------------------------------
# characteristic polynomial from numeric eigenvalues

_GRID_BITS = 60


def _linear_product(roots: list[int]) -> list[int]:
    """Integer coefficients (constant first) of prod (X - r)."""
    coeffs = [1]
    for r in roots:
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= r * c
        coeffs = nxt
    return coeffs


def char_poly_enclosure(eigenvalues, delta: float):
    """Coefficient intervals of ``prod (x - lam)`` when each true eigenvalue
    lies within ``delta`` of the computed one.

    Work is exact on a ``2^-60`` grid: with ``X = 2^60 x`` the monic product
    has integer coefficients, and the radius of coefficient ``k`` is bounded
    by ``e_(N-k)(|lam| + delta) - e_(N-k)(|lam|)``.  Returns
    ``(centre, radius)`` as lists of Fractions, constant term first.
    """
    scale = 1 << _GRID_BITS
    m = [int(round(float(v) * scale)) for v in eigenvalues]
    d = int(np.ceil(delta * scale)) + 1
    centre = _linear_product(m)
    # e_j(|m|) appear with alternating signs as coefficients of prod (X + |m|)
    lo = _linear_product([-abs(v) for v in m])
    hi = _linear_product([-(abs(v) + d) for v in m])
    n = len(m)
    cen = [Fraction(c, scale ** (n - k)) for k, c in enumerate(centre)]
    rad = [Fraction(h - l, scale ** (n - k)) for k, (h, l) in enumerate(zip(hi, lo))]
    return cen, rad


def compare_char_poly(n: int, delta: float = 1e-10, coefficients=None) -> tuple[bool, int]:
    """Exact ``det(Delta_n - x)`` coefficients inside the numeric enclosure.

    The leading sign is normalised: ``det(Delta_n - x) = (-1)^N prod (x - lam)``.
    Returns ``(passed, number of coefficients outside)``.
    """
    from .spectrum import char_poly_factored

    res = dense_sym_eig(adjacency(build_graph(3, n)), level=n)
    cen, rad = char_poly_enclosure(res.eigenvalues, delta)
    exact = char_poly_factored(n).expand().coefficients() if coefficients is None else list(coefficients)
    sign = -1 if res.size % 2 else 1
    bad = sum(1 for c, mid, r in zip(exact, cen, rad) if abs(sign * c - mid) > r)
    return bad == 0 and len(exact) == len(cen), bad
