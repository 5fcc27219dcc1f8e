"""Two-parameter pencil, the renormalisation map F and exact identity checks.

``Delta_n(x, y) = a_n + b_n + c_n - x + (y - 1) d_n`` where ``d_n`` joins
words that differ only in their first letter.  Its determinant satisfies a
Schur-complement recursion through the rational map ``F``, which is
semi-conjugate to ``f(t) = t^2 - t - 3`` via ``Psi(x, y) = (x^2 - 1 - xy - 2y^2) / y``.
All checks below run in exact rational arithmetic.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .automaton import MoveLabel
from .exact import Poly, RationalFunction, bareiss_det, ratfun_equal, variables
from .graph import _recursive_generator
from .spectrum import PreimageFamily, multiplicity_a, multiplicity_b, preimage_family

__all__ = [
    "DegeneratePointError",
    "assemble_pencil",
    "det_pencil",
    "d1_formula",
    "apply_F",
    "recursion_check",
    "det_via_recursion",
    "semiconjugacy_identity",
    "psi_split_identity",
    "FactorFamily",
    "build_factorization",
    "factorization_check",
    "exponent_m",
    "sample_points",
    "hyperbola_samples",
    "auxiliary_samples",
    "auxiliary_curve_count",
]

Point = tuple[Fraction, Fraction]

MAX_EXACT_LEVEL = 5

X, Y = variables(2)
L_POLY = X - 1 - Y
K_POLY = X * X - 1 + Y - Y * Y
B2_POLY = X + 1 + Y
A1_POLY = X - 1 + Y
D0_POLY = -(X - 1 - 2 * Y)
PSI_NUM = X * X - 1 - X * Y - 2 * Y * Y
PSI = RationalFunction(PSI_NUM, Y)

# F(x, y) = (x', y') over the common denominator L*K
_LK = L_POLY * K_POLY
F_X = RationalFunction(X * _LK + 2 * Y * Y * (-X * X + X + Y * Y), _LK)
F_Y = RationalFunction(Y * Y * (X - 1 + Y), _LK)

# the quadratic map, as coefficients (t^2, t, 1)
F_COEFFS = (1, -1, -3)


class DegeneratePointError(ValueError):
    """The point lies on a curve where the recursion is undefined."""


def _pt(pt: Sequence) -> Point:
    x, y = pt
    return Fraction(x), Fraction(y)


def psi_theta(theta) -> Poly:
    """``Psi_theta = x^2 - 1 - xy - 2y^2 - theta*y`` for a rational ``theta``."""
    return PSI_NUM - Fraction(theta) * Y


# ---------------------------------------------------------------------------
# pencil and determinants


def _generator_dense(n: int, m: MoveLabel) -> list[list[int]]:
    return _recursive_generator(3, n, m).toarray().tolist()


def assemble_pencil(n: int, x0, y0) -> list[list[Fraction]]:
    """Exact ``3^n x 3^n`` matrix ``[[c-x, y, y], [y, b-x, y], [y, y, a-x]]``
    with ``a, b, c`` the level ``n-1`` generator matrices."""
    if n < 1:
        raise ValueError("the pencil is defined for n >= 1")
    if n > MAX_EXACT_LEVEL:
        raise ValueError(f"exact pencils are capped at n = {MAX_EXACT_LEVEL}")
    x0, y0 = Fraction(x0), Fraction(y0)
    a = _generator_dense(n - 1, MoveLabel(0, 1))
    b = _generator_dense(n - 1, MoveLabel(0, 2))
    c = _generator_dense(n - 1, MoveLabel(1, 2))
    size = 3 ** (n - 1)
    diag_blocks = (c, b, a)
    rows: list[list[Fraction]] = []
    zero, yv = Fraction(0), y0
    for br in range(3):
        for r in range(size):
            row = []
            for bc in range(3):
                if br == bc:
                    g = diag_blocks[br][r]
                    row.extend(Fraction(g[s]) - (x0 if s == r else zero) for s in range(size))
                else:
                    row.extend(yv if s == r else zero for s in range(size))
            rows.append(row)
    return rows


def det_pencil(n: int, x0, y0) -> Fraction:
    return bareiss_det(assemble_pencil(n, x0, y0))


def d1_formula(x, y) -> Fraction:
    x, y = Fraction(x), Fraction(y)
    return -(x - 1 - 2 * y) * (x - 1 + y) ** 2


def _check_regular(pt: Point) -> None:
    for name, poly in (("x-1-y", L_POLY), ("x^2-1+y-y^2", K_POLY), ("x+1+y", B2_POLY)):
        if poly.evaluate(pt) == 0:
            raise DegeneratePointError(f"{name} vanishes at {pt[0]}, {pt[1]}")


def apply_F(pt: Sequence) -> Point:
    x, y = _pt(pt)
    lk = L_POLY.evaluate((x, y)) * K_POLY.evaluate((x, y))
    if lk == 0:
        raise DegeneratePointError(f"F is undefined at ({x}, {y}): (x-1-y)(x^2-1+y-y^2) = 0")
    x1 = x + 2 * y * y * (-x * x + x + y * y) / lk
    y1 = y * y * (x - 1 + y) / lk
    return x1, y1


def _recursion_prefactor(n: int, pt: Point) -> Fraction:
    x, y = pt
    e = 3 ** (n - 2)
    return (x * x - (1 + y) ** 2) ** e * K_POLY.evaluate(pt) ** (2 * e)


def recursion_check(n: int, pt: Sequence) -> bool:
    """``D_n(p) == (x^2-(1+y)^2)^(3^(n-2)) K^(2*3^(n-2)) D_(n-1)(F(p))``, both
    sides by Bareiss.  Raises :class:`DegeneratePointError` off the domain."""
    if not 2 <= n <= MAX_EXACT_LEVEL:
        raise ValueError(f"recursion_check needs 2 <= n <= {MAX_EXACT_LEVEL}")
    p = _pt(pt)
    _check_regular(p)
    rhs = _recursion_prefactor(n, p) * det_pencil(n - 1, *apply_F(p))
    return det_pencil(n, *p) == rhs


def det_via_recursion(n: int, pt: Sequence) -> Fraction:
    """``D_n`` by iterating the recursion down to the closed form of ``D_1``."""
    p = _pt(pt)
    acc = Fraction(1)
    for level in range(n, 1, -1):
        _check_regular(p)
        acc *= _recursion_prefactor(level, p)
        p = apply_F(p)
    return acc * d1_formula(*p)


# ---------------------------------------------------------------------------
# symbolic identities


def _quadratic(coeffs: Sequence, t):
    c2, c1, c0 = coeffs
    return Fraction(c2) * t * t + Fraction(c1) * t + Fraction(c0)


def semiconjugacy_residual(f_coeffs: Sequence = F_COEFFS) -> Poly:
    """Cross-multiplied numerator of ``Psi(F) - f(Psi)``; zero iff the identity holds."""
    psi_of_F = PSI_NUM.compose([F_X, F_Y]) / F_Y
    f_of_psi = _quadratic(f_coeffs, PSI)
    return psi_of_F.num * f_of_psi.den - f_of_psi.num * psi_of_F.den


def semiconjugacy_identity(f_coeffs: Sequence = F_COEFFS) -> bool:
    return semiconjugacy_residual(f_coeffs).is_zero()


def psi_split_identity(product_of_roots=None) -> bool:
    """``(A_1/(LK)) Psi_t0 Psi_t1 == Psi_t(F)`` as an identity in ``(x, y, t)``.

    ``t0, t1`` are the roots of ``f(s) = t``; the product ``Psi_t0 Psi_t1``
    is expanded through ``t0 + t1 = 1`` and ``t0*t1 = -(3 + t)``.
    ``product_of_roots`` overrides the latter (mutation testing).
    """
    x, y, t = variables(3)
    lift = lambda p: p.lift(3)  # noqa: E731
    num = lift(PSI_NUM)
    root_sum = 1
    root_prod = -(3 + t) if product_of_roots is None else product_of_roots(t)
    pair = num * num - root_sum * num * y + root_prod * y * y
    lhs = RationalFunction(lift(A1_POLY) * pair, lift(_LK))
    fx = RationalFunction(lift(F_X.num), lift(F_X.den))
    fy = RationalFunction(lift(F_Y.num), lift(F_Y.den))
    rhs = fx * fx - 1 - fx * fy - 2 * fy * fy - t * fy
    return ratfun_equal(lhs, rhs)


# ---------------------------------------------------------------------------
# factorisation of D_n


def preimage_product(base, depth: int, pt: Sequence) -> Fraction:
    """``prod(Psi_theta(pt) for theta in f^-depth(base))`` in exact arithmetic.

    Sibling roots pair up through ``t0 + t1 = 1``, ``t0*t1 = -(3 + parent)``:
    ``Psi_t0 Psi_t1 = N1 - parent*y1`` with ``N1 = N^2 - N y - 3y^2`` and
    ``y1 = y^2``, so each level of the preimage tree folds into the previous.
    """
    x, y = _pt(pt)
    num = PSI_NUM.evaluate((x, y))
    for _ in range(depth):
        num, y = num * num - num * y - 3 * y * y, y * y
    return num - Fraction(base) * y


def exponent_m(n: int) -> int:
    """``m_n = sum 2^(i-1) a_(n-1-i) + sum 2^(i-1) b_(n-1-i)`` (empty for small n)."""
    total = sum(2 ** (i - 1) * multiplicity_a(n - 1 - i) for i in range(1, n - 1))
    total += sum(2 ** (i - 1) * multiplicity_b(n - 1 - i) for i in range(1, n - 2))
    return total


@dataclass
class Factor:
    name: str
    exponent: int
    base: float | None = None  # theta family for products of Psi_theta
    depth: int | None = None
    line: Poly | None = None

    def thetas(self) -> PreimageFamily | None:
        if self.base is None:
            return None
        return preimage_family(self.base, self.depth)

    def evaluate(self, pt: Point) -> Fraction:
        if self.line is not None:
            return self.line.evaluate(pt)
        return preimage_product(self.base, self.depth, pt)

    def evaluate_float(self, pt: tuple[float, float]) -> float:
        """Float product over the enclosed thetas, independent of the pairing."""
        if self.line is not None:
            return float(self.line.evaluate(tuple(Fraction(v) for v in pt)))
        x, y = pt
        thetas = self.thetas().values
        return float(np.prod((x * x - 1 - x * y - 2 * y * y) - thetas * y))


@dataclass
class FactorFamily:
    n: int
    factors: list[Factor]

    def exponents(self) -> dict[str, int]:
        return {f.name: f.exponent for f in self.factors}

    def evaluate(self, pt: Sequence) -> Fraction:
        p = _pt(pt)
        out = Fraction(1)
        for f in self.factors:
            out *= f.evaluate(p) ** f.exponent
        return out

    def degree(self) -> int:
        deg = 0
        for f in self.factors:
            deg += (1 if f.line is not None else 2 * 2**f.depth) * f.exponent
        return deg


def build_factorization(n: int) -> FactorFamily:
    """``D_n = D_0 A_1^a_n ... A_n^a_1 B_2^b_n ... B_n^b_2``."""
    if n < 1:
        raise ValueError("factorisation is stated for n >= 1")
    factors = [Factor("D0", 1, line=D0_POLY)]
    for m in range(1, n + 1):
        exp = multiplicity_a(n + 1 - m)
        if m == 1:
            factors.append(Factor("A1", exp, line=A1_POLY))
        else:
            factors.append(Factor(f"A{m}", exp, base=0.0, depth=m - 2))
    for m in range(2, n + 1):
        exp = multiplicity_b(n + 2 - m)
        if m == 2:
            factors.append(Factor("B2", exp, line=B2_POLY))
        else:
            factors.append(Factor(f"B{m}", exp, base=-2.0, depth=m - 3))
    return FactorFamily(n, factors)


def factorization_check(n: int, pt: Sequence) -> bool:
    if not 1 <= n <= 4:
        raise ValueError("factorization_check runs for 1 <= n <= 4")
    p = _pt(pt)
    return det_pencil(n, *p) == build_factorization(n).evaluate(p)


# ---------------------------------------------------------------------------
# sample points


def _is_regular(pt: Point) -> bool:
    return all(poly.evaluate(pt) != 0 for poly in (L_POLY, K_POLY, B2_POLY))


def sample_points(count: int, n: int, seed: int = 0, bound: int = 9) -> list[Point]:
    """Random rationals ``p/q`` with ``|p|, q <= bound`` avoiding the
    degenerate curves at the point and its first ``n`` images under F."""
    rng = random.Random(seed)
    out: list[Point] = []
    seen: set[Point] = set()
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 1000 * count + 1000:
            raise RuntimeError("could not find enough regular sample points")
        pt = tuple(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(2))
        # y = 0 collapses the pencil to its block diagonal
        if pt[1] == 0 or pt in seen:
            continue
        q, ok = pt, True
        for _ in range(n + 1):
            if not _is_regular(q):
                ok = False
                break
            q = apply_F(q)
        if ok:
            seen.add(pt)
            out.append(pt)
    return out


# ---------------------------------------------------------------------------
# auxiliary spectrum curves


@dataclass(frozen=True)
class CurvePoint:
    curve: str
    theta_depth: int | None
    theta_index: int | None
    x: float
    y: float


_LINES = (("D0", lambda y: 1 + 2 * y), ("A1", lambda y: 1 - y), ("B2", lambda y: -1 - y))


def hyperbola_samples(
    theta_depth: int, ys: Iterable[float], minus_two_depth: int | None = None, lines: Sequence[str] = ("D0", "A1", "B2")
) -> list[CurvePoint]:
    """Points on ``Psi_theta(x, y) = 0`` for ``theta`` in ``f^-i(0)``
    (``i <= theta_depth``) and ``f^-i(-2)`` (``i <= minus_two_depth``), plus
    the degenerate lines.  Each ``y`` gives up to two ``x`` (quadratic in x)."""
    if theta_depth > 6 or (minus_two_depth or 0) > 6:
        raise ValueError("theta depth is limited to 6")
    if minus_two_depth is None:
        minus_two_depth = theta_depth
    ys = np.asarray(list(ys), dtype=np.float64)
    out: list[CurvePoint] = []
    for name, fn in _LINES:
        if name in lines:
            out.extend(CurvePoint(name, None, None, float(fn(y)), float(y)) for y in ys)
    for base, top, tag in ((0.0, theta_depth, "psi0"), (-2.0, minus_two_depth, "psi-2")):
        for depth in range(top + 1):
            for idx, theta in enumerate(preimage_family(base, depth).values):
                disc = 9 * ys * ys + 4 * theta * ys + 4
                ok = disc >= 0
                root = np.sqrt(np.where(ok, disc, 0.0))
                for sgn in (-1.0, 1.0):
                    xs = (ys + sgn * root) / 2
                    for xv, yv in zip(xs[ok], ys[ok]):
                        out.append(CurvePoint(tag, depth, idx, float(xv), float(yv)))
    return out


def auxiliary_samples(level: int, ys: Iterable[float]) -> list[CurvePoint]:
    """Curves making up the zero set of ``D_level(x, y)``."""
    lines = ("D0", "A1") if level < 2 else ("D0", "A1", "B2")
    return hyperbola_samples(level - 2, ys, level - 3, lines=lines)


def auxiliary_curve_count(level: int) -> int:
    lines = 2 if level < 2 else 3
    return lines + max(0, 2 ** (level - 1) - 1) + max(0, 2 ** (level - 2) - 1)


def curve_residual(p: CurvePoint) -> float:
    if p.curve in ("D0", "A1", "B2"):
        return abs(float(dict(D0=D0_POLY, A1=A1_POLY, B2=B2_POLY)[p.curve].evaluate((p.x, p.y))))
    base = 0.0 if p.curve == "psi0" else -2.0
    theta = preimage_family(base, p.theta_depth).values[p.theta_index]
    return abs(p.x * p.x - 1 - p.x * p.y - 2 * p.y * p.y - theta * p.y)


def curves_to_csv(points: Iterable[CurvePoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["curve", "theta_depth", "theta_index", "x", "y"])
    for p in points:
        w.writerow([p.curve, "" if p.theta_depth is None else p.theta_depth,
                    "" if p.theta_index is None else p.theta_index, repr(p.x), repr(p.y)])
    return buf.getvalue()


def curves_from_csv(text: str) -> list[CurvePoint]:
    rows = csv.DictReader(io.StringIO(text))
    return [
        CurvePoint(
            r["curve"],
            int(r["theta_depth"]) if r["theta_depth"] else None,
            int(r["theta_index"]) if r["theta_index"] else None,
            float(r["x"]),
            float(r["y"]),
        )
        for r in rows
    ]
