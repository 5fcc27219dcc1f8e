"""Exact rational arithmetic: sparse multivariate polynomials, rational
functions and fraction-free determinants.

Scalars are :class:`fractions.Fraction`.  Polynomials live in a ring with a
fixed number of variables; the bivariate ring ``Q[x, y]`` is the common case
and ``Q[x, y, t]`` is used where a formal parameter is needed.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Fraction",
    "Poly",
    "RationalFunction",
    "bareiss_det",
    "cofactor_det",
    "poly_eval",
    "ratfun_equal",
    "variables",
]

Monomial = tuple[int, ...]


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


class Poly:
    """Polynomial with Fraction coefficients in ``nvars`` variables.

    Stored as ``{exponent tuple: coefficient}`` with no zero coefficients.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, terms: Mapping[Monomial, object] | None = None, nvars: int = 2):
        self.nvars = nvars
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            if len(mono) != nvars:
                raise ValueError(f"monomial {mono} does not have {nvars} exponents")
            c = _as_fraction(c)
            if c:
                clean[tuple(mono)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict[Monomial, Fraction], nvars: int) -> Poly:
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def const(cls, c, nvars: int = 2) -> Poly:
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, index: int, nvars: int = 2) -> Poly:
        mono = tuple(1 if i == index else 0 for i in range(nvars))
        return cls({mono: 1}, nvars)

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"mixing rings with {self.nvars} and {other.nvars} variables")
            return other
        return Poly.const(other, self.nvars)

    # ring operations
    def __add__(self, other) -> Poly:
        if isinstance(other, RationalFunction):
            return NotImplemented
        other = self._coerce(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Poly._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw({m: -c for m, c in self.terms.items()}, self.nvars)

    def __sub__(self, other) -> Poly:
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Poly:
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self._coerce(other) - self

    def __mul__(self, other) -> Poly:
        if isinstance(other, RationalFunction):
            return NotImplemented
        if not isinstance(other, Poly):
            c = _as_fraction(other)
            if not c:
                return Poly._raw({}, self.nvars)
            return Poly._raw({m: v * c for m, v in self.terms.items()}, self.nvars)
        other = self._coerce(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                out[mono] = out.get(mono, 0) + c1 * c2
        return Poly._raw({m: c for m, c in out.items() if c}, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Poly:
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(1, self.nvars)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            try:
                other = Poly.const(other, self.nvars)
            except TypeError:
                return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, var: int) -> int:
        return max((m[var] for m in self.terms), default=-1)

    def __call__(self, *point):
        return self.evaluate(point)

    def evaluate(self, point: Sequence):
        """Evaluate at ``point``; works for any values supporting + and *."""
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        powers: list[dict[int, object]] = [{0: 1} for _ in range(self.nvars)]

        def pw(i: int, e: int):
            cache = powers[i]
            if e not in cache:
                cache[e] = pw(i, e - 1) * point[i]
            return cache[e]

        total = 0
        for mono, c in self.terms.items():
            term = c
            for i, e in enumerate(mono):
                if e:
                    term = term * pw(i, e)
            total = total + term
        return total

    def compose(self, subs: Sequence) -> object:
        """Substitute polynomials (or rational functions) for the variables."""
        out = self.evaluate(subs)
        # constants evaluate to bare scalars; keep the result in the target ring
        if subs and not isinstance(out, (Poly, RationalFunction)):
            ring = subs[0]
            if isinstance(ring, (Poly, RationalFunction)):
                out = Poly.const(out, ring.nvars)
        return out

    def lift(self, nvars: int) -> Poly:
        """Embed into a ring with more variables (new ones appended)."""
        if nvars < self.nvars:
            raise ValueError("cannot drop variables")
        pad = (0,) * (nvars - self.nvars)
        return Poly._raw({m + pad: c for m, c in self.terms.items()}, nvars)

    def coefficients(self) -> list[Fraction]:
        """Dense coefficient list, constant term first (univariate only)."""
        if self.nvars != 1:
            raise ValueError("coefficients() is for univariate polynomials")
        out = [Fraction(0)] * (self.degree() + 1)
        for (e,), c in self.terms.items():
            out[e] = c
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        names = "xyt" if self.nvars <= 3 else [f"v{i}" for i in range(self.nvars)]
        parts = []
        for mono in sorted(self.terms, key=lambda m: (-sum(m), [-e for e in m])):
            c = self.terms[mono]
            vs = "*".join(f"{names[i]}^{e}" if e > 1 else names[i] for i, e in enumerate(mono) if e)
            if not vs:
                parts.append(str(c))
            elif c == 1:
                parts.append(vs)
            elif c == -1:
                parts.append("-" + vs)
            else:
                parts.append(f"{c}*{vs}")
        return " + ".join(parts).replace("+ -", "- ")


def variables(nvars: int = 2) -> tuple[Poly, ...]:
    return tuple(Poly.var(i, nvars) for i in range(nvars))


class RationalFunction:
    """Quotient ``num / den`` of polynomials; never reduced, compared by
    cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.const(1, num.nvars)
        if not isinstance(den, Poly):
            den = Poly.const(den, num.nvars)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num = num
        self.den = den

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def _coerce(self, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction(other)
        return RationalFunction(Poly.const(other, self.nvars))

    def __add__(self, other) -> RationalFunction:
        o = self._coerce(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> RationalFunction:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> RationalFunction:
        return self._coerce(other) - self

    def __mul__(self, other) -> RationalFunction:
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RationalFunction:
        o = self._coerce(other)
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> RationalFunction:
        return self._coerce(other) / self

    def __pow__(self, e: int) -> RationalFunction:
        if e < 0:
            return RationalFunction(self.den**-e, self.num**-e)
        return RationalFunction(self.num**e, self.den**e)

    def __eq__(self, other) -> bool:
        return ratfun_equal(self, self._coerce(other))

    __hash__ = None  # type: ignore[assignment]

    def evaluate(self, point: Sequence):
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.num.evaluate(point) / d

    def __call__(self, *point):
        return self.evaluate(point)

    def __repr__(self) -> str:
        return f"({self.num!r}) / ({self.den!r})"


def poly_eval(p: Poly, pt: Sequence) -> Fraction:
    return _as_fraction(p.evaluate([_as_fraction(v) for v in pt]))


def ratfun_equal(f: RationalFunction, g: RationalFunction) -> bool:
    return (f.num * g.den - g.num * f.den).is_zero()


def bareiss_det(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Rows are first scaled to integers; row swaps are tracked for the sign.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix must be square")
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    a: list[list[int]] = []
    for row in matrix:
        row = [_as_fraction(v) for v in row]
        m = lcm(*(v.denominator for v in row))
        scale *= m
        a.append([v.numerator * (m // v.denominator) for v in row])

    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            lead = row_i[k]
            if lead:
                for j in range(k + 1, n):
                    row_i[j] = (pivot * row_i[j] - lead * row_k[j]) // prev
            elif pivot != prev:
                for j in range(k + 1, n):
                    if row_i[j]:
                        row_i[j] = pivot * row_i[j] // prev
            row_i[k] = 0
        prev = pivot
    return Fraction(sign * a[n - 1][n - 1]) / scale


def cofactor_det(matrix: Sequence[Sequence]) -> Fraction:
    """Laplace expansion along the first row (small matrices only)."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return _as_fraction(matrix[0][0])
    total = Fraction(0)
    for j, c in enumerate(matrix[0]):
        if c:
            minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
            total += (-1) ** j * _as_fraction(c) * cofactor_det(minor)
    return total


def identity_matrix(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_from_rows(rows: Iterable[Iterable]) -> list[list[Fraction]]:
    return [[_as_fraction(v) for v in row] for row in rows]
