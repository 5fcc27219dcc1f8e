"""Closed-form spectra of the three-peg Schreier graphs.

The level-n spectrum consists of ``3``, the backward orbits ``f^-i(0)`` for
``i < n`` and ``f^-j(-2)`` for ``j < n - 1`` under ``f(x) = x^2 - x - 3``,
with multiplicities ``a_m = (3^(m-1) + 3)/2`` and ``b_m = (3^(m-1) - 1)/2``.
Eigenvalues are identified by their backward-orbit path and carried with a
certified float enclosure.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import intervals as iv
from .exact import Poly

__all__ = [
    "AlgebraicEigenvalue",
    "PreimageFamily",
    "SpectrumFamily",
    "SpectrumTable",
    "KNSAtom",
    "f_eval",
    "preimages",
    "preimage_family",
    "preimage_along",
    "level_spectrum",
    "multiplicity_a",
    "multiplicity_b",
    "kns_atoms",
    "kns_partial_mass",
    "kns_limit_check",
    "char_poly_factored",
    "conjugation_identity",
    "hecke_spectrum",
    "julia_approx",
    "boundary_spectrum_description",
    "families_disjoint",
]

SCHEMA_VERSION = 1

SPECTRUM_LO, SPECTRUM_HI = -2.0, 3.0
MAX_PATH_DEPTH = 40
# 2^24 float pairs is already ~400 MB with paths and midpoints
MAX_FAMILY_DEPTH = 24
ENCLOSURE_WIDTH = 1e-12
CRITICAL_VALUE = Fraction(-13, 4)


def f_eval(x):
    """``x^2 - x - 3``; exact for Fractions and ints."""
    return x * x - x - 3


def multiplicity_a(m: int) -> int:
    if m < 1:
        raise ValueError(f"a_m is defined for m >= 1, got {m}")
    return (3 ** (m - 1) + 3) // 2


def multiplicity_b(m: int) -> int:
    if m < 1:
        raise ValueError(f"b_m is defined for m >= 1, got {m}")
    return (3 ** (m - 1) - 1) // 2


# ---------------------------------------------------------------------------
# backward orbits


def _check_target(target: float) -> float:
    t = float(target)
    if not SPECTRUM_LO <= t <= SPECTRUM_HI:
        raise ValueError(f"target {target} outside [-2, 3]; its backward orbit leaves the real line")
    return t


def _f_interval(x: iv.Pair) -> iv.Pair:
    # centred form (x - 1/2)^2 - 13/4 avoids the dependency blow-up of x^2 - x
    return iv.add_scalar(iv.square(iv.add_scalar(x, -0.5)), -3.25)


def _newton_tighten(x: iv.Pair, theta: iv.Pair) -> iv.Pair:
    """One interval Newton step for ``f(x) = theta`` intersected with ``x``."""
    m = iv.point(iv.midpoint(x))
    resid = iv.sub(_f_interval(m), theta)
    slope = iv.add_scalar(iv.scale(x, 2.0), -1.0)
    step = iv.div(resid, slope)
    return iv.intersect(x, iv.sub(m, step))


def _preimage_step(theta: iv.Pair) -> tuple[iv.Pair, iv.Pair]:
    """Enclosures of the smaller and larger root of ``f(x) = theta``."""
    disc = iv.add_scalar(iv.scale(theta, 4.0), 13.0)
    s = iv.sqrt(disc)
    # s >= sqrt(5) on [-2, 3] so neither branch suffers cancellation
    larger = (iv.down(1.0 + s[0]) * 0.5, iv.up(1.0 + s[1]) * 0.5)
    smaller = (iv.down(1.0 - s[1]) * 0.5, iv.up(1.0 - s[0]) * 0.5)
    return _newton_tighten(smaller, theta), _newton_tighten(larger, theta)


@dataclass(frozen=True)
class AlgebraicEigenvalue:
    """A point of ``f^-depth(base)`` named by its root choices.

    ``path[t]`` is the choice at the ``t``-th backward step from ``base``:
    0 for the smaller root, 1 for the larger.
    """

    base: float
    depth: int
    path: tuple[int, ...]
    value: float
    enclosure: tuple[float, float]

    def round_trip(self) -> bool:
        """Forward-iterating the enclosure ``depth`` times contains ``base``."""
        x = (np.array(self.enclosure[0]), np.array(self.enclosure[1]))
        # f expands near J, so deep enclosures may widen to infinity; that
        # still encloses the base, it just stops being informative
        with np.errstate(over="ignore", invalid="ignore"):
            for _ in range(self.depth):
                x = _f_interval(x)
        return bool(x[0] <= self.base <= x[1])

    @property
    def path_string(self) -> str:
        return "".join(map(str, self.path))

    def disjoint_from(self, other: AlgebraicEigenvalue) -> bool:
        return self.enclosure[1] < other.enclosure[0] or other.enclosure[1] < self.enclosure[0]


@dataclass
class PreimageFamily:
    """All ``2^depth`` points of ``f^-depth(base)`` as arrays, ascending."""

    base: float
    depth: int
    lo: np.ndarray
    hi: np.ndarray
    paths: np.ndarray  # integer code, first backward step in the top bit

    @property
    def values(self) -> np.ndarray:
        return iv.midpoint((self.lo, self.hi))

    def __len__(self) -> int:
        return self.lo.size

    def path_bits(self, idx: int) -> tuple[int, ...]:
        code = int(self.paths[idx])
        return tuple((code >> (self.depth - 1 - t)) & 1 for t in range(self.depth))

    def eigenvalue(self, idx: int) -> AlgebraicEigenvalue:
        lo, hi = float(self.lo[idx]), float(self.hi[idx])
        return AlgebraicEigenvalue(
            self.base, self.depth, self.path_bits(idx), float(self.values[idx]), (lo, hi)
        )

    def eigenvalues(self) -> list[AlgebraicEigenvalue]:
        return [self.eigenvalue(i) for i in range(len(self))]


def preimage_family(target: float, depth: int) -> PreimageFamily:
    t = _check_target(target)
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if depth > MAX_FAMILY_DEPTH:
        raise ValueError(f"2^{depth} preimages is too many to materialise (max depth {MAX_FAMILY_DEPTH})")
    x = iv.point(np.array([t]))
    codes = np.zeros(1, dtype=np.int64)
    for _ in range(depth):
        small, large = _preimage_step(x)
        x = (np.column_stack([small[0], large[0]]).ravel(), np.column_stack([small[1], large[1]]).ravel())
        codes = np.column_stack([2 * codes, 2 * codes + 1]).ravel()
    order = np.argsort(iv.midpoint(x), kind="stable")
    return PreimageFamily(t, depth, x[0][order], x[1][order], codes[order])


def preimages(target: float, depth: int) -> list[AlgebraicEigenvalue]:
    """The ``2^depth`` solutions of ``f^depth(x) = target``, ascending."""
    return preimage_family(target, depth).eigenvalues()


def preimage_along(target: float, path: tuple[int, ...] | str) -> AlgebraicEigenvalue:
    """Follow a single backward path (any depth up to 40)."""
    t = _check_target(target)
    bits = tuple(int(b) for b in path)
    if len(bits) > MAX_PATH_DEPTH:
        raise ValueError(f"path depth {len(bits)} exceeds {MAX_PATH_DEPTH}")
    x = iv.point(np.array([t]))
    for b in bits:
        x = _preimage_step(x)[b]
    lo, hi = float(x[0][0]), float(x[1][0])
    return AlgebraicEigenvalue(t, len(bits), bits, float(iv.midpoint(x)[0]), (lo, hi))


def families_disjoint(base: float, max_depth: int) -> bool:
    """Enclosures of ``f^-i(base)``, ``i <= max_depth``, are pairwise disjoint."""
    fams = [preimage_family(base, i) for i in range(max_depth + 1)]
    return _disjoint(np.concatenate([f.lo for f in fams]), np.concatenate([f.hi for f in fams]))


def _disjoint(lo: np.ndarray, hi: np.ndarray) -> bool:
    order = np.argsort(lo, kind="stable")
    return bool((hi[order][:-1] < lo[order][1:]).all())


# ---------------------------------------------------------------------------
# level spectra


@dataclass(frozen=True)
class SpectrumFamily:
    base: float
    depth: int
    multiplicity: int

    @property
    def size(self) -> int:
        return 2**self.depth

    @property
    def provenance(self) -> str:
        if self.base == 3.0:
            return "fixed point 3"
        return f"f^-{self.depth}({self.base:g})"

    def preimages(self) -> PreimageFamily:
        return preimage_family(self.base, self.depth)


@dataclass
class SpectrumTable:
    """Level-n spectrum grouped by preimage family.

    Counts are exact integers computed from the family structure, so they are
    available for any level; values are materialised on demand.
    """

    n: int
    families: list[SpectrumFamily]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def distinct_count(self) -> int:
        return sum(f.size for f in self.families)

    @property
    def multiplicity_sum(self) -> int:
        return sum(f.size * f.multiplicity for f in self.families)

    @cached_property
    def arrays(self) -> dict[str, np.ndarray]:
        """Columns ``lo, hi, value, multiplicity, family`` sorted ascending."""
        los, his, mults, fam_idx, codes = [], [], [], [], []
        for t, fam in enumerate(self.families):
            pf = fam.preimages()
            los.append(pf.lo)
            his.append(pf.hi)
            codes.append(pf.paths)
            mults.append(np.full(len(pf), fam.multiplicity, dtype=object if fam.multiplicity > 2**62 else np.int64))
            fam_idx.append(np.full(len(pf), t, dtype=np.int64))
        lo, hi = np.concatenate(los), np.concatenate(his)
        order = np.argsort(iv.midpoint((lo, hi)), kind="stable")
        return {
            "lo": lo[order],
            "hi": hi[order],
            "value": iv.midpoint((lo, hi))[order],
            "multiplicity": np.concatenate(mults)[order],
            "family": np.concatenate(fam_idx)[order],
            "path": np.concatenate(codes)[order],
        }

    def entries(self) -> list[tuple[AlgebraicEigenvalue, int, str]]:
        a = self.arrays
        out = []
        for i in range(a["lo"].size):
            fam = self.families[int(a["family"][i])]
            code = int(a["path"][i])
            path = tuple((code >> (fam.depth - 1 - t)) & 1 for t in range(fam.depth))
            ev = AlgebraicEigenvalue(
                fam.base, fam.depth, path, float(a["value"][i]), (float(a["lo"][i]), float(a["hi"][i]))
            )
            out.append((ev, int(a["multiplicity"][i]), fam.provenance))
        return out

    def enclosures_disjoint(self) -> bool:
        a = self.arrays
        return _disjoint(a["lo"], a["hi"])

    def min_separation(self) -> float:
        a = self.arrays
        if a["lo"].size < 2:
            return float("inf")
        return float(np.min(a["lo"][1:] - a["hi"][:-1]))

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "n": self.n,
            "entries": [
                {
                    "base": ev.base,
                    "depth": ev.depth,
                    "path": ev.path_string,
                    "value": ev.value,
                    "enclosure": [ev.enclosure[0], ev.enclosure[1]],
                    "multiplicity": mult,
                    "provenance": prov,
                }
                for ev, mult, prov in self.entries()
            ],
        }


def level_spectrum(n: int) -> SpectrumTable:
    if n < 0:
        raise ValueError("level must be >= 0")
    fams = [SpectrumFamily(3.0, 0, 1)]
    fams += [SpectrumFamily(0.0, i, multiplicity_a(n - i)) for i in range(n)]
    fams += [SpectrumFamily(-2.0, j, multiplicity_b(n - j)) for j in range(n - 1)]
    return SpectrumTable(n, fams)


def spectrum_from_json(doc: dict | str) -> list[dict]:
    """Parse an exported spectrum back into entry dicts, validating shape."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')}")
    entries = doc["entries"]
    for e in entries:
        lo, hi = e["enclosure"]
        if not lo <= e["value"] <= hi or len(e["path"]) != e["depth"]:
            raise ValueError(f"malformed spectrum entry {e}")
    return entries


# ---------------------------------------------------------------------------
# KNS spectral measure


@dataclass(frozen=True)
class KNSAtom:
    eigenvalue: AlgebraicEigenvalue
    mass: Fraction


def kns_mass(depth: int) -> Fraction:
    return Fraction(1, 6 * 3**depth)


def kns_atoms(depth: int) -> list[KNSAtom]:
    """Atoms on ``f^-i{0, -2}`` for ``i <= depth``."""
    out = []
    for i in range(depth + 1):
        for base in (0.0, -2.0):
            out.extend(KNSAtom(ev, kns_mass(i)) for ev in preimages(base, i))
    return out


def kns_partial_mass(depth: int) -> Fraction:
    """Total mass of atoms of depth <= ``depth`` (2^(i+1) atoms at depth i)."""
    return sum((2 ** (i + 1) * kns_mass(i) for i in range(depth + 1)), Fraction(0))


def kns_limit_check(i: int, n_max: int) -> dict:
    """Tabulate ``a_(n-i) / 3^n`` against its limit ``1/(6*3^i)``."""
    if i < 0 or n_max <= i:
        raise ValueError("need i >= 0 and n_max > i")
    limit = kns_mass(i)
    rows = []
    for n in range(i + 1, n_max + 1):
        ratio = Fraction(multiplicity_a(n - i), 3**n)
        rows.append({"n": n, "ratio": ratio, "gap": ratio - limit})
    ratios = [b["gap"] / a["gap"] for a, b in zip(rows, rows[1:])]
    return {"i": i, "limit": limit, "rows": rows, "gap_ratios": ratios}


# ---------------------------------------------------------------------------
# characteristic polynomial


X1 = Poly.var(0, 1)
F_POLY = X1 * X1 - X1 - 3
G_POLY = X1 * X1 - 5 * X1 + 5


def _iterate(p: Poly, times: int, start: Poly) -> Poly:
    q = start
    for _ in range(times):
        q = p.compose([q])
    return q


@dataclass
class FactoredPoly:
    """``sign * prod(factor^exponent)`` over Z[x]."""

    sign: int
    factors: list[tuple[str, Poly, int]]

    @property
    def degree(self) -> int:
        return sum(p.degree() * e for _, p, e in self.factors)

    def expand(self) -> Poly:
        out = Poly.const(self.sign, 1)
        for _, p, e in self.factors:
            out = out * p**e
        return out

    def evaluate(self, x) -> Fraction:
        out = Fraction(self.sign)
        for _, p, e in self.factors:
            out *= Fraction(p.evaluate([x])) ** e
        return out

    def __str__(self) -> str:
        parts = ["-" if self.sign < 0 else ""]
        for name, _, e in self.factors:
            parts.append(f"({name})" + (f"^{e}" if e != 1 else ""))
        return parts[0] + " ".join(parts[1:])


def char_poly_factored(n: int) -> FactoredPoly:
    """Factorisation of ``det(Delta_n - x)`` into irreducibles over Q."""
    if n < 0:
        raise ValueError("level must be >= 0")
    factors: list[tuple[str, Poly, int]] = [("x-3", X1 - 3, 1)]
    for i in range(n):
        name = "x" if i == 0 else ("f(x)" if i == 1 else f"f^{i}(x)")
        factors.append((name, _iterate(F_POLY, i, X1), multiplicity_a(n - i)))
    shifted = X1 + 2
    for j in range(n - 1):
        name = "x+2" if j == 0 else ("g(x+2)" if j == 1 else f"g^{j}(x+2)")
        factors.append((name, _iterate(G_POLY, j, shifted), multiplicity_b(n - j)))
    return FactoredPoly(-1, factors)


def conjugation_identity(n: int, g: Poly | None = None) -> bool:
    """``g^n(x+2) == f^n(x) + 2`` as integer polynomials."""
    g = G_POLY if g is None else g
    lhs = _iterate(g, n, X1 + 2)
    rhs = _iterate(F_POLY, n, X1) + 2
    return lhs == rhs


# ---------------------------------------------------------------------------
# Hecke operator, Julia set, limit spectrum


@dataclass
class ScaledSpectrum:
    values: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    weights: list  # multiplicities (level) or Fraction masses (limit)


def hecke_spectrum(source: SpectrumTable | int | list[KNSAtom]) -> ScaledSpectrum:
    """Spectrum of the averaged generator operator: eigenvalues divided by 3."""
    if isinstance(source, int):
        source = level_spectrum(source)
    if isinstance(source, SpectrumTable):
        a = source.arrays
        lo, hi, weights = a["lo"], a["hi"], [int(m) for m in a["multiplicity"]]
    else:
        lo = np.array([atom.eigenvalue.enclosure[0] for atom in source])
        hi = np.array([atom.eigenvalue.enclosure[1] for atom in source])
        weights = [atom.mass for atom in source]
    lo3, hi3 = iv.scale((lo, hi), 1.0 / 3.0)
    # 1/3 is inexact in binary; widen once more to cover that rounding
    lo3, hi3 = iv.down(lo3), iv.up(hi3)
    return ScaledSpectrum(iv.midpoint((lo3, hi3)), lo3, hi3, weights)


@dataclass
class JuliaApprox:
    depth: int
    points: np.ndarray

    @property
    def min(self) -> float:
        return float(self.points.min())

    @property
    def max(self) -> float:
        return float(self.points.max())

    def nearest_neighbour_gaps(self) -> np.ndarray:
        p = np.sort(self.points)
        if p.size < 2:
            return np.array([])
        gaps = np.diff(p)
        left = np.concatenate([[np.inf], gaps])
        right = np.concatenate([gaps, [np.inf]])
        return np.minimum(left, right)

    def stats(self) -> dict:
        nn = self.nearest_neighbour_gaps()
        out = {"depth": self.depth, "count": int(self.points.size), "min": self.min, "max": self.max}
        if nn.size:
            out.update(nn_min=float(nn.min()), nn_mean=float(nn.mean()), nn_max=float(nn.max()))
        return out

    def distance_to(self, x) -> np.ndarray:
        p = np.sort(self.points)
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        pos = np.clip(np.searchsorted(p, x), 1, p.size - 1) if p.size > 1 else np.zeros(x.shape, int)
        if p.size == 1:
            return np.abs(x - p[0])
        return np.minimum(np.abs(x - p[pos - 1]), np.abs(x - p[pos]))


def julia_approx(depth: int) -> JuliaApprox:
    """``f^-depth(3)``: inverse iteration from the repelling fixed point 3."""
    if depth > 30:
        raise ValueError("julia depth is limited to 30")
    return JuliaApprox(depth, preimage_family(3.0, depth).values)


def boundary_spectrum_description(depth: int, julia_depth: int = 12) -> dict:
    """Truncated description of the spectrum of the infinite orbital graph."""
    isolated = {i: preimage_family(0.0, i).values for i in range(depth + 1)}
    julia = julia_approx(julia_depth)
    every = np.concatenate(list(isolated.values()))
    dist = julia.distance_to(every)
    if julia_depth <= depth:
        warnings.warn("julia_depth should exceed the isolated-point depth", stacklevel=2)
    return {
        "isolated_points": {i: v.tolist() for i, v in isolated.items()},
        "julia": julia.stats(),
        "min_distance_isolated_to_julia": float(dist.min()),
        "classification": {
            "spectrum": "closure of the union of f^-i(0), i >= 0",
            "isolated": "the points f^-i(0) are isolated and accumulate only on J",
            "accumulation": "J, the Julia set of f (a Cantor set)",
        },
        "conjugation": "f(x) = (x - 1/2)^2 - 13/4 is conjugate by x -> x - 1/2 to x^2 - 15/4, and -15/4 < -2",
    }


# ---------------------------------------------------------------------------
# CSV export


def kns_atoms_csv(atoms: list[KNSAtom]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["base", "depth", "path", "value", "lo", "hi", "mass"])
    for atom in atoms:
        ev = atom.eigenvalue
        w.writerow([repr(ev.base), ev.depth, ev.path_string, repr(ev.value),
                    repr(ev.enclosure[0]), repr(ev.enclosure[1]), str(atom.mass)])
    return buf.getvalue()


def kns_atoms_from_csv(text: str) -> list[dict]:
    return [
        {
            "base": float(r["base"]),
            "depth": int(r["depth"]),
            "path": r["path"],
            "value": float(r["value"]),
            "enclosure": (float(r["lo"]), float(r["hi"])),
            "mass": Fraction(r["mass"]),
        }
        for r in csv.DictReader(io.StringIO(text))
    ]


def julia_csv(j: JuliaApprox) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "x"])
    for i, x in enumerate(np.sort(j.points)):
        w.writerow([i, repr(float(x))])
    return buf.getvalue()


def julia_from_csv(text: str) -> np.ndarray:
    return np.array([float(r["x"]) for r in csv.DictReader(io.StringIO(text))])
