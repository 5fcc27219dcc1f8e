"""Vectorised interval arithmetic on float64 with outward rounding.

An interval array is a pair ``(lo, hi)`` of equal-shape numpy arrays.  Every
operation is done in round-to-nearest and then widened by one ulp in each
direction, which encloses the exact result of the operation.
"""

from __future__ import annotations

import numpy as np

Pair = tuple[np.ndarray, np.ndarray]


def down(x):
    return np.nextafter(x, -np.inf)


def up(x):
    return np.nextafter(x, np.inf)


def point(x) -> Pair:
    x = np.asarray(x, dtype=np.float64)
    return x.copy(), x.copy()


def add(a: Pair, b: Pair) -> Pair:
    return down(a[0] + b[0]), up(a[1] + b[1])


def sub(a: Pair, b: Pair) -> Pair:
    return down(a[0] - b[1]), up(a[1] - b[0])


def add_scalar(a: Pair, c: float) -> Pair:
    return down(a[0] + c), up(a[1] + c)


def mul(a: Pair, b: Pair) -> Pair:
    cands = np.stack([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]])
    return down(cands.min(axis=0)), up(cands.max(axis=0))


def square(a: Pair) -> Pair:
    lo2, hi2 = a[0] * a[0], a[1] * a[1]
    straddle = (a[0] <= 0) & (a[1] >= 0)
    lo = np.where(straddle, 0.0, down(np.minimum(lo2, hi2)))
    return lo, up(np.maximum(lo2, hi2))


def div(a: Pair, b: Pair) -> Pair:
    if ((b[0] <= 0) & (b[1] >= 0)).any():
        raise ZeroDivisionError("interval divisor contains zero")
    cands = np.stack([a[0] / b[0], a[0] / b[1], a[1] / b[0], a[1] / b[1]])
    return down(cands.min(axis=0)), up(cands.max(axis=0))


def scale(a: Pair, c: float) -> Pair:
    lo, hi = a[0] * c, a[1] * c
    if c < 0:
        lo, hi = hi, lo
    return down(lo), up(hi)


def sqrt(a: Pair) -> Pair:
    if (a[0] < 0).any():
        raise ValueError("square root of an interval reaching below zero")
    return np.maximum(down(np.sqrt(a[0])), 0.0), up(np.sqrt(a[1]))


def intersect(a: Pair, b: Pair) -> Pair:
    lo, hi = np.maximum(a[0], b[0]), np.minimum(a[1], b[1])
    if (lo > hi).any():
        raise ArithmeticError("empty intersection of intervals that must overlap")
    return lo, hi


def contains(a: Pair, x) -> np.ndarray:
    return (a[0] <= x) & (x <= a[1])


def width(a: Pair) -> np.ndarray:
    return a[1] - a[0]


def midpoint(a: Pair) -> np.ndarray:
    return a[0] + 0.5 * (a[1] - a[0])
