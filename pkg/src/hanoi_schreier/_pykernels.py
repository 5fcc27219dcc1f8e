"""Pure-Python/numpy versions of the kernels in ``_kernels.pyx``."""

from __future__ import annotations

import math

import numpy as np


def bfs_distances(nbrs: np.ndarray, source: int) -> np.ndarray:
    n = nbrs.shape[0]
    dist = np.full(n, -1, dtype=np.int32)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        cand = np.unique(nbrs[frontier].ravel())
        cand = cand[dist[cand] < 0]
        dist[cand] = level
        frontier = cand
    return dist


def eccentricities(nbrs: np.ndarray) -> np.ndarray:
    n = nbrs.shape[0]
    ecc = np.empty(n, dtype=np.int32)
    for s in range(n):
        dist = bfs_distances(nbrs, s)
        ecc[s] = -1 if (dist < 0).any() else dist.max()
    return ecc


def tridiag_ql(d: np.ndarray, e: np.ndarray, max_iter: int, abs_tol: float = 0.0) -> int:
    n = d.shape[0]
    if n == 0:
        return -1
    # python floats are much faster than numpy scalars in this loop
    dl = d.tolist()
    el = e.tolist()
    el[n - 1] = 0.0
    fail = -1
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(dl[m]) + abs(dl[m + 1])
                if abs(el[m]) <= abs_tol or abs(el[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                fail = l
                break
            it += 1
            g = (dl[l + 1] - dl[l]) / (2.0 * el[l])
            r = math.hypot(g, 1.0)
            g = dl[m] - dl[l] + el[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            while i >= l:
                f = s * el[i]
                b = c * el[i]
                r = math.hypot(f, g)
                el[i + 1] = r
                if r == 0.0:
                    dl[i + 1] -= p
                    el[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = dl[i + 1] - p
                r = (dl[i] - g) * s + 2.0 * c * b
                p = s * r
                dl[i + 1] = g + p
                g = c * r - b
                i -= 1
            if r == 0.0 and i >= l:
                continue
            dl[l] -= p
            el[l] = g
            el[m] = 0.0
        if fail >= 0:
            break
    d[:] = dl
    e[:] = el
    return fail
