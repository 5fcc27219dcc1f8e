# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: breadth-first search over neighbour tables and
implicit-shift QL on symmetric tridiagonal matrices.

Signatures and results match ``_pykernels`` exactly.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, hypot, copysign

cnp.import_array()


cdef Py_ssize_t _bfs(const int[:, ::1] nbrs, Py_ssize_t source,
                     int[::1] dist, int[::1] queue) noexcept nogil:
    """BFS into ``dist`` (pre-filled with -1); returns the eccentricity."""
    cdef Py_ssize_t deg = nbrs.shape[1]
    cdef Py_ssize_t head = 0, tail = 1, u, v, t
    cdef int du = 0
    dist[source] = 0
    queue[0] = <int>source
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        for t in range(deg):
            v = nbrs[u, t]
            if dist[v] < 0:
                dist[v] = du + 1
                queue[tail] = <int>v
                tail += 1
    return du if tail == nbrs.shape[0] else -1


def bfs_distances(const int[:, ::1] nbrs, Py_ssize_t source):
    cdef Py_ssize_t n = nbrs.shape[0]
    dist = np.full(n, -1, dtype=np.int32)
    queue = np.empty(n, dtype=np.int32)
    cdef int[::1] dv = dist
    cdef int[::1] qv = queue
    with nogil:
        _bfs(nbrs, source, dv, qv)
    return dist


def eccentricities(const int[:, ::1] nbrs):
    """Eccentricity of every vertex; -1 marks a source that cannot reach all."""
    cdef Py_ssize_t n = nbrs.shape[0], s, i
    ecc = np.empty(n, dtype=np.int32)
    dist = np.empty(n, dtype=np.int32)
    queue = np.empty(n, dtype=np.int32)
    cdef int[::1] ev = ecc
    cdef int[::1] dv = dist
    cdef int[::1] qv = queue
    with nogil:
        for s in range(n):
            for i in range(n):
                dv[i] = -1
            ev[s] = <int>_bfs(nbrs, s, dv, qv)
    return ecc


def tridiag_ql(double[::1] d, double[::1] e, int max_iter, double abs_tol=0.0):
    """Eigenvalues of the tridiagonal matrix (diagonal ``d``, off-diagonal ``e``).

    Works in place; ``e`` has length ``len(d)`` with ``e[n-1]`` ignored.
    An off-diagonal entry deflates when it is negligible next to its two
    diagonal neighbours or no larger than ``abs_tol``.
    Returns -1 on success or the index of the block that failed to converge.
    """
    cdef Py_ssize_t status
    with nogil:
        status = _tql(d, e, max_iter, abs_tol)
    return status


cdef Py_ssize_t _tql(double[::1] d, double[::1] e, int max_iter, double abs_tol) noexcept nogil:
    cdef Py_ssize_t n = d.shape[0], l, m, i
    cdef int it
    cdef double g, r, s, c, p, f, b, dd
    if n == 0:
        return -1
    e[n - 1] = 0.0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) <= abs_tol or fabs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                return l
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if r == 0.0 and i >= l:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return -1
