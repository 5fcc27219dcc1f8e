"""Level-n Schreier graphs of the Hanoi Towers group on k pegs.

Vertices are the ``k**n`` words of length ``n``, indexed base-k with the
first letter most significant.  Each generator contributes one labeled edge
per orbit of size two and one loop per fixed word, so every vertex meets
exactly ``k(k-1)/2`` labeled edges.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
import scipy.sparse as sp

from . import kernels
from .automaton import MoveLabel, Word, move_labels

__all__ = [
    "ResourceCapError",
    "SchreierGraph",
    "build_graph",
    "adjacency",
    "adjacency_from_edges",
    "adjacency_from_recursion",
    "bfs_distance",
    "diameter",
    "emit_dot",
    "graph_to_json",
    "graph_from_json",
    "max_vertices",
    "max_diameter_vertices",
]

SCHEMA_VERSION = 1

DEFAULT_MAX_VERTICES = 2_000_000
DEFAULT_MAX_DIAMETER_VERTICES = 10_000


class ResourceCapError(RuntimeError):
    """Requested object exceeds a configured size cap."""


def max_vertices() -> int:
    return int(os.environ.get("HANOI_SCHREIER_MAX_VERTICES", DEFAULT_MAX_VERTICES))


def max_diameter_vertices() -> int:
    return int(os.environ.get("HANOI_SCHREIER_MAX_DIAMETER_VERTICES", DEFAULT_MAX_DIAMETER_VERTICES))


def _word_digits(k: int, n: int) -> np.ndarray:
    idx = np.arange(k**n, dtype=np.int64)
    digits = np.empty((k**n, n), dtype=np.int8)
    for p in range(n - 1, -1, -1):
        idx, digits[:, p] = np.divmod(idx, k)
    return digits


def _generator_permutations(k: int, n: int, labels: list[MoveLabel]) -> np.ndarray:
    """``perms[t, u]`` is the index of ``labels[t]`` applied to word ``u``."""
    size = k**n
    perms = np.tile(np.arange(size, dtype=np.int32), (len(labels), 1))
    if n == 0:
        return perms
    digits = _word_digits(k, n)
    weights = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    rows = np.arange(size)
    for t, m in enumerate(labels):
        hit = (digits == m.i) | (digits == m.j)
        moved = hit.any(axis=1)
        pos = hit.argmax(axis=1)
        old = digits[rows, pos].astype(np.int64)
        new = np.where(old == m.i, m.j, m.i)
        delta = np.where(moved, (new - old) * weights[pos], 0)
        perms[t] = rows + delta
    return perms


@dataclass(frozen=True)
class SchreierGraph:
    k: int
    n: int
    labels: tuple[MoveLabel, ...]
    perms: np.ndarray = field(repr=False, compare=False)

    @property
    def num_vertices(self) -> int:
        return self.k**self.n

    @property
    def degree(self) -> int:
        return len(self.labels)

    def word(self, idx: int) -> Word:
        return Word.from_index(idx, self.n, self.k)

    def neighbour_table(self) -> np.ndarray:
        """``(N, degree)`` int32 table; a loop lists the vertex itself."""
        return np.ascontiguousarray(self.perms.T, dtype=np.int32)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Edge multiset as ``(u, v, label_index)`` arrays with ``u <= v``."""
        us, vs, ts = [], [], []
        src = np.arange(self.num_vertices, dtype=np.int32)
        for t in range(self.degree):
            keep = src <= self.perms[t]
            us.append(src[keep])
            vs.append(self.perms[t][keep])
            ts.append(np.full(int(keep.sum()), t, dtype=np.int32))
        return np.concatenate(us), np.concatenate(vs), np.concatenate(ts)

    def edges(self) -> Iterator[tuple[Word, Word, MoveLabel]]:
        us, vs, ts = self.edge_arrays()
        for u, v, t in zip(us.tolist(), vs.tolist(), ts.tolist()):
            yield self.word(u), self.word(v), self.labels[t]

    def loops(self) -> list[tuple[Word, MoveLabel]]:
        out = []
        for t, m in enumerate(self.labels):
            for u in np.flatnonzero(self.perms[t] == np.arange(self.num_vertices)).tolist():
                out.append((self.word(u), m))
        return out

    def _check_word(self, w: Word) -> int:
        if w.k != self.k or len(w) != self.n:
            raise ValueError(f"word {w} (k={w.k}, length {len(w)}) is not a vertex of level {self.n}, k={self.k}")
        return w.index()


def build_graph(k: int, n: int, cap: int | None = None) -> SchreierGraph:
    if n < 0:
        raise ValueError(f"level must be >= 0, got {n}")
    labels = move_labels(k)
    cap = max_vertices() if cap is None else cap
    if k**n > cap:
        raise ResourceCapError(f"k^n = {k**n} vertices exceeds the cap of {cap}")
    return SchreierGraph(k, n, tuple(labels), _generator_permutations(k, n, labels))


def adjacency_from_edges(g: SchreierGraph) -> sp.csr_matrix:
    us, vs, _ = g.edge_arrays()
    off = us != vs
    rows = np.concatenate([us, vs[off]])
    cols = np.concatenate([vs, us[off]])
    data = np.ones(rows.size, dtype=np.int64)
    size = g.num_vertices
    return sp.csr_matrix((data, (rows, cols)), shape=(size, size))


def _recursive_generator(k: int, n: int, m: MoveLabel) -> sp.csr_matrix:
    g = sp.identity(1, dtype=np.int64, format="csr")
    for level in range(n):
        size = k**level
        eye = sp.identity(size, dtype=np.int64, format="csr")
        blocks: list[list[sp.csr_matrix | None]] = [[None] * k for _ in range(k)]
        for x in range(k):
            if x == m.i:
                blocks[x][m.j] = eye
            elif x == m.j:
                blocks[x][m.i] = eye
            else:
                blocks[x][x] = g
        g = sp.bmat(blocks, format="csr")
    return g


def adjacency_from_recursion(k: int, n: int) -> sp.csr_matrix:
    """Sum of the generator permutation matrices built block by block."""
    total = None
    for m in move_labels(k):
        gm = _recursive_generator(k, n, m)
        total = gm if total is None else total + gm
    return total.tocsr()


def adjacency(g: SchreierGraph, cross_check: bool = True) -> sp.csr_matrix:
    """Integer adjacency matrix (loops count once).

    Built from the edge multiset and, when ``cross_check`` is set, compared
    entrywise against the block recursion of the generator matrices.
    """
    from_edges = adjacency_from_edges(g)
    if cross_check:
        from_blocks = adjacency_from_recursion(g.k, g.n)
        if (from_edges != from_blocks).nnz:
            raise AssertionError(f"adjacency constructions disagree at k={g.k}, n={g.n}")
    return from_edges


def distances_from(g: SchreierGraph, u: Word) -> np.ndarray:
    return kernels.bfs_distances(g.neighbour_table(), g._check_word(u))


def bfs_distance(g: SchreierGraph, u: Word, v: Word) -> int:
    iu, iv = g._check_word(u), g._check_word(v)
    return int(kernels.bfs_distances(g.neighbour_table(), iu)[iv])


def eccentricities(g: SchreierGraph, cap: int | None = None) -> np.ndarray:
    cap = max_diameter_vertices() if cap is None else cap
    if g.num_vertices > cap:
        raise ResourceCapError(f"diameter of {g.num_vertices} vertices exceeds the cap of {cap}")
    ecc = kernels.eccentricities(g.neighbour_table())
    if (ecc < 0).any():
        raise ValueError("graph is not connected")
    return ecc


def diameter(g: SchreierGraph, cap: int | None = None) -> int:
    return int(eccentricities(g, cap).max())


def is_connected(g: SchreierGraph) -> bool:
    return bool((kernels.bfs_distances(g.neighbour_table(), 0) >= 0).all())


def emit_dot(g: SchreierGraph) -> str:
    lines = [f'graph "Gamma_{g.n}^({g.k})" {{']
    for idx in range(g.num_vertices):
        lines.append(f'  "{g.word(idx)}";')
    for u, v, m in g.edges():
        lines.append(f'  "{u}" -- "{v}" [label="{m.name(g.k)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(g: SchreierGraph) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "k": g.k,
        "n": g.n,
        "edges": [{"u": str(u), "v": str(v), "label": m.name(g.k)} for u, v, m in g.edges()],
    }


def graph_from_json(doc: dict | str) -> SchreierGraph:
    """Rebuild a graph from its JSON edge list, validating every edge."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    k, n = int(doc["k"]), int(doc["n"])
    labels = move_labels(k)
    pos = {m: t for t, m in enumerate(labels)}
    perms = np.full((len(labels), k**n), -1, dtype=np.int32)
    for e in doc["edges"]:
        u, v = Word.parse(e["u"], k).index(), Word.parse(e["v"], k).index()
        t = pos[MoveLabel.from_name(e["label"])]
        if perms[t, u] not in (-1, v) or perms[t, v] not in (-1, u):
            raise ValueError(f"conflicting edges for label {e['label']} at {e['u']}")
        perms[t, u], perms[t, v] = v, u
    if (perms < 0).any():
        raise ValueError("edge list does not cover every vertex and label")
    g = SchreierGraph(k, n, tuple(labels), perms)
    if not np.array_equal(perms, _generator_permutations(k, n, labels)):
        raise ValueError("edge list is not the Schreier graph of the move generators")
    return g
