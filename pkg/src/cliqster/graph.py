"""Undirected simple graphs: ingestion, induced sampling and basic structure."""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

EMPTY_SAMPLE_RETRIES = 25


class EdgeListError(ValueError):
    """Raised for malformed edge-list input; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class SparseGraphError(RuntimeError):
    """Raised when repeated sampling keeps producing edgeless subgraphs."""


class Graph:
    """Immutable undirected simple graph on vertices ``0..n-1``.

    Parameters
    ----------
    n : int
        Vertex count.
    edges : array-like of shape (m, 2)
        Vertex pairs. Order within a pair is irrelevant; duplicates are
        collapsed. Self-loops raise ``ValueError``.
    labels : sequence of str, optional
        Original token of each vertex, used when echoing the graph back.
    """

    def __init__(self, n: int, edges=(), labels: Sequence[str] | None = None):
        n = int(n)
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError(f"edge endpoint outside 0..{n - 1}")
        if np.any(arr[:, 0] == arr[:, 1]):
            raise ValueError("self-loops are not allowed")
        arr = np.sort(arr, axis=1)
        if len(arr):
            arr = np.unique(arr, axis=0)
        arr.setflags(write=False)
        if labels is not None:
            labels = tuple(str(t) for t in labels)
            if len(labels) != n:
                raise ValueError("labels must have one entry per vertex")
        self._n = n
        self._edges = arr
        self._labels = labels

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> np.ndarray:
        """Read-only ``(m, 2)`` array of pairs ``u < v`` in lexicographic order."""
        return self._edges

    @cached_property
    def labels(self) -> tuple[str, ...]:
        if self._labels is None:
            return tuple(str(i) for i in range(self._n))
        return self._labels

    def label(self, v: int) -> str:
        return self.labels[v]

    def index_of(self, token) -> int:
        """Vertex id of an original token."""
        try:
            return self._token_index[str(token)]
        except KeyError:
            raise KeyError(f"unknown vertex token {token!r}") from None

    @cached_property
    def _token_index(self) -> dict[str, int]:
        return {t: i for i, t in enumerate(self.labels)}

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.bincount(self._edges.ravel(), minlength=self._n)
        deg.setflags(write=False)
        return deg

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Sorted neighbour tuple per vertex."""
        if self.m == 0:
            return tuple(() for _ in range(self._n))
        both = np.concatenate([self._edges, self._edges[:, ::-1]])
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        bounds = np.searchsorted(both[:, 0], np.arange(self._n + 1))
        nbrs = both[:, 1].tolist()
        return tuple(tuple(nbrs[bounds[v]:bounds[v + 1]]) for v in range(self._n))

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    @cached_property
    def _edge_keys(self) -> np.ndarray:
        return self._edges[:, 0] * max(self._n, 1) + self._edges[:, 1]

    def edge_index(self, u, v):
        """Row index in :attr:`edges` of each pair; -1 where the pair is not an edge."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        keys = lo * max(self._n, 1) + hi
        if self.m == 0:
            return np.full(keys.shape, -1, dtype=np.int64)
        pos = np.minimum(np.searchsorted(self._edge_keys, keys), self.m - 1)
        return np.where(self._edge_keys[pos] == keys, pos, -1)

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and v in self.neighbor_sets[u]

    def to_edge_list(self) -> str:
        """Serialize with original tokens, one ``u v`` line per edge."""
        labels = self.labels
        return "".join(f"{labels[u]} {labels[v]}\n" for u, v in self._edges.tolist())

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        perm = np.asarray(perm, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self._n)):
            raise ValueError("perm must be a permutation of 0..n-1")
        labels = [None] * self._n
        for v, p in enumerate(perm.tolist()):
            labels[p] = self.labels[v]
        return Graph(self._n, perm[self._edges], labels)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._edges, other._edges)

    def __hash__(self):
        return hash((self._n, self._edges.tobytes()))

    def __repr__(self):
        return f"Graph(n={self._n}, m={self.m})"


@dataclass(frozen=True)
class DegeneracyResult:
    ordering: tuple[int, ...]
    degeneracy: int


def from_edge_list(text: str | Iterable[str], n_vertices: int | None = None) -> Graph:
    """Parse a whitespace-separated edge list into a :class:`Graph`.

    Tokens are interned to contiguous ids in first-appearance order. Lines
    starting with ``#`` and blank lines are skipped. When ``n_vertices`` is
    given, isolated vertices are appended (as fresh tokens) up to that count.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    index: dict[str, int] = {}
    pairs = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(lineno, f"expected two vertex tokens, got {len(parts)}")
        a, b = parts
        if a == b:
            raise EdgeListError(lineno, f"self-loop on {a!r}")
        pairs.append((index.setdefault(a, len(index)), index.setdefault(b, len(index))))
    labels = list(index)
    if n_vertices is not None:
        if n_vertices < len(labels):
            raise ValueError(f"vertex count {n_vertices} below the {len(labels)} vertices seen")
        taken = set(labels)
        extra = (str(i) for i in range(len(labels) + n_vertices + 1) if str(i) not in taken)
        while len(labels) < n_vertices:
            labels.append(next(extra))
    return Graph(len(labels), pairs, labels)


def read_edge_list(path, n_vertices: int | None = None) -> Graph:
    with open(path) as fh:
        return from_edge_list(fh, n_vertices=n_vertices)


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    """Subgraph on ``vertices``, relabelled ``0..k-1`` in increasing id order."""
    verts = np.unique(np.fromiter(vertices, dtype=np.int64))
    if verts.size and (verts[0] < 0 or verts[-1] >= g.n):
        raise ValueError(f"vertex outside 0..{g.n - 1}")
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[verts] = np.arange(len(verts))
    mapped = new_id[g.edges]
    keep = (mapped >= 0).all(axis=1)
    src = g.labels
    return Graph(len(verts), mapped[keep], [src[v] for v in verts.tolist()])


def sample_induced(g: Graph, size: int, rng_seed=None, max_retries: int = EMPTY_SAMPLE_RETRIES) -> Graph:
    """Induced subgraph on ``size`` vertices drawn uniformly without replacement.

    Edgeless draws are redrawn, up to ``max_retries`` extra attempts.
    """
    if size > g.n:
        raise ValueError(f"sample size {size} exceeds vertex count {g.n}")
    if size < 0:
        raise ValueError("sample size must be non-negative")
    rng = np.random.default_rng(rng_seed)
    for _ in range(max_retries + 1):
        verts = rng.choice(g.n, size=size, replace=False)
        sub = induced_subgraph(g, verts)
        if sub.m > 0:
            return sub
    raise SparseGraphError(
        f"{max_retries + 1} samples of {size} vertices were all edgeless; source graph too sparse"
    )


def connected_components(g: Graph) -> list[list[int]]:
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components as _cc

    if g.n == 0:
        return []
    e = g.edges
    adj = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(g.n, g.n))
    _, lab = _cc(adj, directed=False)
    # renumber components by their smallest vertex
    comps: dict[int, list[int]] = {}
    for v, c in enumerate(lab.tolist()):
        comps.setdefault(c, []).append(v)
    return sorted(comps.values(), key=lambda c: c[0])


def density(g: Graph) -> float:
    if g.n < 2:
        raise ValueError("density needs at least two vertices")
    return g.m / (g.n * (g.n - 1) / 2)


def degeneracy_ordering(g: Graph) -> DegeneracyResult:
    """Repeatedly strip a minimum-degree vertex (lowest id on ties).

    Each degree bucket is a min-heap with lazy deletion, so the lowest id
    in the current minimum bucket is always on top.
    """
    n = g.n
    adj = g.adjacency
    deg = [len(a) for a in adj]
    buckets: list[list[int]] = [[] for _ in range(max(deg, default=0) + 1)]
    for v, d in enumerate(deg):
        buckets[d].append(v)  # ascending ids: already a heap
    removed = [False] * n
    order = []
    f = 0
    d = 0
    for _ in range(n):
        d = max(d - 1, 0)
        while True:
            b = buckets[d]
            while b and (removed[b[0]] or deg[b[0]] != d):
                heapq.heappop(b)
            if b:
                break
            d += 1
        v = heapq.heappop(buckets[d])
        removed[v] = True
        order.append(v)
        f = max(f, d)
        for w in adj[v]:
            if not removed[w]:
                deg[w] -= 1
                heapq.heappush(buckets[deg[w]], w)
    return DegeneracyResult(tuple(order), f)
