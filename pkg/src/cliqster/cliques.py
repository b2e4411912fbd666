"""Maximal clique enumeration."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graph import Graph, degeneracy_ordering

BRUTE_FORCE_MAX_N = 15


@dataclass(frozen=True)
class Clique:
    vertices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def n_pairs(self) -> int:
        s = len(self.vertices)
        return s * (s - 1) // 2

    def pairs(self):
        return combinations(self.vertices, 2)

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __contains__(self, v):
        return v in self.vertices


def clique_order_key(c: Clique):
    return (-c.size, c.vertices)


def _expand(R, P, X, nbrs, out):
    # Bron-Kerbosch with Tomita pivoting; R is a list used as a stack.
    if not P:
        if not X:
            out.append(tuple(R))
        return
    best, best_count = -1, -1
    for u in P | X:
        c = len(P & nbrs[u])
        if c > best_count or (c == best_count and u < best):
            best, best_count = u, c
    for v in sorted(P - nbrs[best]):
        Nv = nbrs[v]
        R.append(v)
        _expand(R, P & Nv, X & Nv, nbrs, out)
        R.pop()
        P.discard(v)
        X.add(v)


def enumerate_maximal_cliques(g: Graph) -> list[Clique]:
    """All maximal cliques with at least two vertices.

    The outer loop walks a degeneracy ordering, so each branch starts with a
    candidate set of at most ``f`` vertices. Result is sorted by size
    (largest first) and then lexicographically.
    """
    nbrs = g.neighbor_sets
    order = degeneracy_ordering(g).ordering
    position = [0] * g.n
    for i, v in enumerate(order):
        position[v] = i
    found: list[tuple[int, ...]] = []
    for v in order:
        Nv = nbrs[v]
        if not Nv:
            continue
        pv = position[v]
        P = {w for w in Nv if position[w] > pv}
        X = {w for w in Nv if position[w] < pv}
        _expand([v], P, X, nbrs, found)
    cliques = [Clique(c) for c in found]
    cliques.sort(key=clique_order_key)
    return cliques


def brute_force_maximal_cliques(g: Graph) -> list[Clique]:
    """Reference enumeration over every vertex subset (test oracle, ``n <= 15``)."""
    n = g.n
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    nbr_mask = [0] * n
    for u, v in g.edges.tolist():
        nbr_mask[u] |= 1 << v
        nbr_mask[v] |= 1 << u
    is_clique = [False] * (1 << n)
    is_clique[0] = True
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << low)
        is_clique[mask] = is_clique[rest] and (rest & ~nbr_mask[low]) == 0
    out = []
    for mask in range(1, 1 << n):
        if not is_clique[mask] or mask & (mask - 1) == 0:
            continue
        if any(not (mask >> v) & 1 and is_clique[mask | (1 << v)] for v in range(n)):
            continue
        out.append(Clique(tuple(v for v in range(n) if (mask >> v) & 1)))
    out.sort(key=clique_order_key)
    return out
