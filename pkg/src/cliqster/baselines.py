"""Spectral baseline: singular values of the adjacency matrix."""
from __future__ import annotations

import numpy as np

from .graph import Graph

DENSE_CAP = 4096
ZERO_TOL = 1e-9


def adjacency_matrix(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    if g.m:
        u, v = g.edges[:, 0], g.edges[:, 1]
        a[u, v] = 1.0
        a[v, u] = 1.0
    return a


def svd_spectrum(g: Graph, max_n: int = DENSE_CAP) -> np.ndarray:
    """Singular values of the dense adjacency matrix, non-increasing.

    The adjacency is symmetric, so these are the absolute eigenvalues.
    Values under ``1e-9 * max(1, largest)`` are set to zero.
    """
    if g.n < 1:
        raise ValueError("spectrum needs at least one vertex")
    if g.n > max_n:
        raise ValueError(f"{g.n} vertices exceed the dense decomposition cap of {max_n}")
    s = np.abs(np.linalg.eigvalsh(adjacency_matrix(g)))
    s = np.sort(s)[::-1]
    s[s < ZERO_TOL * max(1.0, s[0])] = 0.0
    return s


def svd_feature_vector(g: Graph, top_k: int, max_n: int = DENSE_CAP) -> np.ndarray:
    if top_k < 1:
        raise ValueError("top_k must be at least 1")
    s = svd_spectrum(g, max_n)[:top_k]
    out = np.zeros(top_k)
    out[:len(s)] = s
    return out


def effective_rank(values, tol: float = ZERO_TOL) -> int:
    """Number of entries whose magnitude exceeds ``tol * max(1, max|v|)``."""
    v = np.abs(np.asarray(values, dtype=float))
    if v.size == 0:
        return 0
    return int(np.sum(v > tol * max(1.0, v.max())))
