"""Clique-basis decomposition of an unweighted network.

A graph is modelled as ``Y ~ Bernoulli(Z)`` with ``Z = sum_k mu_k B_k``,
where ``B_k`` is the lower-triangular indicator of the vertex pairs of the
k-th maximal clique. The coefficients minimise the squared reconstruction
error over all vertex pairs, which reduces to the K x K normal equations
``A mu = d``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.linalg.lapack import dpocon
from scipy.sparse.csgraph import connected_components

from .cliques import Clique, enumerate_maximal_cliques
from .graph import Graph

RIDGE_SCALE = 1e-9
RCOND_SINGULAR = 1e-12
RESIDUAL_TOL = 1e-8


class DecompositionError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class CliqueBasis:
    """Maximal cliques of a graph plus the edge/clique incidence.

    ``incidence`` is an ``(m, K)`` CSR matrix with a one at ``(e, k)`` when
    edge ``e`` (a row of ``graph.edges``) lies inside clique ``k``. Its
    rows are the per-pair vectors ``b^{rs}`` restricted to observed edges;
    every other pair has an all-zero vector.
    """

    graph: Graph
    cliques: tuple[Clique, ...]
    incidence: sp.csr_matrix = field(repr=False)

    @property
    def K(self) -> int:
        return len(self.cliques)

    @property
    def sizes(self) -> np.ndarray:
        return np.array([c.size for c in self.cliques], dtype=np.int64)

    def membership(self, r: int, s: int) -> tuple[int, ...]:
        """Sorted indices of the cliques containing pair ``(r, s)``."""
        e = int(self.graph.edge_index(r, s))
        if e < 0:
            return ()
        row = self.incidence.indices[self.incidence.indptr[e]:self.incidence.indptr[e + 1]]
        return tuple(sorted(row.tolist()))

    def edge_membership(self) -> list[tuple[int, ...]]:
        ptr, idx = self.incidence.indptr, self.incidence.indices
        return [tuple(sorted(idx[ptr[e]:ptr[e + 1]].tolist())) for e in range(self.graph.m)]


@dataclass(frozen=True, eq=False)
class GramSystem:
    """Normal equations: ``A`` (sparse, symmetric PSD) and right-hand side ``d``."""

    A: sp.csr_matrix
    d: np.ndarray
    basis: CliqueBasis = field(repr=False)

    @property
    def K(self) -> int:
        return len(self.d)

    def dense(self) -> np.ndarray:
        return self.A.toarray()


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    mu: np.ndarray
    basis: CliqueBasis = field(repr=False)
    ridge: float = 0.0
    system: GramSystem | None = field(default=None, repr=False)

    @property
    def cliques(self) -> tuple[Clique, ...]:
        return self.basis.cliques

    def reconstruction(self, mu=None) -> np.ndarray:
        """``Z`` on each observed edge, in ``graph.edges`` order."""
        mu = self.mu if mu is None else np.asarray(mu, dtype=float)
        return self.basis.incidence @ mu

    def objective(self, mu=None) -> float:
        """Sum over all pairs ``r > s`` of ``(mu . b^{rs} - Y(r, s))**2``.

        Non-edges contribute nothing: every pair inside a clique is an edge,
        so ``b^{rs} = 0`` wherever ``Y(r, s) = 0``.
        """
        z = self.reconstruction(mu)
        return float(np.sum((z - 1.0) ** 2))

    def residual(self) -> float:
        system = self.system if self.system is not None else assemble_system(self.basis)
        r = system.A @ self.mu + self.ridge * self.mu - system.d
        return float(np.max(np.abs(r))) if len(r) else 0.0


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """Sparse lower triangle of ``Z``.

    Only pairs covered by at least one clique are stored; ``pairs`` holds
    them as ``(r, s)`` with ``r > s``.
    """

    n: int
    pairs: np.ndarray
    values: np.ndarray
    labels: tuple[str, ...] | None = field(default=None, repr=False)

    def __getitem__(self, key) -> float:
        r, s = key
        r, s = max(r, s), min(r, s)
        return self._lookup.get((int(r), int(s)), 0.0)

    def __len__(self):
        return len(self.values)

    @property
    def _lookup(self) -> dict:
        cache = self.__dict__.get("_cache")
        if cache is None:
            cache = {(r, s): v for (r, s), v in zip(self.pairs.tolist(), self.values.tolist())}
            object.__setattr__(self, "_cache", cache)
        return cache

    def items(self):
        return self._lookup.items()

    def clamped(self) -> np.ndarray:
        return np.clip(self.values, 0.0, 1.0)


def build_basis(g: Graph) -> CliqueBasis:
    if g.m == 0:
        raise DecompositionError("graph has no edges; no clique basis exists")
    cliques = enumerate_maximal_cliques(g)
    total = sum(c.n_pairs for c in cliques)
    us = np.empty(total, dtype=np.int64)
    vs = np.empty(total, dtype=np.int64)
    ks = np.empty(total, dtype=np.int64)
    pos = 0
    for k, c in enumerate(cliques):
        if c.size == 2:
            us[pos], vs[pos] = c.vertices
            ks[pos] = k
            pos += 1
            continue
        verts = np.asarray(c.vertices, dtype=np.int64)
        iu, iv = np.triu_indices(c.size, 1)
        step = len(iu)
        us[pos:pos + step] = verts[iu]
        vs[pos:pos + step] = verts[iv]
        ks[pos:pos + step] = k
        pos += step
    rows = g.edge_index(us, vs)
    if np.any(rows < 0):
        raise DecompositionError("clique contains a non-edge")
    inc = sp.csr_matrix((np.ones(total), (rows, ks)), shape=(g.m, len(cliques)))
    inc.sort_indices()
    return CliqueBasis(g, tuple(cliques), inc)


def assemble_system(basis: CliqueBasis) -> GramSystem:
    """``A = sum b b^T`` and ``d = sum Y b`` over observed edges."""
    M = basis.incidence
    A = (M.T @ M).tocsr()
    A.sort_indices()
    d = np.asarray(M.sum(axis=0)).ravel()
    return GramSystem(A, d, basis)


def _block_solves(A: sp.csr_matrix, d: np.ndarray, ridge: float):
    """Solve ``(A + ridge I) mu = d`` one connected block of ``A`` at a time.

    Returns ``(mu, singular)`` where ``singular`` flags a block whose
    Cholesky factor failed or reported a vanishing reciprocal condition.
    """
    K = len(d)
    mu = np.full(K, np.nan)
    _, lab = connected_components(A, directed=False)
    sizes = np.bincount(lab)
    diag = A.diagonal()
    lone = sizes[lab] == 1
    mu[lone] = d[lone] / (diag[lone] + ridge)
    singular = False
    multi = np.flatnonzero(~lone)
    if len(multi):
        order = multi[np.argsort(lab[multi], kind="stable")]
        splits = np.flatnonzero(np.diff(lab[order])) + 1
        for idx in np.split(order, splits):
            block = A[idx][:, idx].toarray()
            if ridge:
                block[np.diag_indices_from(block)] += ridge
            try:
                fac = cho_factor(block)
            except LinAlgError:
                singular = True
                continue
            rcond, info = dpocon(fac[0], np.abs(block).sum(axis=0).max())
            if info != 0 or rcond < RCOND_SINGULAR:
                singular = True
            mu[idx] = cho_solve(fac, d[idx])
    return mu, singular


def solve_coefficients(system: GramSystem) -> CoefficientVector:
    """Unconstrained least-squares coefficients ``mu = A^{-1} d``.

    ``A`` is block diagonal over groups of cliques that share edges, so each
    block is factorised on its own. If any block is numerically singular the
    whole system is re-solved with ``ridge = 1e-9 * trace(A) / K`` on the
    diagonal.
    """
    A, d = system.A, system.d
    K = len(d)
    mu, singular = _block_solves(A, d, 0.0)
    ridge = 0.0
    if singular:
        ridge = RIDGE_SCALE * A.diagonal().sum() / K
        mu, singular = _block_solves(A, d, ridge)
        if singular and not np.all(np.isfinite(mu)):
            raise DecompositionError("Cholesky failed even after ridge regularisation")
    resid = A @ mu + ridge * mu - d
    tol = RESIDUAL_TOL * max(1.0, float(np.max(np.abs(d))))
    if not np.all(np.isfinite(mu)) or np.max(np.abs(resid)) > tol:
        raise DecompositionError(f"normal-equation residual {np.max(np.abs(resid)):.3g} above {tol:.3g}")
    return CoefficientVector(mu, system.basis, ridge, system)


def decompose(g: Graph) -> CoefficientVector:
    """Basis selection, Gram assembly and solve in one call."""
    return solve_coefficients(assemble_system(build_basis(g)))


def reconstruct_Z(coeffs: CoefficientVector) -> GeneratorMatrix:
    g = coeffs.basis.graph
    pairs = np.ascontiguousarray(g.edges[:, ::-1])
    return GeneratorMatrix(g.n, pairs, coeffs.reconstruction(), g.labels)


def sample_network(z: GeneratorMatrix, rng_seed=None) -> Graph:
    """Draw ``Y(r, s) ~ Bernoulli(clip(Z(r, s), 0, 1))`` over covered pairs."""
    rng = np.random.default_rng(rng_seed)
    keep = rng.random(len(z.values)) < z.clamped()
    return Graph(z.n, z.pairs[keep], z.labels)


def feature_vector(coeffs: CoefficientVector, top_k: int) -> np.ndarray:
    """Largest ``top_k`` coefficients, descending, zero-padded.

    Equal values keep basis order, i.e. larger clique first and then
    lexicographic clique order.
    """
    if top_k < 1:
        raise ValueError("top_k must be at least 1")
    mu = coeffs.mu
    order = np.argsort(-mu, kind="stable")[:top_k]
    out = np.zeros(top_k)
    out[:len(order)] = mu[order]
    return out
