"""Category-calibrated synthetic networks.

Background edges come from a Chung-Lu model whose expected degrees follow a
power law; cliques are then planted on uniformly chosen vertex subsets so
that categories differ in community structure.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .graph import Graph

DEFAULT_N = 1000
DEFAULT_SAMPLE_SCALE = 20.0
_BLOCK_PAIRS = 2_000_000


@dataclass(frozen=True)
class CliqueBoost:
    """Planted cliques per 1000 vertices, with sizes drawn from ``[min_size, max_size]``."""

    count: float
    min_size: int
    max_size: int

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("clique count must be non-negative")
        if not 3 <= self.min_size <= self.max_size:
            raise ValueError("planted clique sizes must satisfy 3 <= min_size <= max_size")


@dataclass(frozen=True)
class CategoryProfile:
    name: str
    alpha: float
    density: float
    clique_boost: CliqueBoost = field(default_factory=lambda: CliqueBoost(0, 3, 3))
    n: int = DEFAULT_N
    sample_scale: float = 1.0
    label: str = ""

    def __post_init__(self):
        if not self.alpha > 1:
            raise ValueError("alpha must exceed 1")
        if not 0 < self.density < 1:
            raise ValueError("density must lie in (0, 1)")
        if self.sample_scale <= 0:
            raise ValueError("sample_scale must be positive")
        if self.n < 2:
            raise ValueError("need at least two vertices")

    @property
    def target_density(self) -> float:
        """Density actually generated: ``density * sample_scale``."""
        return self.density * self.sample_scale

    def with_params(self, **changes) -> "CategoryProfile":
        return replace(self, **changes)


def power_law_weights(n: int, alpha: float, mean_degree: float, rng) -> np.ndarray:
    """Expected degrees ~ continuous power law, rescaled to ``mean_degree``.

    Weights are capped at ``sqrt(sum(w)) = sqrt(n * mean_degree)`` so that
    no Chung-Lu pair probability ``w_u w_v / sum(w)`` exceeds one; clipping
    those probabilities instead would shave the hubs and steepen the
    realised degree tail. The uncapped weights are rescaled until the mean
    is met. Raises ``ValueError`` when ``mean_degree > n - 1``.
    """
    if mean_degree > n - 1:
        raise ValueError(f"mean expected degree {mean_degree:.3g} exceeds n - 1 = {n - 1}")
    cap = min(n - 1.0, np.sqrt(n * mean_degree))
    raw = (1.0 - rng.random(n)) ** (-1.0 / (alpha - 1.0))
    w = raw * (mean_degree / raw.mean())
    for _ in range(100):
        w = np.minimum(w, cap)
        mean = w.mean()
        if abs(mean - mean_degree) <= 1e-9 * mean_degree:
            return w
        free = w < cap
        if not free.any():
            break
        # rescale only the uncapped weights so the capped ones stay put
        need = mean_degree * n - cap * (~free).sum()
        w[free] *= need / w[free].sum()
    if abs(w.mean() - mean_degree) > 1e-6 * mean_degree:
        raise ValueError("target density infeasible under the degree cap")
    return w


def chung_lu_edges(w: np.ndarray, rng) -> np.ndarray:
    """Independent edges with ``P(u ~ v) = min(1, w_u w_v / sum(w))``.

    Pairs are visited in row blocks, so time is quadratic in ``n`` but memory
    stays bounded.
    """
    n = len(w)
    total = w.sum()
    out = []
    rows_per_block = max(1, _BLOCK_PAIRS // max(n, 1))
    for start in range(0, n - 1, rows_per_block):
        stop = min(start + rows_per_block, n - 1)
        rows = np.arange(start, stop)
        p = np.minimum(1.0, np.outer(w[rows], w) / total)
        hit = rng.random(p.shape) < p
        hit &= np.arange(n)[None, :] > rows[:, None]
        r, c = np.nonzero(hit)
        out.append(np.column_stack([rows[r], c]))
    if not out:
        return np.empty((0, 2), dtype=np.int64)
    return np.concatenate(out)


def planted_clique_edges(n: int, boost: CliqueBoost, rng) -> np.ndarray:
    count = int(round(boost.count * n / 1000))
    hi = min(boost.max_size, n)
    out = []
    for _ in range(count):
        size = int(rng.integers(min(boost.min_size, hi), hi + 1))
        verts = rng.choice(n, size=size, replace=False)
        iu, iv = np.triu_indices(size, 1)
        out.append(np.column_stack([verts[iu], verts[iv]]))
    if not out:
        return np.empty((0, 2), dtype=np.int64)
    return np.concatenate(out)


def generate(profile: CategoryProfile, rng_seed=None) -> Graph:
    rng = np.random.default_rng(rng_seed)
    n = profile.n
    w = power_law_weights(n, profile.alpha, profile.target_density * (n - 1), rng)
    background = chung_lu_edges(w, rng)
    planted = planted_clique_edges(n, profile.clique_boost, rng)
    return Graph(n, np.concatenate([background, planted]))


# Degree exponents and edge densities of the five watch-list categories;
# clique planting is synthetic.
_CATEGORY_TABLE = [
    # key, label, alpha, density
    ("SI", "Suspicious Individuals", 1.838563, 0.0000180),
    ("CI", "Convicted Individuals", 1.733839, 0.0000427),
    ("LL", "Lawyers/Legal Professionals", 2.977307, 0.0006220),
    ("PEPS", "Politically Exposed Persons", 3.107326, 0.0001533),
    ("ST", "Suspected Terrorists", 1.770715, 0.0002068),
]

# Sparser categories get more planted cliques; size ranges never overlap.
_CLIQUE_BOOSTS = {
    "SI": CliqueBoost(200, 3, 3),
    "CI": CliqueBoost(100, 4, 5),
    "PEPS": CliqueBoost(50, 6, 7),
    "ST": CliqueBoost(25, 8, 10),
    "LL": CliqueBoost(12, 11, 14),
}


def builtin_profiles(sample_scale: float = DEFAULT_SAMPLE_SCALE, n: int = DEFAULT_N) -> list[CategoryProfile]:
    return [
        CategoryProfile(key, alpha, dens, _CLIQUE_BOOSTS.get(key, CliqueBoost(0, 3, 3)), n, sample_scale, label)
        for key, label, alpha, dens in _CATEGORY_TABLE
    ]


def get_profile(name: str, **changes) -> CategoryProfile:
    for p in builtin_profiles():
        if p.name.lower() == name.lower():
            return p.with_params(**changes) if changes else p
    raise ValueError(f"unknown profile {name!r}; choose from {[k for k, *_ in _CATEGORY_TABLE]}")
