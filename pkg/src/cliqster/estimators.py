"""Scikit-learn style transformers mapping graphs to fixed-length feature rows.

Each decomposer takes a sequence of :class:`~cliqster.graph.Graph` objects as
``X`` and returns an ``(n_graphs, top_k)`` array, so it can sit at the head of
a :class:`sklearn.pipeline.Pipeline`::

    >>> from sklearn.pipeline import make_pipeline
    >>> from sklearn.cluster import KMeans
    >>> pipe = make_pipeline(CliqsterDecomposer(top_k=20), KMeans(2, n_init=8))
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .baselines import DENSE_CAP, svd_feature_vector
from .core import CoefficientVector, decompose, feature_vector
from .graph import Graph


def check_graphs(X) -> list[Graph]:
    """Validate ``X`` as a non-empty sequence of graphs (a lone graph is wrapped)."""
    if isinstance(X, Graph):
        return [X]
    try:
        graphs = list(X)
    except TypeError:
        raise TypeError(f"expected a sequence of Graph objects, got {type(X).__name__}") from None
    if not graphs:
        raise ValueError("no graphs given")
    for i, g in enumerate(graphs):
        if not isinstance(g, Graph):
            raise TypeError(f"element {i} is {type(g).__name__}, not Graph")
    return graphs


def _check_top_k(top_k):
    if not isinstance(top_k, (int, np.integer)) or top_k < 1:
        raise ValueError(f"top_k must be a positive integer, got {top_k!r}")


class GraphDecomposer(TransformerMixin, BaseEstimator):
    """Base class: subclasses implement :meth:`featurize` for one graph.

    Decomposers are stateless; :meth:`fit` only validates parameters.
    """

    name = "base"

    def __init__(self, top_k: int = 20):
        self.top_k = top_k

    def featurize(self, g: Graph) -> np.ndarray:
        raise NotImplementedError

    def fit(self, X, y=None):
        _check_top_k(self.top_k)
        check_graphs(X)
        self.n_features_out_ = int(self.top_k)
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "n_features_out_")
        graphs = check_graphs(X)
        return np.vstack([self.featurize(g) for g in graphs])

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "n_features_out_")
        return np.array([f"{self.name}{i}" for i in range(self.n_features_out_)], dtype=object)

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.requires_fit = False
        tags.input_tags.two_d_array = False
        return tags


class CliqsterDecomposer(GraphDecomposer):
    """Top-``k`` maximal-clique coefficients of each graph."""

    name = "cliqster"

    def decompose(self, g: Graph) -> CoefficientVector:
        return decompose(g)

    def featurize(self, g: Graph) -> np.ndarray:
        return feature_vector(decompose(g), self.top_k)


class SVDDecomposer(GraphDecomposer):
    """Top-``k`` singular values of each graph's adjacency matrix."""

    name = "svd"

    def __init__(self, top_k: int = 20, max_n: int = DENSE_CAP):
        super().__init__(top_k=top_k)
        self.max_n = max_n

    def featurize(self, g: Graph) -> np.ndarray:
        return svd_feature_vector(g, self.top_k, self.max_n)


DECOMPOSERS: dict[str, type[GraphDecomposer]] = {
    CliqsterDecomposer.name: CliqsterDecomposer,
    SVDDecomposer.name: SVDDecomposer,
}


def register_decomposer(cls: type[GraphDecomposer]) -> type[GraphDecomposer]:
    """Class decorator adding a decomposer to the name registry."""
    DECOMPOSERS[cls.name] = cls
    return cls


def get_decomposer(name: str | GraphDecomposer, **params) -> GraphDecomposer:
    if isinstance(name, GraphDecomposer):
        return name.set_params(**params) if params else name
    try:
        cls = DECOMPOSERS[name]
    except KeyError:
        raise ValueError(f"unknown method {name!r}; choose from {sorted(DECOMPOSERS)}") from None
    return cls(**params)
