"""Sampling protocol, clustering error and k-NN classification experiments."""
from __future__ import annotations

import csv
import io
import os
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from joblib import Parallel, delayed
from scipy.optimize import linear_sum_assignment
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.cluster import KMeans
from sklearn.utils.validation import check_array, check_is_fitted

from .estimators import GraphDecomposer, get_decomposer
from .graph import Graph, sample_induced
from .synth import CategoryProfile, generate


def _seed_sequence(seed) -> np.random.SeedSequence:
    return seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)


def derive_seeds(seed, count: int) -> list[int]:
    """``count`` independent integer seeds split from one master seed."""
    return [int(s.generate_state(1)[0]) for s in _seed_sequence(seed).spawn(count)]


def _n_jobs(jobs):
    if jobs is None:
        return os.cpu_count() or 1
    return jobs


def l2_normalize(X: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    return np.divide(X, norms, out=np.zeros_like(X, dtype=float), where=norms > 0)


@dataclass
class FeatureMatrix:
    X: np.ndarray
    labels: np.ndarray
    method: str = ""

    def __post_init__(self):
        self.X = np.atleast_2d(np.asarray(self.X, dtype=float))
        self.labels = np.asarray(self.labels, dtype=object)
        if len(self.X) != len(self.labels):
            raise ValueError("one label per feature row required")

    def __len__(self):
        return len(self.X)

    def subset(self, idx) -> "FeatureMatrix":
        return FeatureMatrix(self.X[idx], self.labels[idx], self.method)

    @classmethod
    def concat(cls, parts: Sequence["FeatureMatrix"]) -> "FeatureMatrix":
        return cls(np.vstack([p.X for p in parts]), np.concatenate([p.labels for p in parts]),
                   parts[0].method if parts else "")


@dataclass
class ProtocolResult:
    features: FeatureMatrix
    mean: np.ndarray
    lower: np.ndarray
    upper: np.ndarray


def _featurize(decomposer: GraphDecomposer, g: Graph) -> np.ndarray:
    return decomposer.featurize(g)


def sample_protocol(g: Graph, sample_size: int, repeats: int, method="cliqster", top_k: int = 20,
                    rng_seed=None, label="", jobs=1) -> ProtocolResult:
    """Decompose ``repeats`` random induced samples; mean and mean +/- 2 sigma per position."""
    dec = get_decomposer(method, top_k=top_k)
    seeds = derive_seeds(rng_seed, repeats)
    samples = [sample_induced(g, sample_size, s) for s in seeds]
    rows = Parallel(n_jobs=_n_jobs(jobs))(delayed(_featurize)(dec, h) for h in samples)
    X = np.vstack(rows)
    mean, sd = X.mean(axis=0), X.std(axis=0)
    fm = FeatureMatrix(X, [label] * repeats, dec.name)
    return ProtocolResult(fm, mean, mean - 2 * sd, mean + 2 * sd)


def kmeans_cluster(features, k: int, restarts: int = 8, rng_seed=None) -> np.ndarray:
    """Lloyd's k-means with k-means++ seeding, best of ``restarts`` by inertia."""
    X = features.X if isinstance(features, FeatureMatrix) else check_array(features)
    if k < 1 or k > len(X):
        raise ValueError(f"k={k} needs 1 <= k <= {len(X)} rows")
    if len(np.unique(X, axis=0)) < k:
        raise ValueError(f"fewer than k={k} distinct feature rows")
    km = KMeans(n_clusters=k, init="k-means++", n_init=restarts, random_state=rng_seed)
    return km.fit_predict(X)


def clustering_error(assignment, labels) -> float:
    """Misclassification rate under the best one-to-one cluster/label matching."""
    assignment = np.asarray(assignment)
    labels = np.asarray(labels, dtype=object)
    if len(assignment) != len(labels):
        raise ValueError("assignment and labels differ in length")
    if len(labels) == 0:
        raise ValueError("nothing to score")
    _, a = np.unique(assignment, return_inverse=True)
    _, b = np.unique(labels.astype(str), return_inverse=True)
    table = np.zeros((a.max() + 1, b.max() + 1))
    np.add.at(table, (a, b), 1)
    r, c = linear_sum_assignment(table, maximize=True)
    return 1.0 - table[r, c].sum() / len(labels)


class NearestNeighborVote(ClassifierMixin, BaseEstimator):
    """Majority vote among the ``k`` nearest training rows (Euclidean).

    Equal distances are resolved in favour of the earlier training row, and
    tied votes in favour of the label whose nearest member is closest.
    """

    def __init__(self, k: int = 3):
        self.k = k

    def fit(self, X, y):
        X = check_array(X)
        y = np.asarray(y, dtype=object)
        if len(X) != len(y):
            raise ValueError("X and y differ in length")
        if self.k < 1 or self.k > len(X):
            raise ValueError(f"k={self.k} needs 1 <= k <= {len(X)} training rows")
        self.X_, self.y_ = X, y
        self.classes_ = np.array(sorted(set(y.tolist()), key=str), dtype=object)
        return self

    def predict(self, X):
        check_is_fitted(self, "X_")
        X = check_array(X)
        d2 = ((X[:, None, :] - self.X_[None, :, :]) ** 2).sum(axis=2)
        order = np.argsort(d2, axis=1, kind="stable")[:, :self.k]
        out = np.empty(len(X), dtype=object)
        for i, nn in enumerate(order):
            votes = Counter()
            first_seen = {}
            for rank, j in enumerate(nn):
                lab = self.y_[j]
                votes[lab] += 1
                first_seen.setdefault(lab, rank)
            top = max(votes.values())
            out[i] = min((lab for lab, v in votes.items() if v == top), key=first_seen.__getitem__)
        return out


def knn_classify(train: FeatureMatrix, test: FeatureMatrix, k: int = 3) -> float:
    """Fraction of test rows whose k-NN vote matches their label."""
    if len(train) == 0:
        raise ValueError("empty training set")
    if k > len(train):
        raise ValueError(f"k={k} exceeds training size {len(train)}")
    pred = NearestNeighborVote(k).fit(train.X, train.labels).predict(test.X)
    return float(np.mean(pred == test.labels))


def resolve_categories(categories, rng_seed=None) -> list[tuple[str, Graph]]:
    """Turn profiles, graphs or ``(label, graph)`` pairs into labelled graphs.

    Profiles are generated with seeds split from ``rng_seed``.
    """
    seeds = derive_seeds(rng_seed, len(categories))
    out = []
    for i, (cat, seed) in enumerate(zip(categories, seeds)):
        if isinstance(cat, CategoryProfile):
            out.append((cat.name, generate(cat, seed)))
        elif isinstance(cat, Graph):
            out.append((f"graph{i}", cat))
        else:
            label, g = cat
            if isinstance(g, CategoryProfile):
                g = generate(g, seed)
            out.append((str(label), g))
    seen = Counter()
    for i, (label, g) in enumerate(out):
        seen[label] += 1
        if seen[label] > 1:
            out[i] = (f"{label}#{seen[label]}", g)
    return out


@dataclass
class ExperimentReport:
    """Per-repeat clustering errors, per-size k-NN accuracies and timings."""

    cluster_rows: list[dict] = field(default_factory=list)
    knn_rows: list[dict] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def clustering_summary(self) -> dict[str, tuple[float, float]]:
        out = {}
        for method in dict.fromkeys(r["method"] for r in self.cluster_rows):
            errs = np.array([r["error"] for r in self.cluster_rows if r["method"] == method])
            out[method] = (float(errs.mean()), float(errs.std()))
        return out

    def accuracy_curve(self) -> dict[int, float]:
        out = {}
        for size in dict.fromkeys(r["train_size"] for r in self.knn_rows):
            acc = [r["accuracy"] for r in self.knn_rows if r["train_size"] == size]
            out[size] = float(np.mean(acc))
        return out

    def cluster_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["method", "repeat", "error"])
        for r in sorted(self.cluster_rows, key=lambda r: (r["method"], r["repeat"])):
            w.writerow([r["method"], r["repeat"], f"{r['error']:.6g}"])
        return buf.getvalue()

    def knn_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["train_size", "mean_accuracy", "std_accuracy", "repeats"])
        for size in sorted(dict.fromkeys(r["train_size"] for r in self.knn_rows)):
            acc = np.array([r["accuracy"] for r in self.knn_rows if r["train_size"] == size])
            w.writerow([size, f"{acc.mean():.6g}", f"{acc.std():.6g}", len(acc)])
        return buf.getvalue()

    def summary_text(self) -> str:
        lines = []
        for method, (mean, sd) in self.clustering_summary().items():
            t = self.timings.get(method)
            extra = f"  decompose {t:.2f}s" if t is not None else ""
            lines.append(f"{method:>10}: clustering error {mean:.4f} +/- {sd:.4f}{extra}")
        for size, acc in self.accuracy_curve().items():
            lines.append(f"train {size:>5}: k-NN accuracy {acc:.4f}")
        return "\n".join(lines)


def _draw_features(graphs, n_per_category, sample_size, seed, decomposers, normalize):
    rng = np.random.default_rng(seed)
    feats = {d.name: [] for d in decomposers}
    timings = dict.fromkeys(feats, 0.0)
    labels = []
    for label, g in graphs:
        for _ in range(n_per_category):
            h = sample_induced(g, sample_size, int(rng.integers(2**63 - 1)))
            labels.append(label)
            for d in decomposers:
                t0 = time.perf_counter()
                feats[d.name].append(d.featurize(h))
                timings[d.name] += time.perf_counter() - t0
    out = {}
    for name, rows in feats.items():
        X = np.vstack(rows)
        out[name] = FeatureMatrix(l2_normalize(X) if normalize else X, labels, name)
    return out, timings


def _cluster_repeat(repeat, seed, graphs, decomposers, n_per_category, sample_size, restarts, normalize):
    fms, timings = _draw_features(graphs, n_per_category, sample_size, seed, decomposers, normalize)
    k = len(graphs)
    rows = []
    for name, fm in fms.items():
        if len(np.unique(fm.X, axis=0)) < k:
            # too few distinct rows to split: score everything as one cluster
            assign = np.zeros(len(fm), dtype=int)
        else:
            assign = kmeans_cluster(fm, k, restarts, seed % (2**32))
        err = clustering_error(assign, fm.labels)
        rows.append({"method": name, "repeat": repeat, "error": err})
    return rows, timings


def run_distinguishability(categories, methods=("cliqster", "svd"), samples_per_category: int = 20,
                           sample_size: int = 300, repeats: int = 100, top_k: int = 20,
                           restarts: int = 8, rng_seed=0, jobs=None, normalize: bool = False) -> ExperimentReport:
    """Repeatedly sample every category, cluster with k = #categories, score the grouping."""
    if len(categories) < 1:
        raise ValueError("no categories given")
    graph_seed, repeat_seed = _seed_sequence(rng_seed).spawn(2)
    graphs = resolve_categories(categories, graph_seed)
    for label, g in graphs:
        if sample_size > g.n:
            raise ValueError(f"sample size {sample_size} exceeds {label} vertex count {g.n}")
    decomposers = [get_decomposer(m, top_k=top_k) for m in methods]
    seeds = derive_seeds(repeat_seed, repeats)
    results = Parallel(n_jobs=_n_jobs(jobs))(
        delayed(_cluster_repeat)(r, s, graphs, decomposers, samples_per_category, sample_size, restarts, normalize)
        for r, s in enumerate(seeds)
    )
    report = ExperimentReport(metadata={
        "categories": [lab for lab, _ in graphs], "methods": list(methods),
        "samples_per_category": samples_per_category, "sample_size": sample_size,
        "repeats": repeats, "top_k": top_k, "seed": rng_seed,
    })
    for rows, timings in results:
        report.cluster_rows.extend(rows)
        for name, t in timings.items():
            report.timings[name] = report.timings.get(name, 0.0) + t
    return report


def _split_counts(total: int, parts: int) -> list[int]:
    return [total // parts + (1 if i < total % parts else 0) for i in range(parts)]


def _classify_repeat(repeat, seed, graphs, decomposer, train_sizes, test_size, pool_size, sample_size, knn_k,
                     normalize):
    fms, _ = _draw_features(graphs, pool_size, sample_size, seed, [decomposer], normalize)
    fm = fms[decomposer.name]
    rng = np.random.default_rng(seed)
    test_counts = _split_counts(test_size, len(graphs))
    perms = []
    for c in range(len(graphs)):
        perms.append(c * pool_size + rng.permutation(pool_size))
    test_idx = np.concatenate([p[:t] for p, t in zip(perms, test_counts)])
    rows = []
    for size in train_sizes:
        counts = _split_counts(size, len(graphs))
        train_idx = np.concatenate([p[t:t + n] for p, t, n in zip(perms, test_counts, counts)])
        acc = knn_classify(fm.subset(train_idx), fm.subset(test_idx), knn_k)
        rows.append({"train_size": size, "repeat": repeat, "accuracy": acc})
    return rows


def run_classification(category_pair, train_sizes=(10, 20, 40), test_size: int = 100, knn_k: int = 3,
                       repeats: int = 20, sample_size: int = 300, method="cliqster", top_k: int = 20,
                       pool_size: int | None = None, rng_seed=0, jobs=None,
                       normalize: bool = False) -> ExperimentReport:
    """k-NN accuracy against training-set size with disjoint train and test samples.

    Each repeat draws ``pool_size`` samples per category; test rows are set
    aside first and training rows come from the remainder, split evenly
    across the two categories.
    """
    if len(category_pair) != 2:
        raise ValueError("classification compares exactly two categories")
    if test_size <= 0:
        raise ValueError("test_size must be positive")
    train_sizes = [int(s) for s in train_sizes]
    need = max(_split_counts(max(train_sizes), 2)) + max(_split_counts(test_size, 2))
    if pool_size is None:
        pool_size = need
    if need > pool_size:
        raise ValueError(f"train size {max(train_sizes)} plus test size {test_size} exceed the "
                         f"{pool_size} samples per category; train and test cannot be disjoint")
    graph_seed, repeat_seed = _seed_sequence(rng_seed).spawn(2)
    graphs = resolve_categories(category_pair, graph_seed)
    decomposer = get_decomposer(method, top_k=top_k)
    seeds = derive_seeds(repeat_seed, repeats)
    results = Parallel(n_jobs=_n_jobs(jobs))(
        delayed(_classify_repeat)(r, s, graphs, decomposer, train_sizes, test_size, pool_size, sample_size,
                                  knn_k, normalize)
        for r, s in enumerate(seeds)
    )
    report = ExperimentReport(metadata={
        "categories": [lab for lab, _ in graphs], "method": decomposer.name, "test_size": test_size,
        "knn_k": knn_k, "repeats": repeats, "pool_size": pool_size, "seed": rng_seed,
    })
    for rows in results:
        report.knn_rows.extend(rows)
    return report


def write_curve(path, values) -> None:
    """Two-column ``position,value`` CSV for external plotting."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["position", "value"])
        for i, v in enumerate(np.asarray(values, dtype=float).tolist(), start=1):
            w.writerow([i, f"{v:.6g}"])
