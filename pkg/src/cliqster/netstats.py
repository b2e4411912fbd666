"""Degree-distribution diagnostics and whole-graph summaries."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import zeta

from .cliques import enumerate_maximal_cliques
from .graph import Graph, connected_components, degeneracy_ordering, density

MIN_TAIL = 10
XMIN_QUANTILE = 0.9


@dataclass(frozen=True)
class PowerLawFit:
    alpha: float
    x_min: int
    n_tail: int
    ks: float = float("nan")

    def __post_init__(self):
        if not self.alpha > 1:
            raise ValueError(f"power-law exponent must exceed 1, got {self.alpha}")
        if self.n_tail < 2:
            raise ValueError("a fit needs at least two tail samples")


def _alpha_approx(tail: np.ndarray, x_min: int) -> float:
    # continuous approximation with the half-integer offset
    return 1.0 + len(tail) / np.sum(np.log(tail / (x_min - 0.5)))


def _alpha_discrete(tail: np.ndarray, x_min: int) -> float:
    """Exact discrete MLE: maximise ``-a sum(log x) - n log zeta(a, x_min)``."""
    n = len(tail)
    sum_log = float(np.sum(np.log(tail)))

    def nll(a):
        return a * sum_log + n * np.log(zeta(a, x_min))

    guess = _alpha_approx(tail, x_min)
    hi = max(2.0 * guess, 6.0)
    res = minimize_scalar(nll, bounds=(1.0 + 1e-6, hi), method="bounded",
                          options={"xatol": 1e-8})
    return float(res.x)


_ESTIMATORS = {"discrete": _alpha_discrete, "approx": _alpha_approx}


def _ks_distance(tail: np.ndarray, x_min: int, alpha: float) -> float:
    values, counts = np.unique(tail, return_counts=True)
    # empirical and model P(X >= x) at each observed value
    emp = 1.0 - np.concatenate([[0], np.cumsum(counts)[:-1]]) / len(tail)
    model = zeta(alpha, values) / zeta(alpha, x_min)
    return float(np.max(np.abs(emp - model)))


def fit_power_law(degrees, x_min: int | None = None, method: str = "discrete") -> PowerLawFit:
    """Maximum-likelihood power-law exponent of a positive integer sample.

    ``method="discrete"`` maximises the exact zeta likelihood;
    ``method="approx"`` uses the closed form
    ``1 + n / sum(log(x / (x_min - 0.5)))``, which drifts low for small
    ``x_min``. With ``x_min`` omitted, every observed value up to the 90th
    percentile (keeping at least 10 tail samples) is tried and the one
    minimising the Kolmogorov-Smirnov distance between tail and fitted model
    wins.
    """
    try:
        estimate = _ESTIMATORS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}") from None
    x = np.asarray(degrees, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("empty sample")
    if np.any(x < 1) or np.any(x != np.floor(x)):
        raise ValueError("degrees must be positive integers")
    if np.all(x == x[0]):
        raise ValueError("all values equal; exponent undefined")

    if x_min is not None:
        x_min = int(x_min)
        if x_min < 1:
            raise ValueError("x_min must be at least 1")
        tail = x[x >= x_min]
        if len(tail) < 2:
            raise ValueError(f"fewer than two samples at or above x_min={x_min}")
        alpha = estimate(tail, x_min)
        return PowerLawFit(alpha, x_min, len(tail), _ks_distance(tail, x_min, alpha))

    xs = np.sort(x)
    cap = np.quantile(xs, XMIN_QUANTILE)
    best = None
    for cand in np.unique(xs):
        if cand > cap:
            break
        tail = xs[np.searchsorted(xs, cand):]
        if len(tail) < MIN_TAIL or np.all(tail == tail[0]):
            break
        alpha = estimate(tail, int(cand))
        ks = _ks_distance(tail, int(cand), alpha)
        if best is None or ks < best.ks:
            best = PowerLawFit(alpha, int(cand), len(tail), ks)
    if best is None:
        raise ValueError("no candidate x_min leaves a usable tail")
    return best


def summary(g: Graph) -> dict:
    """n, m, component count, density, max degree, degeneracy and clique count."""
    return {
        "n": g.n,
        "m": g.m,
        "components": len(connected_components(g)),
        "density": density(g) if g.n >= 2 else float("nan"),
        "max_degree": int(g.degrees.max()) if g.n else 0,
        "degeneracy": degeneracy_ordering(g).degeneracy,
        "maximal_cliques": len(enumerate_maximal_cliques(g)),
    }


def fit_to_dict(fit: PowerLawFit) -> dict:
    return asdict(fit)
