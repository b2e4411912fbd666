import numpy as np
import pytest
from scipy.stats import zipf

from cliqster import Graph, fit_power_law, summary
from cliqster.netstats import PowerLawFit, fit_to_dict

from conftest import complete


def pareto_integers(n, alpha, x_min, seed):
    rng = np.random.default_rng(seed)
    return np.floor(x_min * (1.0 - rng.random(n)) ** (-1.0 / (alpha - 1.0)))


@pytest.mark.parametrize("alpha", [1.8, 2.5, 3.1])
def test_recovers_discrete_exponent(alpha):
    x = zipf.rvs(alpha, size=100_000, random_state=5)
    fit = fit_power_law(x)
    assert fit.alpha == pytest.approx(alpha, abs=0.1)
    assert fit.n_tail >= 10 and fit.x_min >= 1


def test_fixed_xmin_ignores_values_below():
    x = zipf.rvs(2.5, size=20_000, random_state=1)
    base = fit_power_law(x[x >= 3], x_min=3)
    padded = fit_power_law(np.concatenate([x, np.ones(5000), np.full(700, 2)]), x_min=3)
    assert padded.alpha == base.alpha and padded.n_tail == base.n_tail


def test_squaring_halves_alpha_minus_one():
    x = pareto_integers(100_000, 2.6, 100, 2)
    a1 = fit_power_law(x, x_min=100).alpha
    a2 = fit_power_law(x ** 2, x_min=100 ** 2).alpha
    assert (a2 - 1) / (a1 - 1) == pytest.approx(0.5, rel=0.05)


def test_approx_method_available():
    x = pareto_integers(50_000, 2.5, 50, 3)
    fit = fit_power_law(x, x_min=50, method="approx")
    assert fit.alpha == pytest.approx(2.5, abs=0.05)
    with pytest.raises(ValueError):
        fit_power_law(x, method="nope")


@pytest.mark.parametrize("bad", [[], [3, 3, 3, 3], [0, 1, 2], [1.5, 2, 3], [-1, 2]])
def test_bad_samples(bad):
    with pytest.raises(ValueError):
        fit_power_law(bad)


def test_short_tail():
    with pytest.raises(ValueError):
        fit_power_law([1, 2, 3, 50], x_min=10)
    with pytest.raises(ValueError):
        fit_power_law([1, 2], x_min=0)


def test_fit_record_invariants():
    with pytest.raises(ValueError):
        PowerLawFit(1.0, 1, 10)
    with pytest.raises(ValueError):
        PowerLawFit(2.0, 1, 1)
    assert fit_to_dict(PowerLawFit(2.0, 3, 10, 0.1)) == {"alpha": 2.0, "x_min": 3, "n_tail": 10, "ks": 0.1}


def test_summaries(ten_people):
    s = summary(ten_people)
    assert (s["n"], s["m"], s["components"], s["maximal_cliques"]) == (10, 14, 1, 7)
    assert s["density"] == pytest.approx(14 / 45)
    k5 = summary(complete(5))
    assert (k5["n"], k5["m"], k5["density"], k5["maximal_cliques"], k5["degeneracy"]) == (5, 10, 1.0, 1, 4)
    two = summary(Graph(4, [(0, 1), (2, 3)]))
    assert (two["components"], two["maximal_cliques"], two["max_degree"]) == (2, 2, 1)
