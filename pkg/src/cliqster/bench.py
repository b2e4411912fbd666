"""Wall-clock comparison of full decompositions."""
from __future__ import annotations

import time

import numpy as np

from .baselines import svd_spectrum
from .core import decompose
from .evaluation import _seed_sequence
from .graph import Graph, sample_induced
from .synth import CategoryProfile, generate

TIMED = {
    "cliqster": decompose,
    "svd": svd_spectrum,
}


def time_call(fn, arg, runs: int = 5, warmup: int = 1) -> np.ndarray:
    for _ in range(warmup):
        fn(arg)
    out = np.empty(runs)
    for i in range(runs):
        t0 = time.perf_counter()
        fn(arg)
        out[i] = time.perf_counter() - t0
    return out


def bench_samples(source: Graph, sizes, rng_seed=0) -> list[Graph]:
    """One induced sample per size, drawn from ``source`` with split seeds."""
    seeds = _seed_sequence(rng_seed).spawn(len(sizes))
    return [sample_induced(source, int(s), int(ss.generate_state(1)[0])) for s, ss in zip(sizes, seeds)]


def bench(sizes, methods=("cliqster", "svd"), profile: CategoryProfile | None = None, source: Graph | None = None,
          rng_seed=0, runs: int = 5, warmup: int = 1) -> list[dict]:
    """Rows of ``method, n, m, mean_ms, std_ms``; one sample graph per size."""
    if runs < 1:
        raise ValueError("need at least one timed run")
    for m in methods:
        if m not in TIMED:
            raise ValueError(f"unknown method {m!r}; choose from {sorted(TIMED)}")
    if source is None:
        if profile is None:
            raise ValueError("give a source graph or a profile")
        gen_seed, sample_seed = _seed_sequence(rng_seed).spawn(2)
        source = generate(profile.with_params(n=max(profile.n, max(sizes))), gen_seed)
    else:
        sample_seed = rng_seed
    rows = []
    for g in bench_samples(source, sizes, sample_seed):
        for m in methods:
            t = time_call(TIMED[m], g, runs, warmup) * 1000
            rows.append({"method": m, "n": g.n, "m": g.m, "mean_ms": float(t.mean()), "std_ms": float(t.std())})
    return rows
