"""Command-line entry point: ``cliqster <subcommand> ...``."""
from __future__ import annotations

import argparse
import contextlib
import csv
import os
import sys

import numpy as np

from . import __version__
from .bench import TIMED, bench
from .cliques import enumerate_maximal_cliques
from .core import decompose
from .estimators import DECOMPOSERS, get_decomposer
from .evaluation import (
    l2_normalize,
    resolve_categories,
    run_classification,
    run_distinguishability,
    sample_protocol,
    write_curve,
)
from .graph import read_edge_list, sample_induced
from .netstats import fit_power_law, summary
from .synth import DEFAULT_N, DEFAULT_SAMPLE_SCALE, builtin_profiles, generate, get_profile


def fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return f"{x:.6g}"
    return str(x)


def token_key(tok: str):
    return (0, int(tok), "") if tok.lstrip("-").isdigit() else (1, 0, tok)


def clique_tokens(g, clique) -> str:
    return " ".join(sorted((g.label(v) for v in clique), key=token_key))


@contextlib.contextmanager
def output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def csv_writer(fh):
    return csv.writer(fh, lineterminator="\n")


def split_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def int_list(text: str) -> list[int]:
    return [int(t) for t in split_list(text)]


def load(args, path):
    return read_edge_list(path, n_vertices=getattr(args, "n_vertices", None))


def resolve_profile(args, name):
    return get_profile(name, n=args.n, sample_scale=args.sample_scale)


def categories_from(args):
    if args.graphs:
        return [(os.path.basename(p), load(args, p)) for p in split_list(args.graphs)]
    return [resolve_profile(args, name) for name in split_list(args.profiles)]


# subcommands -------------------------------------------------------------

def cmd_stats(args):
    g = load(args, args.graph)
    if g.m == 0:
        raise ValueError(f"{args.graph}: graph has no edges")
    rec = summary(g)
    deg = g.degrees[g.degrees > 0]
    try:
        fit = fit_power_law(deg)
        rec.update(alpha=fit.alpha, x_min=fit.x_min, n_tail=fit.n_tail)
    except ValueError:
        rec.update(alpha=float("nan"), x_min="", n_tail=0)
    with output(args.out) as fh:
        w = csv_writer(fh)
        w.writerow(rec.keys())
        w.writerow([fmt(v) for v in rec.values()])


def cmd_cliques(args):
    g = load(args, args.graph)
    with output(args.out) as fh:
        for c in enumerate_maximal_cliques(g):
            fh.write(clique_tokens(g, c) + "\n")


def cmd_decompose(args):
    g = load(args, args.graph)
    coeffs = decompose(g)
    with output(args.out) as fh:
        w = csv_writer(fh)
        w.writerow(["clique", "size", "mu"])
        for c, mu in zip(coeffs.cliques, coeffs.mu):
            w.writerow([clique_tokens(g, c), c.size, fmt(float(mu))])
    if coeffs.ridge:
        print(f"note: singular Gram matrix, ridge {coeffs.ridge:.3g} added", file=sys.stderr)


def cmd_features(args):
    dec = get_decomposer(args.method, top_k=args.top_k)
    graphs = [load(args, p) for p in args.graphs]
    X = dec.fit_transform(graphs)
    if args.normalize:
        X = l2_normalize(X)
    with output(args.out) as fh:
        w = csv_writer(fh)
        w.writerow(["graph"] + [f"f{i}" for i in range(1, args.top_k + 1)])
        for p, row in zip(args.graphs, X):
            w.writerow([p] + [fmt(float(v)) for v in row])


def cmd_synth(args):
    prof = resolve_profile(args, args.profile)
    g = generate(prof, args.seed)
    b = prof.clique_boost
    with output(args.out) as fh:
        fh.write(f"# synthetic profile={prof.name} alpha={prof.alpha:.6g} density={prof.density:.6g} "
                 f"sample_scale={prof.sample_scale:.6g} target_density={prof.target_density:.6g}\n")
        fh.write(f"# n={g.n} m={g.m} seed={args.seed} cliques_per_1000={b.count:.6g} "
                 f"clique_sizes={b.min_size}-{b.max_size}\n")
        fh.write(g.to_edge_list())


def cmd_sample(args):
    g = load(args, args.graph)
    h = sample_induced(g, args.sample_size, args.seed)
    with output(args.out) as fh:
        fh.write(f"# induced sample of {h.n} vertices from {os.path.basename(args.graph)} seed={args.seed}\n")
        fh.write(h.to_edge_list())


def cmd_eval_cluster(args):
    cats = categories_from(args)
    methods = split_list(args.methods)
    report = run_distinguishability(cats, methods, args.samples_per_category, args.sample_size, args.repeats,
                                    args.top_k, args.restarts, args.seed, args.jobs, args.normalize)
    with output(args.out) as fh:
        fh.write(report.cluster_csv())
    print(report.summary_text(), file=sys.stderr)
    if args.plot_dir:
        write_plot_data(args, cats, methods)


def write_plot_data(args, cats, methods):
    os.makedirs(args.plot_dir, exist_ok=True)
    # same graph seed as the clustering run, so the curves describe the same graphs
    graph_seed, curve_seed = np.random.SeedSequence(args.seed).spawn(2)
    for label, g in resolve_categories(cats, graph_seed):
        for m in methods:
            res = sample_protocol(g, args.sample_size, args.curve_repeats, m, args.top_k, curve_seed, label, jobs=1)
            stem = os.path.join(args.plot_dir, f"{label.replace('/', '_')}_{m}")
            write_curve(stem + "_mean.csv", res.mean)
            write_curve(stem + "_lower.csv", res.lower)
            write_curve(stem + "_upper.csv", res.upper)


def cmd_eval_knn(args):
    cats = categories_from(args)
    report = run_classification(cats, int_list(args.train_sizes), args.test_size, args.knn_k, args.repeats,
                                args.sample_size, args.method, args.top_k, args.pool_size, args.seed,
                                args.jobs, args.normalize)
    with output(args.out) as fh:
        fh.write(report.knn_csv())
    print(report.summary_text(), file=sys.stderr)


def cmd_bench(args):
    if args.graph:
        rows = bench(int_list(args.sizes), split_list(args.methods), source=load(args, args.graph),
                     rng_seed=args.seed, runs=args.runs)
    else:
        rows = bench(int_list(args.sizes), split_list(args.methods), profile=resolve_profile(args, args.profile),
                     rng_seed=args.seed, runs=args.runs)
    with output(args.out) as fh:
        w = csv_writer(fh)
        w.writerow(["method", "n", "m", "mean_ms", "std_ms"])
        for r in rows:
            w.writerow([r["method"], r["n"], r["m"], fmt(r["mean_ms"]), fmt(r["std_ms"])])


# parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    fmt_cls = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="cliqster", formatter_class=fmt_cls,
                                     description="Maximal-clique basis decomposition of networks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    methods = sorted(DECOMPOSERS)
    profiles = [p.name for p in builtin_profiles()]

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, description=help_, formatter_class=fmt_cls)
        p.set_defaults(func=func)
        p.add_argument("--out", default="-", help="output path ('-' for stdout)")
        return p

    def graph_input(p, many=False):
        if many:
            p.add_argument("graphs", nargs="+", help="edge-list files")
        else:
            p.add_argument("graph", help="edge-list file")
        p.add_argument("--n-vertices", type=int, default=None,
                       help="total vertex count when the file omits isolated vertices")

    def synth_opts(p):
        p.add_argument("--n", type=int, default=DEFAULT_N, help="vertices per generated category graph")
        p.add_argument("--sample-scale", type=float, default=DEFAULT_SAMPLE_SCALE,
                       help="multiplier applied to the category density")

    def eval_opts(p):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--profiles", default="ST,LL", help=f"comma-separated profiles from {profiles}")
        src.add_argument("--graphs", default=None, help="comma-separated edge-list files, one per category")
        p.add_argument("--n-vertices", type=int, default=None, help=argparse.SUPPRESS)
        p.add_argument("--seed", type=int, default=0, help="master random seed")
        p.add_argument("--top-k", type=int, default=20, help="coefficients kept per sample")
        p.add_argument("--sample-size", type=int, default=300, help="vertices per induced sample")
        p.add_argument("--jobs", type=int, default=None, help="worker processes; unset means all cores")
        p.add_argument("--normalize", action="store_true", help="scale feature rows to unit length")
        synth_opts(p)

    p = add("stats", cmd_stats, "summary statistics and power-law fit as one CSV row")
    graph_input(p)

    p = add("cliques", cmd_cliques, "list maximal cliques, one per line")
    graph_input(p)

    p = add("decompose", cmd_decompose, "print each maximal clique with its coefficient")
    graph_input(p)

    p = add("features", cmd_features, "top-k feature row per input graph")
    graph_input(p, many=True)
    p.add_argument("--method", choices=methods, default="cliqster", help="decomposition method")
    p.add_argument("--top-k", type=int, default=20, help="coefficients kept per graph")
    p.add_argument("--normalize", action="store_true", help="scale feature rows to unit length")

    p = add("synth", cmd_synth, "write a synthetic category graph as an edge list")
    p.add_argument("--profile", choices=profiles, default="ST", help="category profile")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    synth_opts(p)

    p = add("sample", cmd_sample, "write a random induced subgraph as an edge list")
    graph_input(p)
    p.add_argument("--sample-size", type=int, default=1000, help="vertices in the sample")
    p.add_argument("--seed", type=int, default=0, help="random seed")

    p = add("eval-cluster", cmd_eval_cluster, "k-means distinguishability of categories per method")
    eval_opts(p)
    p.add_argument("--methods", default="cliqster,svd", help=f"comma-separated from {methods}")
    p.add_argument("--repeats", type=int, default=100, help="independent clustering rounds")
    p.add_argument("--samples-per-category", type=int, default=20, help="samples drawn per category each round")
    p.add_argument("--restarts", type=int, default=8, help="k-means restarts")
    p.add_argument("--plot-dir", default=None, help="write mean and +/-2 sigma coefficient curves here")
    p.add_argument("--curve-repeats", type=int, default=100, help="samples per plotted curve")

    p = add("eval-knn", cmd_eval_knn, "k-NN accuracy against training-set size for two categories")
    eval_opts(p)
    p.add_argument("--method", choices=methods, default="cliqster", help="decomposition method")
    p.add_argument("--train-sizes", default="10,20,40,60,80,100", help="comma-separated training-set sizes")
    p.add_argument("--test-size", type=int, default=100, help="test samples per repeat, split evenly")
    p.add_argument("--knn-k", type=int, default=3, help="neighbours in the majority vote")
    p.add_argument("--repeats", type=int, default=20, help="independent train/test draws")
    p.add_argument("--pool-size", type=int, default=None,
                   help="samples drawn per category each repeat; unset means just enough for the largest split")

    p = add("bench", cmd_bench, "time full decompositions per method and sample size")
    p.add_argument("--sizes", default="250,500,1000", help="comma-separated sample sizes")
    p.add_argument("--methods", default="cliqster,svd", help=f"comma-separated from {sorted(TIMED)}")
    p.add_argument("--profile", choices=profiles, default="CI", help="profile to sample from")
    p.add_argument("--graph", default=None, help="sample from this edge list instead of a profile")
    p.add_argument("--n-vertices", type=int, default=None, help=argparse.SUPPRESS)
    p.add_argument("--runs", type=int, default=5, help="timed runs after one warm-up")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    synth_opts(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ValueError, RuntimeError, OSError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"cliqster: error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
