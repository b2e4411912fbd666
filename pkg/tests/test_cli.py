import hashlib
import subprocess
import sys

import pytest

from cliqster.cli import build_parser, main

from conftest import TEN_PEOPLE


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def digest(text):
    return hashlib.sha256(text.encode()).hexdigest()


def test_cliques_prints_tokens(capsys):
    code, out, _ = run(["cliques", str(TEN_PEOPLE)], capsys)
    assert code == 0
    assert out.splitlines() == ["1 2 3", "5 6 7", "8 9 10", "4 5 7", "3 6", "3 9", "6 10"]


def test_decompose_csv(capsys):
    code, out, _ = run(["decompose", str(TEN_PEOPLE)], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "clique,size,mu"
    assert "5 6 7,3,0.75" in lines and "4 5 7,3,0.75" in lines and "1 2 3,3,1" in lines
    assert len(lines) == 8


def test_stats_row(capsys):
    code, out, _ = run(["stats", str(TEN_PEOPLE)], capsys)
    header, row = out.splitlines()
    rec = dict(zip(header.split(","), row.split(",")))
    assert code == 0
    assert (rec["n"], rec["m"], rec["components"], rec["maximal_cliques"], rec["density"]) == \
        ("10", "14", "1", "7", "0.311111")


def test_features(capsys, tmp_path):
    out_path = tmp_path / "f.csv"
    assert main(["features", str(TEN_PEOPLE), "--top-k", "7", "--out", str(out_path)]) == 0
    lines = out_path.read_text().splitlines()
    assert lines[0] == "graph,f1,f2,f3,f4,f5,f6,f7"
    assert lines[1].endswith(",1,1,1,1,1,0.75,0.75")
    code, out, _ = run(["features", "--method", "svd", "--normalize", "--top-k", "3", str(TEN_PEOPLE)], capsys)
    assert code == 0 and len(out.splitlines()[1].split(",")) == 4


def test_synth_then_sample(tmp_path, capsys):
    src = tmp_path / "ci.edges"
    assert main(["synth", "--profile", "CI", "--seed", "2", "--out", str(src)]) == 0
    text = src.read_text()
    assert text.startswith("# synthetic profile=CI") and "sample_scale=20" in text
    code, out, _ = run(["sample", str(src), "--sample-size", "300", "--seed", "1"], capsys)
    assert code == 0 and out.startswith("# induced sample of 300 vertices")


@pytest.mark.parametrize("argv", [
    ["stats", "{missing}"],
    ["cliques", "{bad}"],
    ["decompose", "{empty}"],
    ["stats", "{empty}"],
    ["synth", "--profile", "SI", "--sample-scale", "1e9"],
    ["eval-knn", "--profiles", "ST", "--repeats", "1", "--jobs", "1"],
])
def test_runtime_errors_exit_one(argv, tmp_path, capsys):
    bad = tmp_path / "bad.edges"
    bad.write_text("1 2\n3 3\n")
    empty = tmp_path / "empty.edges"
    empty.write_text("# nothing\n")
    paths = {"missing": tmp_path / "nope.edges", "bad": bad, "empty": empty}
    argv = [a.format(**paths) for a in argv]
    code, out, err = run(argv, capsys)
    assert code == 1 and err.startswith("cliqster: error:")


def test_usage_errors_exit_two(capsys):
    for argv in (["bogus"], ["features", "--method", "graphlet", str(TEN_PEOPLE)], []):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2


def test_help_lists_flags_with_defaults():
    parser = build_parser()
    sub = parser._subparsers._group_actions[0].choices
    help_text = sub["eval-cluster"].format_help()
    for flag in ("--seed", "--top-k", "--sample-size", "--repeats", "--jobs", "--out", "--normalize",
                 "--sample-scale", "--profiles", "--methods", "--plot-dir"):
        assert flag in help_text
    assert "(default: 300)" in help_text and "(default: 0)" in help_text
    knn = sub["eval-knn"].format_help()
    assert "--method" in knn and "(default: cliqster)" in knn
    assert "--profile" in sub["synth"].format_help()
    for name, p in sub.items():
        assert "--out" in p.format_help(), name


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cliqster", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "eval-cluster" in res.stdout


DETERMINISM_CASES = [
    ["stats", "{g}"],
    ["cliques", "{g}"],
    ["decompose", "{g}"],
    ["features", "{g}", "--method", "svd"],
    ["synth", "--profile", "PEPS", "--seed", "9"],
    ["sample", "{g}", "--sample-size", "150", "--seed", "4"],
    ["eval-cluster", "--profiles", "ST,LL", "--repeats", "2", "--samples-per-category", "4",
     "--sample-size", "100", "--seed", "3", "--jobs", "1"],
    ["eval-knn", "--profiles", "ST,LL", "--repeats", "2", "--train-sizes", "4,8", "--test-size", "6",
     "--sample-size", "100", "--seed", "3", "--jobs", "2"],
]


@pytest.mark.parametrize("argv", DETERMINISM_CASES, ids=lambda a: a[0])
def test_repeated_runs_identical(argv, tmp_path, capsys):
    g = tmp_path / "g.edges"
    main(["synth", "--profile", "ST", "--seed", "1", "--out", str(g)])
    argv = [a.format(g=g) for a in argv]
    digests = set()
    for _ in range(2):
        code, out, _ = run(argv, capsys)
        assert code == 0
        digests.add(digest(out))
    assert len(digests) == 1


def test_bench_columns(capsys):
    code, out, _ = run(["bench", "--sizes", "100,200", "--runs", "1", "--seed", "2"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "method,n,m,mean_ms,std_ms"
    # everything but timing columns repeats exactly
    code, again, _ = run(["bench", "--sizes", "100,200", "--runs", "1", "--seed", "2"], capsys)
    strip = lambda text: [",".join(l.split(",")[:3]) for l in text.splitlines()]
    assert strip(out) == strip(again) and len(lines) == 5


def test_eval_cluster_plot_dir(tmp_path, capsys):
    plots = tmp_path / "plots"
    code, out, _ = run(["eval-cluster", "--profiles", "ST,LL", "--repeats", "1", "--samples-per-category", "3",
                        "--sample-size", "80", "--jobs", "1", "--plot-dir", str(plots), "--curve-repeats", "3",
                        "--methods", "cliqster"], capsys)
    assert code == 0
    names = sorted(p.name for p in plots.iterdir())
    assert names == sorted(f"{c}_cliqster_{kind}.csv" for c in ("ST", "LL") for kind in ("mean", "lower", "upper"))
    assert (plots / "ST_cliqster_mean.csv").read_text().startswith("position,value\n")
