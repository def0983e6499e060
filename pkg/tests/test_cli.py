import json
import math

import pytest

from hecketrace.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv,nv,n", [
    (["--k", "3", "--n", "5"], 6, 5),
    (["--ade", "D4"], 4, 6),
    (["--k", "2", "--n", "3"], 2, 3),
])
def test_graph_dumps(capsys, argv, nv, n):
    code, out, _ = run(capsys, "graph", *argv)
    assert code == 0
    d = json.loads(out)
    assert len(d["vertices"]) == nv and d["n"] == n


def test_trace_z2_rank_two(capsys):
    code, out, _ = run(capsys, "trace", "--k", "2", "--n", "5", "--L", "2", "--kind", "Z")
    d = json.loads(out)
    beta = 2 * math.cos(math.pi / 5)
    for i, row in enumerate(d["matrix"]):
        for j, (re_, im_) in enumerate(row):
            assert re_ == pytest.approx(beta if i == j else 0.0, abs=1e-14) and im_ == 0


def test_trace_e6_adjacency(capsys):
    from hecketrace.graphs import ade_graph

    code, out, _ = run(capsys, "trace", "--ade", "E6", "--L", "1", "--kind", "Z")
    assert code == 0
    d = json.loads(out)
    assert [[int(x[0]) for x in row] for row in d["matrix"]] == ade_graph("E6").G1.tolist()


def test_trace_expand(capsys):
    code, out, _ = run(capsys, "trace", "--k", "3", "--n", "6", "--L", "5", "--expand")
    recs = json.loads(out)
    z = next(r for r in recs if r["kind"] == "Z")
    terms = {tuple(t["partition"]): t["coeff"][0] for t in z["expansion"]["terms"]}
    assert terms == pytest.approx({(1, 1): 7.0, (2,): 1.0, (3, 2): 1.0})
    assert z["expansion"]["residual"] < 1e-12


def test_trace_oracle_and_cap(capsys):
    code, a, _ = run(capsys, "trace", "--k", "3", "--n", "6", "--L", "4", "--oracle", "--kind", "Z")
    assert code == 0
    code, b, _ = run(capsys, "trace", "--k", "3", "--n", "6", "--L", "4", "--kind", "Z")
    ma, mb = json.loads(a)["matrix"], json.loads(b)["matrix"]
    assert all(x[0] == pytest.approx(y[0], abs=1e-12) for ra, rb in zip(ma, mb) for x, y in zip(ra, rb))
    code, _, err = run(capsys, "trace", "--k", "3", "--n", "6", "--L", "6", "--oracle", "--cap", "5")
    assert code == 3 and "error" in err


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "all", "--k", "3", "--n", "6", "--Lmax", "9"],
    ["verify", "--suite", "universality", "--ade", "D4", "--Lmax", "8"],
    ["verify", "--suite", "recursion-z", "--k", "2", "--n", "4", "--Lmax", "12"],
])
def test_verify_examples_pass(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    lines = [json.loads(x) for x in out.splitlines()]
    assert lines and all(x["passed"] for x in lines)


def test_verify_breach_exit_code(capsys):
    code, out, err = run(capsys, "verify", "--suite", "recursion-z", "--k", "3", "--n", "7", "--tol", "0")
    assert code == 1 and err.startswith("FAIL recursion-z")


@pytest.mark.parametrize("argv", [
    ["graph", "--k", "3"],
    ["graph", "--k", "3", "--n", "6", "--ade", "D4"],
    ["graph", "--k", "4", "--n", "3"],
    ["graph", "--ade", "Q7"],
    ["trace", "--k", "3", "--n", "6", "--L", "0"],
    ["trace", "--k", "3", "--n", "6", "--L", "2", "--Lmax", "3"],
    ["verify", "--k", "3", "--n", "6", "--suite", "bogus"],
    ["verify", "--k", "3", "--n", "6", "--cap", "0"],
])
def test_config_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_byte_identical_reports(capsys):
    argv = ["verify", "--suite", "tables,markov", "--suite", "trig", "--k", "3", "--n", "7"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b and len(a.splitlines()) == 3
    _, c, _ = run(capsys, "trace", "--k", "3", "--n", "7", "--Lmax", "4")
    _, d, _ = run(capsys, "trace", "--k", "3", "--n", "7", "--Lmax", "4")
    assert c == d


def test_output_locations(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("HECKETRACE_OUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "graph", "--k", "2", "--n", "4")
    assert code == 0 and out == ""
    assert json.loads((tmp_path / "graph-k2n4.json").read_text())["n"] == 4
    target = tmp_path / "sub" / "x.csv"
    run(capsys, "trace", "--k", "2", "--n", "4", "--L", "2", "--format", "csv", "--out", str(target))
    rows = target.read_text().splitlines()
    assert rows[0] == "graph,L,kind,a0,aL,re,im" and len(rows) == 1 + 2 * 9


def test_verify_csv_and_timings(capsys):
    _, out, _ = run(capsys, "verify", "--suite", "tables", "--k", "2", "--n", "5", "--format", "csv", "--timings")
    rows = out.splitlines()
    assert rows[0].endswith(",runtime") and len(rows) == 2
    _, out, _ = run(capsys, "verify", "--suite", "tables", "--k", "2", "--n", "5")
    assert "runtime" not in out
