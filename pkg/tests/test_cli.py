import json

from cubictsp.cli import main

from conftest import DATA


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_tour_petersen(capsys):
    rc, out, _ = run(capsys, "tour", "--family", "petersen")
    data = json.loads(out)
    assert rc == 0 and data["length"] == 11 and data["bound"] == "11" and data["ok"]


def test_tour_from_file_and_stdin(tmp_path, capsys, monkeypatch):
    p = tmp_path / "cube.edges"
    p.write_text("0 1\n1 2\n2 3\n3 0\n4 5\n5 6\n6 7\n7 4\n0 4\n1 5\n2 6\n3 7\n")
    rc, out, _ = run(capsys, "tour", str(p), "--format", "edges")
    assert rc == 0 and json.loads(out)["length"] == 8
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO("C~\n"))
    rc, out, _ = run(capsys, "tour", "-")
    assert rc == 0 and json.loads(out)["length"] == 4


def test_tour_trace_and_reductions(capsys):
    rc, out, err = run(capsys, "tour", "--family", "prism:6", "--trace", "--dump-reductions", "--check")
    data = json.loads(out)
    assert rc == 0 and "reduction_records" in data and "swap_trace" in data
    assert len(err.strip().splitlines()) == len(data["swap_trace"])


def test_bridge_rejected(tmp_path, capsys):
    p = tmp_path / "bridge.edges"
    p.write_text("0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n2 3\n")
    rc, out, _ = run(capsys, "tour", str(p), "--format", "edges")
    assert rc == 2 and "bridgeless" in json.loads(out)["message"]


def test_bad_graph6(tmp_path, capsys):
    p = tmp_path / "bad.g6"
    p.write_text("C~~\n")
    rc, out, _ = run(capsys, "tour", str(p))
    assert rc == 2 and json.loads(out)["error"] == "GraphFormatError"


def test_corpus_is_deterministic(capsys):
    args = ("corpus", str(DATA / "cubic_bridgeless_n10.g6"), "--family", "petersen", "--family", "random:16",
            "--seed", "3")
    rc1, out1, err1 = run(capsys, *args)
    rc2, out2, _ = run(capsys, *args)
    assert rc1 == rc2 == 0 and out1 == out2
    lines = out1.strip().splitlines()
    assert lines[0].startswith("name,n,length,bound,optimum,ratio")
    assert len(lines) == 1 + 18 + 2
    assert json.loads(err1)["passed"] == 20


def test_corpus_json_and_jobs(capsys):
    rc, out, _ = run(capsys, "corpus", str(DATA / "cubic_bridgeless_n8.g6"), "--json", "--jobs", "2")
    data = json.loads(out)
    assert rc == 0 and data["graphs"] == 5
    assert all(r["length"] == 8 and r["optimum"] == 8 for r in data["rows"])


def test_analyze(capsys):
    rc, out, _ = run(capsys, "analyze", "--family", "petersen")
    data = json.loads(out)
    assert rc == 0 and data["reducible"] == [] and data["circuits"]["5"] == 12
    assert len(data["three_edge_cuts"]) == 10


def test_decompose(capsys):
    rc, out, _ = run(capsys, "decompose", "--family", "petersen")
    data = json.loads(out)
    assert rc == 0 and data["terms"] == 6
    assert {t["lambda"] for t in data["decomposition"]} == {"1/6"}


def test_oracle(capsys):
    rc, out, _ = run(capsys, "oracle", "--family", "petersen")
    data = json.loads(out)
    assert rc == 0 and data["optimal_tour"] == 11 and data["min_even_factor_cost"] == 13


def test_dot(capsys):
    rc, out, _ = run(capsys, "dot", "--family", "prism:4", "--tour")
    assert rc == 0 and out.startswith("graph G {") and "penwidth" in out


def test_missing_input(capsys):
    rc, out, _ = run(capsys, "tour")
    assert rc == 2
