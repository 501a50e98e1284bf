import json

import pytest

from udkernel.cli import main


def test_gen_run_diff(tmp_path, capsys):
    trace = tmp_path / "t.txt"
    assert main(["gen", "--seed", "4", "--events", "50", "--out", str(trace)]) == 0
    assert trace.read_text().startswith("H PATHK 3 PATH\n")
    assert main(["run", "--trace", str(trace)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines and all(line.startswith("A ") for line in lines)
    assert main(["diff", "--trace", str(trace)]) == 0
    assert "0 mismatches" in capsys.readouterr().out
    out = tmp_path / "r.json"
    assert main(["run", "--trace", str(trace), "--format", "json", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["events"] > 0


def test_problem_filter(tmp_path, capsys):
    trace = tmp_path / "t.txt"
    main(["gen", "--seed", "1", "--problems", "fvs,cp", "--path-k", "0", "--out", str(trace)])
    text = trace.read_text()
    assert "Q VC" not in text and "H " not in text
    assert main(["run", "--trace", str(trace), "--problems", "FVS"]) == 0


def test_bad_trace_exits_2(tmp_path, capsys):
    trace = tmp_path / "bad.txt"
    trace.write_text("I 0 0 0\nD 5\n")
    assert main(["run", "--trace", str(trace)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_unknown_problem_is_a_usage_error():
    with pytest.raises(SystemExit):
        main(["run", "--trace", "x", "--problems", "TSP"])


def test_bench_csv_and_json(tmp_path, capsys):
    args = ["bench", "--sizes", "300,600", "--updates", "40", "--queries", "1", "--rebuilds", "1"]
    assert main(args) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "structure,n,op,mean_ns,p50_ns,p99_ns"
    updates = [r for r in rows[1:] if r.split(",")[2] == "update"]
    for s in ("path", "vc", "ths", "fvs_cp"):
        assert sorted(int(r.split(",")[1]) for r in updates if r.startswith(s + ",")) == [300, 600]
    out = tmp_path / "b.json"
    assert main(args + ["--format", "json", "--layout", "lattice", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["rows"] and doc["speedup"]
