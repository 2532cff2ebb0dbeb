from __future__ import annotations

import json
import subprocess
import sys

import pytest

from edgestat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dist_two_cliques(capsys):
    code, out, _ = run(capsys, "dist", "--construct", "two_cliques:6", "-k", "3")
    assert code == 0
    obj = json.loads(out)
    assert obj["method"] == "exact" and obj["total"] == "20"
    assert {c["l"]: c["count"] for c in obj["counts"]} == {1: "18", 3: "2"}


def test_dist_csv(capsys):
    code, out, _ = run(capsys, "dist", "--g6", "A_", "-k", "2", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["l,count,probability", "0,0,0.0", "1,1,1.0"]


def test_dist_file_and_out(tmp_path, capsys):
    src = tmp_path / "g.g6"
    src.write_text("C~\n")
    dst = tmp_path / "o.json"
    code, out, _ = run(capsys, "dist", "--file", str(src), "-k", "3", "--out", str(dst))
    assert code == 0 and out == ""
    assert json.loads(dst.read_text())["counts"] == [{"l": 3, "count": "4"}]


def test_dist_over_budget(capsys):
    code, _, err = run(capsys, "dist", "--construct", "clique_union:60,6", "-k", "20",
                       "--budget", "1000")
    assert code == 2 and "4191844505805495" in err
    code, out, _ = run(capsys, "dist", "--construct", "clique_union:60,6", "-k", "20",
                       "--budget", "1000", "--seed", "3", "--samples", "2000")
    assert code == 0 and json.loads(out)["method"] == "monte_carlo"


def test_byte_identical_output(capsys):
    argv = ["dist", "--construct", "clique_union:300,10", "-k", "6", "--mc", "--seed", "5",
            "--samples", "20000"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_moments_agree(capsys):
    code, out, _ = run(capsys, "moments", "--construct", "two_cliques:6", "-k", "3")
    obj = json.loads(out)
    assert code == 0 and obj["agree"] is True
    assert obj["closed_form"]["mu"] == "6/5"
    assert obj["closed_form"]["central4"] == "657/625"


def test_check_exit_codes(capsys):
    code, out, _ = run(capsys, "check", "--construct", "two_cliques:6", "-k", "3", "-l", "1",
                       "-t", "1", "-r", "2")
    obj = json.loads(out)
    assert code == 0 and obj["holds"]
    assert obj["brun"]["ratio"] == "5/12"
    code, _, err = run(capsys, "check", "--construct", "complete:4", "-k", "3", "--anti")
    assert code == 2 and "variance" in err


def test_search_brute_updates_records(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("EDGESTAT_RECORDS", str(tmp_path / "rec.jsonl"))
    code, out, _ = run(capsys, "search", "--brute", "-n", "4", "-k", "3", "-l", "2")
    obj = json.loads(out)
    assert code == 0 and obj["stored"] and obj["record"]["density"] == "1"
    assert (tmp_path / "rec.jsonl").exists()
    code, out, _ = run(capsys, "search", "--brute", "-n", "4", "-k", "3", "-l", "2")
    assert json.loads(out)["stored"] is False


def test_search_local_needs_seed(tmp_path, capsys):
    rec = str(tmp_path / "r.jsonl")
    code, _, err = run(capsys, "search", "-n", "10", "-k", "3", "-l", "1", "--records", rec)
    assert code == 2 and "--seed" in err
    code, out, _ = run(capsys, "search", "-n", "10", "-k", "3", "-l", "1", "--seed", "1",
                       "--budget", "100", "--records", rec)
    assert code == 0 and json.loads(out)["record"]["method"] == "local_search"


def test_construct(capsys):
    code, out, _ = run(capsys, "construct", "-n", "6", "-k", "3", "-l", "1")
    assert code == 0
    assert json.loads(out)["record"]["density"] == "9/10"


@pytest.mark.parametrize(
    "argv",
    [
        ["dist", "--g6", "A\x7f", "-k", "1"],
        ["dist", "--g6", "A_", "--construct", "complete:2", "-k", "1"],
        ["dist", "--construct", "gnp:10,0.5", "-k", "3"],
        ["dist", "--g6", "A_"],
        ["dist", "--g6", "A_", "-k", "3"],
        ["search", "--brute", "-n", "9", "-k", "3", "-l", "1"],
        ["dist", "--file", "/nonexistent/graph.g6", "-k", "1"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("edgestat: error:")


def test_corrupt_records_exit_2(tmp_path, capsys):
    bad = tmp_path / "r.jsonl"
    bad.write_text("garbage\n")
    code, _, err = run(capsys, "search", "--brute", "-n", "3", "-k", "2", "-l", "1",
                       "--records", str(bad))
    assert code == 2 and "r.jsonl:1" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "edgestat", "dist", "--g6", "A_", "-k", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["counts"] == [{"l": 1, "count": "1"}]
