from __future__ import annotations

import json
import subprocess
import sys

import pytest

from knotrep.cli import build_parser, main
from knotrep.knots import default_table_path

TREFOIL = "root(x^4-x^2+1, 0.866+0.5i)"
FIGURE_EIGHT = "root(x^2-x-1, 1.618)"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if "--format" not in argv or "json" in argv else out)


def test_alex(capsys):
    code, report = run(capsys, "alex", "--knot", "3_1")
    assert code == 0
    assert report["schema"] == "knotrep.report/1"
    assert report["results"]["alexander_polynomial"] == "t^2 - t + 1"


def test_alex_from_braid_and_pd(capsys):
    _, a = run(capsys, "alex", "--braid", "s1 s2^-1 s1 s2^-1")
    _, b = run(capsys, "alex", "--pd", "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]")
    assert a["results"]["alexander_polynomial"] == "t^2 - 3*t + 1"
    assert b["results"]["alexander_polynomial"] == "t^2 - t + 1"


def test_verify_pass(capsys):
    code, report = run(capsys, "verify", "--knot", "4_1", "--lambda", FIGURE_EIGHT, "--n", "3")
    assert code == 0
    res = report["results"]
    assert res["status"] == "pass"
    dims = res["main_theorem"]["dimensions"]["sl:3"]
    assert (dims["h1"], dims["z1"]) == (2, 10)


def test_verify_hypothesis_failure(capsys):
    code, report = run(capsys, "verify", "--knot", "3_1", "--lambda", TREFOIL, "--n", "6")
    assert code == 2
    res = report["results"]
    assert res["status"] == "hypothesis_failure"
    assert res["error"]["failing_k"] == [5]
    assert res["main_theorem"]["dimensions"]["sl:6"]["z1"] == 42


def test_rep_explicit_cocycle(capsys):
    code, report = run(capsys, "rep", "--presentation", "<S,T | S T S = T S T>", "--lambda", TREFOIL,
                       "--cocycle", "0,1")
    assert code == 0
    assert report["results"]["images"]["T"] == [["lam", "-lam^3 + lam"], ["0", "-lam^3 + lam"]]


def test_cohomology_modules(capsys):
    _, r = run(capsys, "cohomology", "--knot", "3_1", "--lambda", TREFOIL, "--module", "R:10")
    assert r["results"]["dimensions"]["h1"] == 3
    _, c = run(capsys, "cohomology", "--knot", "4_1", "--module", "C:root(x^2-3*x+1, 0.38)")
    assert c["results"]["dimensions"]["h1"] == 1
    _, c = run(capsys, "cohomology", "--knot", "6_1", "--module", "C:1/2")
    assert c["results"]["dimensions"]["h1"] == 1


def test_errors_have_codes(capsys):
    code, r = run(capsys, "alex", "--knot", "9_9")
    assert code == 1 and r["error"]["code"] == "UNKNOWN_KNOT"
    code, r = run(capsys, "alex", "--braid", "s1 s1")
    assert code == 1 and r["error"]["code"] == "NOT_A_KNOT"
    code, r = run(capsys, "verify", "--knot", "4_1", "--lambda", "root(x^2-x-1", "--n", "3")
    assert code == 1 and r["error"]["code"] == "PARSE_ERROR"
    code, r = run(capsys, "verify", "--knot", "4_1", "--lambda", "root(x^2+1, 1i)", "--n", "3")
    assert code == 1 and r["error"]["code"] == "FIELD_ERROR"
    code, r = run(capsys, "alex", "--knot", "3_1", "--braid", "s1 s1 s1")
    assert code == 1 and r["error"]["code"] == "INVALID_ARGUMENT"


def test_reports_are_byte_stable(capsys):
    argv = ["cohomology", "--knot", "4_1", "--lambda", FIGURE_EIGHT, "--module", "sl:4"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_text_format_and_out(tmp_path, capsys):
    out = tmp_path / "r.txt"
    code = main(["alex", "--knot", "4_1", "--format", "text", "--out", str(out)])
    assert code == 0 and capsys.readouterr().out == ""
    text = out.read_text()
    assert "alexander_polynomial: t^2 - 3*t + 1" in text


def test_timings_opt_in(capsys):
    _, r = run(capsys, "alex", "--knot", "3_1")
    assert "timings" not in r
    _, r = run(capsys, "alex", "--knot", "3_1", "--timings")
    assert r["timings"]["total_seconds"] >= 0


def test_table_command(capsys, monkeypatch, tmp_path):
    _, r = run(capsys, "table")
    names = [e["name"] for e in r["results"]["entries"]]
    assert names == ["0_1", "3_1", "4_1", "5_1", "5_2", "6_1"]
    path = tmp_path / "t.json"
    path.write_text(json.dumps([{"name": "k", "braid": [1, 1, 1], "pd": []}]))
    monkeypatch.setenv("KNOTREP_TABLE", str(path))
    _, r = run(capsys, "alex", "--knot", "k")
    assert r["results"]["alexander_polynomial"] == "t^2 - t + 1"


def test_paper_suite(capsys):
    code, r = run(capsys, "paper-suite")
    assert code == 0 and r["results"]["all_passed"]


def test_paper_suite_corrupted_table(capsys, tmp_path):
    entries = json.loads(default_table_path().read_text())
    for e in entries:
        if e["name"] == "3_1":
            e["braid"], e["pd"] = [1, -2, 1, -2], []
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(entries))
    code, r = run(capsys, "paper-suite", "--table", str(path))
    assert code == 1
    failed = r["results"]["failed"]
    assert "alexander:3_1" in failed
    assert "alexander:4_1" not in failed


@pytest.mark.slow
def test_paper_suite_numeric_128(capsys):
    code, r = run(capsys, "paper-suite", "--backend", "numeric", "--precision", "128")
    assert code == 0 and r["results"]["failed"] == []


def test_help_lists_defaults():
    parser = build_parser()
    sub = parser._subparsers._group_actions[0].choices
    for name, p in sub.items():
        for action in p._actions:
            if action.option_strings and action.dest != "help":
                assert action.help and "default" in action.help, f"{name} {action.option_strings}"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "knotrep", "alex", "--knot", "4_1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["alexander_polynomial"] == "t^2 - 3*t + 1"
