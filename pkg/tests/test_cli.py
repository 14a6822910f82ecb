"""CLI behaviour and golden outputs.

Set ``UPDATE_GOLDEN=1`` to rewrite the expected files after an intended
output change.
"""
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from bracketforge.cli import run

GOLDEN = Path(__file__).parent / "golden"
INPUTS = GOLDEN / "inputs"
FOUR = str(INPUTS / "four_plus_third.fmt")
DOUBLE = str(INPUTS / "double_elimination_4.fmt")
STRENGTHS = str(INPUTS / "strengths.csv")
MATRIX = str(INPUTS / "matrix.csv")

CASES = {
    "validate.txt": ["validate", "--format", FOUR],
    "validate_signature.txt": ["validate", "--signature", "4,2,0"],
    "build_signature.fmt": ["build", "--signature", "4,2,0", "--name", "six"],
    "build_consolation.fmt": ["build", "--signature", "8,0,0", "--consolation", "1",
                              "--name", "eight"],
    "render.dot": ["render", "--format", DOUBLE],
    "enumerate_coin.json": ["enumerate", "--format", FOUR, "--model", "coin"],
    "enumerate_bt.csv": ["enumerate", "--format", DOUBLE, "--model", "bt",
                         "--strengths", STRENGTHS, "--out", "csv"],
    "simulate_matrix.json": ["simulate", "--format", FOUR, "--model", "matrix",
                             "--matrix", MATRIX, "--reps", "5000", "--seed", "42"],
    "simulate_bt.csv": ["simulate", "--signature", "4,0", "--model", "bt",
                        "--strengths", STRENGTHS, "--reps", "3000", "--seed", "7",
                        "--out", "csv"],
    "swiss.json": ["swiss", "--teams", "8", "--rounds", "3"],
    "swiss.csv": ["swiss", "--teams", "16", "--rounds", "4", "--out", "csv"],
    "compare.txt": ["compare", "--format", FOUR, "--format", DOUBLE, "--model", "bt",
                    "--strengths", STRENGTHS],
    "compare_mc.json": ["compare", "--format", DOUBLE, "--signature", "4,0", "--model",
                        "matrix", "--matrix", MATRIX, "--method", "mc", "--reps", "4000",
                        "--seed", "3", "--out", "json"],
}


def _run(capsys, argv):
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out.replace(str(INPUTS) + os.sep, ""), err


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, capsys):
    code, out, err = _run(capsys, CASES[name])
    assert code == 0, err
    path = GOLDEN / name
    if os.environ.get("UPDATE_GOLDEN"):
        path.write_text(out, encoding="utf-8")
    assert out == path.read_text(encoding="utf-8")
    # byte-stable across runs
    assert _run(capsys, CASES[name])[1] == out


def test_every_command_has_golden():
    from bracketforge.cli import COMMANDS
    assert {argv[0] for argv in CASES.values()} == set(COMMANDS)


def test_enumerate_coin_is_uniform(capsys):
    doc = json.loads(_run(capsys, CASES["enumerate_coin.json"])[1])
    assert doc["method"] == "exact" and doc["team_count"] == 4
    assert all(abs(x - 0.25) <= 1e-12 for row in doc["D"] for x in row)
    assert doc["total_matches"] == 4
    assert "reps" not in doc and "stderr" not in doc


def test_simulate_json_fields(capsys):
    doc = json.loads(_run(capsys, CASES["simulate_matrix.json"])[1])
    assert list(doc) == ["format", "team_count", "model", "method", "reps", "D", "stderr",
                         "expected_matches", "total_matches"]
    assert doc["method"] == "mc" and doc["reps"] == 5000


def test_workers_do_not_change_output(capsys):
    argv = CASES["simulate_matrix.json"]
    assert _run(capsys, argv + ["--workers", "2"])[1] == _run(capsys, argv)[1]


def test_output_files(tmp_path, capsys):
    out = tmp_path / "d.csv"
    assert run(CASES["enumerate_bt.csv"] + ["-o", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert out.read_text() == (GOLDEN / "enumerate_bt.csv").read_text()
    dot = tmp_path / "g.dot"
    assert run(["render", "--format", DOUBLE, "--dot", str(dot)]) == 0
    assert dot.read_text() == (GOLDEN / "render.dot").read_text()


def test_validate_reports_problems(capsys):
    code, out, err = _run(capsys, ["validate", "--format", str(INPUTS / "broken.fmt")])
    assert code == 1
    assert "ValidationFailed" in err and "PLACE_DUP" in err


def test_zero_reps(capsys):
    code, out, err = _run(capsys, ["simulate", "--format", FOUR, "--reps", "0"])
    assert code == 1 and "ZeroReps" in err and out == ""


def test_state_cap_flag_and_env(capsys, monkeypatch):
    code, _, err = _run(capsys, ["enumerate", "--format", FOUR, "--state-cap", "2"])
    assert code == 1 and "StateCapExceeded" in err
    monkeypatch.setenv("BRACKETFORGE_STATE_CAP", "2")
    assert _run(capsys, ["enumerate", "--format", FOUR])[0] == 1
    assert _run(capsys, ["enumerate", "--format", FOUR, "--state-cap", "100"])[0] == 0


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["validate"],
    ["validate", "--format", FOUR, "--signature", "4,0"],
    ["enumerate", "--format", FOUR, "--model", "bt"],
    ["enumerate", "--format", FOUR, "--model", "matrix"],
    ["build", "--signature", "4,x"],
    ["compare"],
])
def test_usage_errors(argv, capsys):
    code, out, err = _run(capsys, argv)
    assert code == 2 and out == ""
    assert "usage:" in err


def test_domain_errors(capsys):
    assert _run(capsys, ["build", "--signature", "3,0"])[0] == 1
    assert _run(capsys, ["swiss", "--teams", "6", "--rounds", "2"])[0] == 1
    assert _run(capsys, ["validate", "--format", "/nonexistent.fmt"])[0] == 1
    assert _run(capsys, ["render", "--signature", "4,0", "--dot", "/nonexistent/x.dot"])[0] == 1


def test_render_dynamic_refused(tmp_path, capsys):
    f = tmp_path / "r.fmt"
    f.write_text('format "r" { policy reseed signature [4, 0] }')
    code, _, err = _run(capsys, ["render", "--format", str(f)])
    assert code == 1 and "static" in err
    code, out, _ = _run(capsys, ["validate", "--format", str(f)])
    assert code == 0 and out.startswith("ok")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bracketforge", "swiss", "--teams", "4",
                           "--rounds", "2", "--out", "csv"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "wins,losses,teams\n2,0,1\n1,1,2\n0,2,1\n"
