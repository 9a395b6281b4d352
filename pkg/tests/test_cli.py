import json
import os
from pathlib import Path

import pytest

from boolelab.cli import main

GOLDEN = Path(__file__).parent / "golden"
SUBCOMMANDS = ["run", "bounds", "feasible", "label", "report"]


@pytest.fixture(autouse=True)
def fixed_width(monkeypatch):
    monkeypatch.setenv("COLUMNS", "100")
    monkeypatch.delenv("BOOLELAB_OUT", raising=False)


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bounds_lg_setting_only(capsys):
    code, out, _ = call(capsys, "bounds", "--expr", "lg", "--labeling", "setting-only")
    assert code == 0
    assert "min: -1\n" in out and "nontrivial: true\n" in out


def test_bounds_json_and_csv(capsys):
    code, out, _ = call(capsys, "bounds", "--expr", "lg", "--labeling", "fully-distinct", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["min"] == -3 and data["nontrivial"] is False and data["cyclicity"]["has_cycle"] is False
    code, out, _ = call(capsys, "bounds", "--expr", "a@1*b@2+b@1*c@2", "--format", "csv")
    assert out.splitlines()[1] == "setting-only,-2,2,-2,2,false,3,false"


def test_bounds_capacity_exit_code(capsys):
    expr = "+".join(f"x{i}*y{i}" for i in range(13))
    code, _, err = call(capsys, "bounds", "--expr", expr)
    assert code == 2 and "26" in err
    code, _, _ = call(capsys, "bounds", "--expr", "lg", "--labeling", "fully-distinct", "--max-variables", "4")
    assert code == 2


def test_run_two_doctors(capsys, tmp_path):
    code, out, _ = call(capsys, "run", "two-doctors-evenodd", "--n", "1000", "--seed", "7", "--out", str(tmp_path), "--format", "json")
    assert code == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["correlations"]["gamma_mean"] == -3.0
    assert json.loads(out) == report
    assert (tmp_path / "log.csv").read_text().startswith("trial,station,setting,time,value\n")
    assert (tmp_path / "summary.csv").read_text().splitlines()[0] == "term,estimate,count,std_error"
    assert len((tmp_path / "log.jsonl").read_text().splitlines()) == 2001


def test_run_out_dir_from_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("BOOLELAB_OUT", str(tmp_path / "env"))
    assert call(capsys, "run", "three-doctors", "--n", "12")[0] == 0
    assert (tmp_path / "env" / "report.json").exists()


def test_run_assert_respected(capsys):
    assert call(capsys, "run", "two-doctors-evenodd", "--n", "30", "--assert-respected")[0] == 3
    code, _, _ = call(capsys, "run", "two-doctors-evenodd", "--n", "30", "--assert-respected", "--labeling", "setting-station-parity")
    assert code == 0


def test_run_list(capsys):
    code, out, _ = call(capsys, "run", "--list")
    assert code == 0 and "two-doctors-evenodd" in out


def test_run_experiment_file(capsys):
    path = Path(__file__).resolve().parents[1] / "experiments" / "two-doctors-evenodd.json"
    code, out, _ = call(capsys, "run", "--experiment", str(path), "--n", "60", "--format", "csv")
    assert code == 0 and out.splitlines()[1].startswith("0,-1.0,20,")


def test_feasible_lg_infeasible(capsys):
    code, out, _ = call(capsys, "feasible", "--expr", "lg", "--labeling", "setting-only", "--targets", "-1,-1,-1")
    assert code == 0 and out.splitlines()[0] == "infeasible"


def test_feasible_json_and_problem_file(capsys, tmp_path):
    code, out, _ = call(capsys, "feasible", "--expr", "lg", "--labeling", "fully-distinct", "--targets", "-1,-1,-1", "--format", "json")
    verdict = json.loads(out)
    assert verdict["feasible"] is True and abs(sum(w["probability"] for w in verdict["witness"]) - 1) < 1e-9
    problem = tmp_path / "p.json"
    problem.write_text(json.dumps({"expression": {"terms": [[["a", "1"], ["b", "2"]]]}, "labeling": "setting-only", "targets": [0.5]}))
    code, out, _ = call(capsys, "feasible", "--problem", str(problem), "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "probability,a,b"


def test_feasible_bad_targets(capsys):
    assert call(capsys, "feasible", "--expr", "lg", "--targets", "0,0")[0] == 1
    assert call(capsys, "feasible", "--expr", "lg", "--targets", "x,y")[0] == 1
    assert call(capsys, "feasible", "--expr", "lg")[0] == 1


def test_label_expression_and_descriptor(capsys):
    code, out, _ = call(capsys, "label", "--expr", "lg", "--labeling", "fully-distinct", "--format", "json")
    assert code == 0 and json.loads(out)["count"] == 6
    code, out, _ = call(capsys, "label", "--setting", "b", "--station", "Lyon", "--time", "5", "--labeling", "setting-station-parity")
    assert out == "b/Lyon/odd\n"


def test_report_from_saved_log(capsys, tmp_path):
    call(capsys, "run", "two-doctors-evenodd", "--n", "99", "--out", str(tmp_path))
    code, out, _ = call(capsys, "report", str(tmp_path / "log.jsonl"), "--format", "json")
    assert code == 0 and json.loads(out)["correlations"]["gamma_mean"] == -3.0
    assert call(capsys, "report", str(tmp_path / "log.jsonl"), "--assert-respected")[0] == 3


@pytest.mark.parametrize(
    "argv",
    [["bogus"], ["bounds", "--nope"], ["bounds", "--labeling", "colour"], ["run", "no-such-scenario"], ["run"], ["run", "three-doctors", "--n", "0"], []],
)
def test_usage_errors_exit_1(capsys, argv):
    assert call(capsys, *argv)[0] == 1


def test_same_argv_same_bytes(capsys, tmp_path):
    outs = []
    for d in ("x", "y"):
        code, out, _ = call(capsys, "run", "quantum-singlet-pairs", "--n", "3000", "--out", str(tmp_path / d), "--format", "json")
        outs.append(out)
    assert outs[0] == outs[1]
    for f in ("report.json", "log.jsonl", "log.csv", "summary.csv"):
        assert (tmp_path / "x" / f).read_bytes() == (tmp_path / "y" / f).read_bytes()


@pytest.mark.parametrize("cmd", SUBCOMMANDS)
def test_help_snapshot(capsys, cmd):
    code, out, _ = call(capsys, cmd, "--help")
    assert code == 0
    snap = GOLDEN / f"help_{cmd}.txt"
    if os.environ.get("BOOLELAB_UPDATE_SNAPSHOTS"):
        snap.write_text(out)
    assert out == snap.read_text()
    for flag in ("--format", "--labeling"):
        assert flag in out
