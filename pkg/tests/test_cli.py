import json
import subprocess
import sys

import jsonschema
import pytest

from ffsalem.cli import (
    CSV_COLUMNS,
    CSV_VERSION_LINE,
    EXPECTATION_SCHEMA,
    SEARCH_SCHEMA,
    SUMMARY_SCHEMA,
    run,
)


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_phi_paraboloid(capsys):
    code, out, _ = call(capsys, "phi", "--p", "5", "--d", "2", "--set", "paraboloid")
    assert code == 0
    assert "phi=2.2360680" in out and "ratio=1.0000000" in out


def test_bounds_main_threshold(capsys):
    code, out, _ = call(capsys, "bounds", "--p", "7", "--d", "2", "--delta", "0.3",
                        "--epsilon", "1", "main-threshold")
    assert code == 0 and out.startswith("21.39341")


def test_bounds_other_quantities(capsys):
    code, out, _ = call(capsys, "bounds", "--n", "49", "--m", "8", "--epsilon", "1",
                        "hayes-threshold", "--format", "json")
    assert code == 0 and json.loads(out)["value"] == pytest.approx(22.3193413)
    code, out, _ = call(capsys, "bounds", "--n", "100", "--delta", "0.5", "chebyshev")
    assert out.startswith("0.0400000")
    code, out, _ = call(capsys, "bounds", "--N", "100", "--mu2", "100", "--alpha", "30",
                        "--lambda", "0.15", "deviation", "--format", "json")
    assert json.loads(out)["value"] == pytest.approx(0.2107984491)
    code, out, _ = call(capsys, "bounds", "--n", "49", "--delta", "0.3", "--epsilon",
                        "1", "lambda")
    assert "lambda_valid=False" in out
    code, out, _ = call(capsys, "bounds", "--p", "2", "--d", "1", "--xi", "1",
                        "cosine-identities", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["square_identities_apply"] is False


def test_experiment_percolation(capsys):
    code, out, _ = call(capsys, "experiment", "percolation", "--p", "7", "--d", "2",
                        "--delta", "0.3", "--epsilon", "1", "--trials", "2000",
                        "--seed", "42", "--jobs", "1")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SUMMARY_SCHEMA)
    assert doc["pass"] is True and doc["master_seed"] == 42


def test_experiment_csv(capsys, tmp_path):
    code, out, _ = call(capsys, "experiment", "size", "--p", "7", "--d", "2",
                        "--delta", "0.3", "--trials", "50", "--format", "csv")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == CSV_VERSION_LINE
    assert lines[1] == ",".join(CSV_COLUMNS)
    assert len(lines) == 52
    rec = tmp_path / "r.csv"
    code, out, _ = call(capsys, "experiment", "uniform", "--p", "7", "--d", "2",
                        "--m", "12", "--epsilon", "1", "--trials", "40",
                        "--records", str(rec))
    assert rec.read_text().splitlines()[1] == ",".join(CSV_COLUMNS)
    jsonschema.validate(json.loads(out), SUMMARY_SCHEMA)


def test_experiment_expectation_and_lemma_schema(capsys):
    code, out, _ = call(capsys, "experiment", "expectation", "--p", "5", "--d", "2",
                        "--delta", "0.5", "--trials", "3000", "--xi", "1,1")
    jsonschema.validate(json.loads(out), EXPECTATION_SCHEMA)
    code, out, _ = call(capsys, "experiment", "lemma", "--family", "rademacher",
                        "--N", "100", "--alpha", "30", "--lambda", "0.15",
                        "--trials", "5000")
    doc = json.loads(out)
    jsonschema.validate(doc, SUMMARY_SCHEMA)
    assert code == 0 and doc["theoretical_bound"] == pytest.approx(0.2107984491)
    code, out, err = call(capsys, "experiment", "lemma", "--N", "10", "--alpha", "1",
                          "--lambda", "0.5", "--format", "csv")
    assert code == 2 and "no per-trial" in err


def test_bound_violation_exit_one(capsys, monkeypatch):
    from ffsalem import cli
    from ffsalem.harness import ExperimentSummary

    failing = ExperimentSummary(
        experiment="size", params={}, trials=10, exceed_count=9, empirical_prob=0.9,
        theoretical_bound=0.1, passed=False, wall_time=0.0, master_seed=0,
    )
    monkeypatch.setattr(cli, "_run_experiment", lambda args: failing)
    code, out, _ = call(capsys, "experiment", "size", "--p", "3", "--d", "1",
                        "--delta", "0.5")
    assert code == 1 and json.loads(out)["pass"] is False


def test_errors(capsys):
    code, _, err = call(capsys, "phi", "--p", "4", "--d", "2", "--set", "full")
    assert code == 2 and err.count("\n") == 1
    code, _, err = call(capsys, "phi", "--p", "5", "--d", "2", "--frobnicate")
    assert code == 2 and err.count("\n") == 1
    code, _, err = call(capsys, "explore", "--p", "7", "--d", "2", "--m", "6")
    assert code == 3 and "C(49, 6)" in err
    code, _, err = call(capsys, "construct", "--p", "2", "--d", "2", "paraboloid")
    assert code == 2


def test_budget_env(capsys, monkeypatch):
    monkeypatch.setenv("FFSALEM_BUDGET", "20")
    code, _, err = call(capsys, "phi", "--p", "5", "--d", "2", "--set", "full")
    assert code == 3


def test_point_file_roundtrip(capsys, tmp_path):
    code, out, _ = call(capsys, "sample", "--p", "7", "--d", "2", "--model",
                        "percolation", "--delta", "0.3", "--seed", "5", "--trial", "2")
    f = tmp_path / "pts.txt"
    f.write_text(out)
    code, a, _ = call(capsys, "phi", "--p", "7", "--d", "2", "--file", str(f))
    code, b, _ = call(capsys, "phi", "--p", "7", "--d", "2", "--sample", "percolation",
                      "--delta", "0.3", "--seed", "5", "--trial", "2")
    assert code == 0 and a == b
    f.write_text("# header\n1\n2\n1\n")
    code, _, err = call(capsys, "phi", "--p", "7", "--d", "2", "--file", str(f))
    assert code == 2 and "duplicate" in err


def test_construct_and_dft(capsys):
    code, out, _ = call(capsys, "construct", "--p", "3", "--d", "2", "sphere", "--r",
                        "1", "--emit", "points")
    assert sorted(out.splitlines()) == ["0 1", "0 2", "1 0", "2 0"]
    code, out, _ = call(capsys, "construct", "--p", "3", "--d", "2", "subspace",
                        "--basis", "1,0", "--emit", "bitmap")
    assert out.strip() == "111000000"
    code, out, _ = call(capsys, "dft", "--p", "3", "--d", "2", "--set", "subspace",
                        "--basis", "1,0")
    rows = out.splitlines()
    assert rows[0] == "xi,coords,real,imag,modulus"
    mods = [float(r.split(",")[-1]) for r in rows[1:]]
    assert [round(m, 9) for m in mods] == [3, 0, 0, 3, 0, 0, 3, 0, 0]


def test_explore_json(capsys):
    code, out, _ = call(capsys, "explore", "--p", "5", "--d", "1", "--m", "2",
                        "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, SEARCH_SCHEMA)
    assert doc["best_set"] == [0, 1]


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ffsalem.cli", "phi", "--p", "3", "--d", "2", "--set",
         "point"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and "phi=1.0000000" in proc.stdout
