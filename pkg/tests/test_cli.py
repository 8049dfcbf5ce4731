import csv
import io
import json
import math
import os
import subprocess
import sys

import pytest

from fracsob.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_constants_K_report(capsys):
    code, out, _ = run(capsys, "constants", "--K", "--p", "2", "--n", "2", "--no-timestamp")
    assert code == 0
    report = json.loads(out)
    assert report["command"] == "constants" and report["passed"] is True
    (row,) = report["rows"]
    assert row["value"] == pytest.approx(math.pi, rel=1e-14)
    assert row["oracle_rel_err"] < 1e-6
    assert "generated_at" not in report
    assert set(report["versions"]) >= {"fracsob", "numpy", "scipy", "python"}


def test_constants_default_and_extras(capsys):
    code, out, _ = run(capsys, "constants", "--sigma", "0.5", "--n", "1", "--no-timestamp")
    rows = {r["name"]: r for r in json.loads(out)["rows"]}
    assert code == 0 and set(rows) == {"K", "M", "G"}
    assert rows["M"]["value"] == pytest.approx(math.pi, rel=1e-14)
    code, out, _ = run(capsys, "constants", "--limit", "--lambda", "--dir", "to_zero", "--no-timestamp")
    rows = {r["name"]: r for r in json.loads(out)["rows"]}
    assert rows["limit"]["value"] == pytest.approx(2.0)
    assert rows["lambda"]["value"] == pytest.approx(0.5)


def test_timestamp_present_by_default(capsys):
    _, out, _ = run(capsys, "constants", "--M")
    assert "generated_at" in json.loads(out)


def test_limit_command_passes(capsys):
    code, out, _ = run(capsys, "limit", "--fn", "affine", "--domain", "box:0,1", "--dir", "to_one", "--no-timestamp")
    assert code == 0
    summary = json.loads(out)["rows"][-1]
    assert summary["rel_err"] < 1e-3 and summary["reference"] == pytest.approx(1.0)


def test_invalid_limit_case_is_usage_error(capsys):
    code, _, err = run(capsys, "limit", "--fn", "gauss", "--domain", "rn:8", "--dir", "to_zero", "--k", "1")
    assert code == 2 and "error" in err


@pytest.mark.parametrize("argv", [["constants", "--badflag"], [], ["limit", "--dir", "sideways"],
                                  ["seminorm", "--fn", "nonsense"], ["suite", "--tol", "bogus=1"]])
def test_usage_errors_exit_2(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2 and out == ""


def test_tolerance_failure_exit_1(capsys):
    code, out, _ = run(capsys, "limit", "--fn", "affine", "--domain", "box:0,1", "--sigmas", "0.5,0.6",
                       "--extrapolation", "none", "--tol", "1e-9", "--no-timestamp")
    assert code == 1 and json.loads(out)["passed"] is False


def test_seminorm_against_registry(capsys):
    code, out, _ = run(capsys, "seminorm", "--fn", "gauss", "--domain", "rn:8", "--r", "0.5", "--no-timestamp")
    (row,) = json.loads(out)["rows"]
    assert code == 0 and row["value_p"] == pytest.approx(2 * math.pi, rel=1e-6)
    code, out, _ = run(capsys, "seminorm", "--fn", "affine", "--domain", "box:0,1", "--kind", "modulus",
                       "--t", "0.5", "--no-timestamp")
    assert code == 0 and json.loads(out)["rows"][0]["value_p"] > 0


def test_dini_and_spectral_commands(capsys):
    code, out, _ = run(capsys, "dini", "--fn", "affine", "--domain", "box:0,1", "--no-timestamp")
    row = json.loads(out)["rows"][0]
    assert code == 0 and row["reference"] == pytest.approx(1 / 3)
    code, out, _ = run(capsys, "spectral", "--fn", "gauss", "--n", "2", "--sigma", "0.5", "--split", "1,0.5",
                       "--no-timestamp")
    rows = json.loads(out)["rows"]
    assert code == 0 and rows[-1]["rel_err"] < 1e-8
    code, _, _ = run(capsys, "spectral", "--fn", "affine", "--sigma", "0.5")
    assert code == 2


def test_csv_output(capsys):
    code, out, _ = run(capsys, "constants", "--K", "--M", "--format", "csv", "--no-timestamp")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["name"] for r in rows] == ["K", "M"]
    assert float(rows[1]["value"]) == pytest.approx(math.pi / (math.gamma(2.0) * 1.0), rel=1e-14)


def test_output_file(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "constants", "--K", "--output", str(path), "--no-timestamp")
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["rows"][0]["name"] == "K"


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("FRACSOB_SEED", "17")
    _, out, _ = run(capsys, "constants", "--K", "--no-timestamp")
    assert json.loads(out)["config"]["seed"] == 17
    _, out, _ = run(capsys, "constants", "--K", "--seed", "3", "--no-timestamp")
    assert json.loads(out)["config"]["seed"] == 3
    monkeypatch.setenv("FRACSOB_SEED", "abc")
    assert main(["constants", "--K"]) == 2


def test_monte_carlo_report_is_byte_identical(capsys):
    argv = ["seminorm", "--fn", "gauss", "--domain", "rn:8", "--r", "0.5", "--method", "monte_carlo",
            "--order", "20000", "--seed", "5", "--tol", "1", "--no-timestamp"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    _, other, _ = run(capsys, *argv[:-4], "--seed", "6", "--tol", "1", "--no-timestamp")
    assert other != first


def test_module_entry_point():
    env = dict(os.environ, FRACSOB_SEED="0")
    proc = subprocess.run([sys.executable, "-m", "fracsob", "suite", "--only", "2", "--no-timestamp"],
                          capture_output=True, text=True, env=env, timeout=120)
    assert proc.returncode == 0
    assert "criterion  2 PASS" in proc.stderr
    assert json.loads(proc.stdout)["rows"][0]["passed"] is True
