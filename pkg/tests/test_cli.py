import json
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "berezin.cli"]


def run_cli(*args, **kw):
    return subprocess.run(CLI + list(args), capture_output=True, text=True,
                          timeout=600, **kw)


def test_unknown_experiment_is_usage_error():
    res = run_cli("check", "no-such-thing")
    assert res.returncode == 2
    assert "unknown experiment" in res.stderr


def test_bad_override_is_usage_error():
    res = run_cli("check", "m-bound", "-p", "oops")
    assert res.returncode == 2


def test_mbound_check_passes(tmp_path):
    out = tmp_path / "report.json"
    res = run_cli("check", "m-bound", "-p", "samples=20000",
                  "--output", str(out))
    assert res.returncode == 0, res.stderr
    doc = json.loads(out.read_text())
    assert doc["schema_version"] == 1
    assert doc["pass"] is True
    assert all(set(r) >= {"name", "observed", "provenance", "pass"}
               for r in doc["rows"])


def test_report_determinism(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        res = run_cli("check", "m-bound", "-p", "samples=20000",
                      "--output", str(out))
        assert res.returncode == 0
        doc = json.loads(out.read_text())
        doc.pop("metadata")
        outs.append(json.dumps(doc, sort_keys=True))
    assert outs[0] == outs[1]


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "m-bound",
                               "parameters": {"samples": 20000},
                               "format": "json"}))
    res = run_cli("check", "m-bound", "--config", str(cfg),
                  "-p", "samples=25000")
    assert res.returncode == 0


def test_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "m-bound", "bogus": 1}))
    res = run_cli("check", "m-bound", "--config", str(cfg))
    assert res.returncode == 2


def test_csv_report_roundtrip(tmp_path):
    out = tmp_path / "report.json"
    res = run_cli("check", "m-bound", "-p", "samples=20000",
                  "--output", str(out))
    assert res.returncode == 0
    res2 = run_cli("report", "--input", str(out), "--format", "csv")
    assert res2.returncode == 0
    header = res2.stdout.splitlines()[0]
    assert header.startswith("name,observed,reference,provenance")


def test_sweep_emits_grid_table(tmp_path):
    out = tmp_path / "sweep.csv"
    res = run_cli("sweep", "m-bound", "--grid", "samples=20000,30000",
                  "--output", str(out))
    assert res.returncode == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("samples,")
    assert len(lines) == 1 + 2 * 3  # two grid points x three rows


def test_calibrate_haar():
    res = run_cli("calibrate", "haar")
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert doc["kappa"] == pytest.approx(doc["closed_form"], rel=1e-7)
