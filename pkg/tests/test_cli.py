"""End-to-end CLI tests: dispatch, exit codes, determinism, reporting."""

import csv
import json
import subprocess
import sys
import time
from pathlib import Path

import pytest

from cbnorm_lab import cli

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"
SHIPPED = sorted(CONFIG_DIR.glob("*.json"))


def load(path):
    with open(path) as fh:
        return json.load(fh)


def run_cli(args):
    return cli.main([str(a) for a in args])


def stripped(record_path):
    record = load(record_path)
    record.pop("runtime_ms", None)
    return json.dumps(record, sort_keys=True)


def test_shipped_configs_exist():
    assert len(SHIPPED) >= 8


@pytest.mark.parametrize("config_path", SHIPPED, ids=lambda p: p.stem)
def test_shipped_config_runs_clean(config_path, tmp_path):
    command = load(config_path)["command"]
    out = tmp_path / "record.json"
    started = time.perf_counter()
    assert run_cli([command, "--config", config_path, "--out", out]) == 0
    assert time.perf_counter() - started < 60.0
    record = load(out)
    assert record["schema_version"] == 1
    assert record["command"] == command
    assert "runtime_ms" in record


def test_sandwich_record_reports_quotient_bound(tmp_path):
    out = tmp_path / "rec.json"
    assert run_cli(["sandwich", "--config", CONFIG_DIR / "sandwich_geometric.json", "--out", out]) == 0
    results = load(out)["results"]
    assert results["upper"] == 2.0
    assert results["lower"] <= 2.0
    assert results["gap"] == results["upper"] - results["lower"]


def test_estimate_identity_deterministic_bytes(tmp_path):
    config = CONFIG_DIR / "estimate_identity.json"
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli(["estimate", "--config", config, "--out", a]) == 0
    assert run_cli(["estimate", "--config", config, "--out", b]) == 0
    assert stripped(a) == stripped(b)


def test_seed_override_changes_record(tmp_path):
    config = CONFIG_DIR / "estimate_identity.json"
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli(["estimate", "--config", config, "--out", a]) == 0
    assert run_cli(["estimate", "--config", config, "--out", b, "--seed", "99"]) == 0
    assert load(a)["config"]["seed"] == 7
    assert load(b)["config"]["seed"] == 99


def test_schema_violation_exits_one(tmp_path, capsys):
    config = tmp_path / "bad.json"
    config.write_text(json.dumps({"command": "estimate", "function": {"kind": "power_series", "coeffs": [[1.0, 0.0]]}, "max_level": 2, "budget": 10}))
    assert run_cli(["estimate", "--config", config]) == 1
    err = capsys.readouterr().err
    assert "$" in err and "seed" in err


def test_bad_descriptor_exits_one(tmp_path, capsys):
    config = tmp_path / "bad.json"
    config.write_text(
        json.dumps({"command": "estimate", "function": {"kind": "mystery"}, "max_level": 1, "budget": 10, "seed": 1})
    )
    assert run_cli(["estimate", "--config", config]) == 1
    assert "error" in capsys.readouterr().err


def test_command_mismatch_exits_one(tmp_path, capsys):
    assert run_cli(["sandwich", "--config", CONFIG_DIR / "estimate_identity.json"]) == 1
    assert "declares command" in capsys.readouterr().err


def test_property_failure_exits_two(tmp_path):
    # A dictionary entry with an understated bound inflates the lower bound
    # past the certified upper bound; the record must flag the failure.
    config = json.loads((CONFIG_DIR / "gcb_duplicate_delta.json").read_text())
    config["dictionary"]["entries"][0]["bound"] = 0.1
    bad = tmp_path / "bad_gcb.json"
    bad.write_text(json.dumps(config))
    out = tmp_path / "rec.json"
    assert run_cli(["gcb", "--config", bad, "--out", out]) == 2
    assert load(out)["results"]["passed"] is False


def test_report_empty_is_header_only(tmp_path, capsys):
    assert run_cli(["report"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines == ["id,lower,upper,gap,levels"]


def test_report_rows_and_gap(tmp_path):
    records = []
    for name in ("estimate_identity.json", "sandwich_geometric.json", "separate_scalar.json"):
        out = tmp_path / f"rec_{name}"
        command = load(CONFIG_DIR / name)["command"]
        assert run_cli([command, "--config", CONFIG_DIR / name, "--out", out]) == 0
        records.append(out)
    summary = tmp_path / "summary.csv"
    assert run_cli(["report", *records, "--out", summary]) == 0
    with open(summary) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["id", "lower", "upper", "gap", "levels"]
    assert len(rows) == 4
    sandwich_row = rows[2]
    assert sandwich_row[0] == "moebius_quotient(power_series)"
    gap = float(sandwich_row[3])
    assert abs(gap - (float(sandwich_row[2]) - float(sandwich_row[1]))) < 1e-12


def test_report_skips_corrupt_records(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run_cli(["report", broken]) == 0
    captured = capsys.readouterr()
    assert "skipping" in captured.err
    assert captured.out.strip().splitlines() == ["id,lower,upper,gap,levels"]


def test_console_script_entry_point(tmp_path):
    out = tmp_path / "rec.json"
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "cbnorm_lab.cli",
            "separate",
            "--config",
            str(CONFIG_DIR / "separate_scalar.json"),
            "--out",
            str(out),
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert load(out)["results"]["found"] is True
