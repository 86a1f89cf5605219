import csv
import json
import subprocess
import sys

import pytest

import dlcurves.cli as cli
from dlcurves import fixtures


def run(tmp_path, *argv):
    report = tmp_path / "report.json"
    code = cli.run([*argv, "--report", str(report)])
    return code, json.loads(report.read_text()) if report.exists() else None


def test_generate_equations_suzuki(tmp_path):
    out = tmp_path / "eqs.json"
    code, rep = run(tmp_path, "generate-equations", "--family", "suzuki", "--out", str(out))
    assert code == 0 and rep["ok"]
    assert sum(len(v) for v in json.loads(out.read_text())["sets"].values()) == 5
    assert rep["field"]["modulus"] == [1, 1, 0, 1]
    assert "suzuki_equations.json" in rep["fixtures"]
    assert all(c["source"] for c in rep["checks"])


def test_deterministic_reports_are_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert cli.run(["verify-all", "--family", "hermitian", "--deterministic", "--report", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "timing_seconds" not in json.loads(a.read_text())


def test_valuations_csv(tmp_path):
    out = tmp_path / "v.csv"
    code, rep = run(tmp_path, "valuations", "--family", "suzuki", "--out", str(out))
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert [r["function"] for r in rows] == ["1", "x", "y", "z", "w"]
    assert [int(r["nu_infinity"]) for r in rows] == [0, -8, -10, -12, -13]


def test_semigroup_csv(tmp_path):
    out = tmp_path / "s.csv"
    code, _ = run(tmp_path, "semigroup", "--family", "suzuki", "--out", str(out))
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 28
    assert sum(r["status"] == "gap" for r in rows) == 14
    assert {r["witness"] for r in rows if r["value"] in ("8", "16", "0")} == {"g8", "g8*g8", "one"}


def test_check_failure_exits_1(tmp_path, monkeypatch):
    monkeypatch.setitem(cli.PUBLISHED_COUNTS, ("hermitian", 3, 1), 29)
    code, rep = run(tmp_path, "count-points", "--family", "hermitian", "--ext", "1")
    assert code == 1 and not rep["ok"]
    failed = [c for c in rep["checks"] if not c["passed"]]
    assert failed[0]["expected"] == 29 and failed[0]["actual"] == 28


def test_usage_errors_exit_2(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.run(["count-points", "--bogus"])
    assert exc.value.code == 2
    assert cli.run(["semigroup", "--family", "ree", "--m", "2"]) == 2
    assert cli.run(["verify-automorphisms", "--family", "hermitian"]) == 2
    assert cli.run(["count-points", "--family", "ree", "--ext", "9"]) == 2


def test_corrupt_fixture_exits_2(tmp_path, monkeypatch, capsys):
    real = fixtures._read_bytes
    monkeypatch.setattr(fixtures, "_read_bytes",
                        lambda n: real(n) + b"\n" if n == "suzuki_equations.json" else real(n))
    assert cli.run(["generate-equations", "--family", "suzuki"]) == 2
    assert "checksum" in capsys.readouterr().err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dlcurves.cli", "curve-info", "--family", "ree", "--deterministic"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    rep = json.loads(proc.stdout)
    assert rep["data"]["genus"] == 3627
