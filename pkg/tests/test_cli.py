import csv
import io
import json
import math
import subprocess
import sys

import pytest

from chromakit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_tables(capsys):
    code, out, _ = run(capsys, "tables", "--family", "legendre", "--order", "8")
    assert code == 0
    r = rows(out)
    assert r[0] == ["table", "n"] + [f"k{k}" for k in range(9)]
    assert len(r) == 1 + 2 * 9
    a11 = next(x for x in r if x[:2] == ["A", "1"])
    assert float(a11[3]) == pytest.approx(math.sqrt(3) / math.pi)


def test_kernel_grid_with_negative_start(capsys):
    code, out, _ = run(capsys, "kernel", "--family", "hermite", "--order", "2", "--grid", "-1:1:3")
    assert code == 0
    r = rows(out)
    assert r[0] == ["t", "K0", "K1", "K2"]
    assert [float(x[0]) for x in r[1:]] == [-1.0, 0.0, 1.0]
    assert float(r[2][1]) == 1.0


def test_expand_json(capsys):
    code, out, _ = run(capsys, "expand", "--order", "16", "--window", "32", "--seed", "7",
                       "--grid", "-4:4:801", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["seed"] == 7 and doc["meta"]["family"] == "legendre"
    assert doc["columns"][:5] == ["t", "f", "chromatic", "taylor", "E_n"]
    assert len(doc["rows"]) == 801


def test_filter_report_and_files(capsys, tmp_path):
    taps = tmp_path / "taps.csv"
    resp = tmp_path / "resp.csv"
    code, out, _ = run(capsys, "filter", "--order", "15", "--taps", "129", "--passband", "0.9",
                       "--emit-taps", str(taps), "--emit-response", str(resp))
    assert code == 0
    report = dict(rows(out)[1:])
    assert float(report["max_passband_error"]) <= 1.3e-4
    assert len(rows(taps.read_text())) == 130
    assert len(rows(resp.read_text())) > 100


def test_conjecture(capsys):
    code, out, _ = run(capsys, "conjecture", "--p", "0.3", "--omega-grid", "0.5", "--nmax", "10000")
    assert code == 0
    r = rows(out)
    assert r[0] == ["omega", "n", "cesaro_mean", "decade_ratio", "verdict"]
    assert r[-1][1] == "10000" and r[-1][4] == "bounded, positive"


def test_selftest_subset(capsys, tmp_path):
    code, out, _ = run(capsys, "selftest", "--only", "1,11")
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith("[")]
    assert len(lines) == 2 and all(l.startswith("[PASS]") for l in lines)


def test_deterministic_output(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["expand", "--seed", "3", "--window", "8", "--grid", "-2:2:41", "-o", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["tables"])
    assert e.value.code == 2
    capsys.readouterr()
    code, _, err = run(capsys, "kernel", "--grid", "1:2")
    assert code == 2
    assert json.loads(err)["subcommand"] == "kernel"
    code, _, err = run(capsys, "filter", "--taps", "128")
    assert code == 2


def test_order_cap_is_a_usage_error(capsys, monkeypatch):
    monkeypatch.delenv("CHROMAKIT_MAX_ORDER", raising=False)
    code, _, err = run(capsys, "tables", "--order", "60")
    assert code == 2
    assert json.loads(err)["error"] == "OrderCapError"
    monkeypatch.setenv("CHROMAKIT_MAX_ORDER", "60")
    code, _, _ = run(capsys, "tables", "--order", "60")
    assert code == 0


def test_numeric_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("CHROMAKIT_MAX_ORDER", "400")
    code, _, err = run(capsys, "tables", "--family", "herron", "--order", "200")
    assert code == 1
    rec = json.loads(err)
    assert rec["error"] == "NumericOverflowError" and rec["order"] == 178


def test_series_domain_error(capsys):
    code, _, err = run(capsys, "kernel", "--family", "herron", "--method", "series", "--grid", "0:2:5")
    assert code == 2
    assert json.loads(err)["error"] == "DomainError"


@pytest.mark.parametrize("sub", ["tables", "kernel", "expand", "filter", "conjecture", "selftest"])
def test_help_mentions_units(capsys, sub):
    with pytest.raises(SystemExit) as e:
        main([sub, "--help"])
    assert e.value.code == 0
    text = capsys.readouterr().out.lower()
    assert "unit" in text


def test_console_script_and_env_override(tmp_path):
    env = {"CHROMAKIT_MAX_ORDER": "50", "PATH": "/usr/bin:/bin"}
    res = subprocess.run([sys.executable, "-m", "chromakit.cli", "tables", "--order", "50", "--which", "A"],
                         capture_output=True, text=True, env=env)
    assert res.returncode == 0
    assert len(rows(res.stdout)) == 52
