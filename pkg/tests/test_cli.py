from __future__ import annotations

import json
import subprocess
import sys

import pytest

from defangmom.cli import dumps, main, table_style
from defangmom.exactnum import RadicalNumber


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_table_command_text(capsys):
    code, out = run(capsys, "table1")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 13
    assert "368" in lines[10] and "4*sqrt(5/3)" in lines[3]


def test_table_style():
    assert table_style(RadicalNumber.sqrt(15) * RadicalNumber.rational(4) / 3) == "4*sqrt(5/3)"
    assert table_style(RadicalNumber.sqrt(2) * 68) == "68*sqrt(2)"


def test_cg_and_racah(capsys):
    code, out = run(capsys, "cg", "1", "0", "1", "0", "0", "0", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["command"] == "cg" and doc["schema"] == 1
    code, out = run(capsys, "racah", "1", "1", "1", "1", "2", "1", "--format", "json")
    assert json.loads(out)["U"]["exact"] == "1/6*sqrt(15)"


def test_json_is_stable(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, _ = run(capsys, "jacobi", "--lambda", "2", "--format", "json", "--out", str(target))
    text = target.read_text()
    assert code == 0
    assert dumps(json.loads(text)) == text


def test_associativity(capsys):
    code, out = run(capsys, "associativity", "--order", "3", "--format", "json")
    assert code == 0 and json.loads(out)["verdict"] == "associative"


def test_casimir_compare(capsys):
    code, out = run(capsys, "casimir", "--order", "4", "--compare-paper", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "casimir"


def test_casimir_numeric_params(capsys):
    code, out = run(capsys, "casimir", "--params=-1/3,1/5", "--a0", "-1")
    assert code == 0


def test_quadrupole(capsys):
    code, out = run(capsys, "quadrupole", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["verdict"] == "non-associative at first order"
    assert doc["solution_space"] == "trivial"


def test_rep_so4(capsys):
    code, out = run(capsys, "rep", "--algebra", "so4", "--label", "1,0", "--params", "1", "--verify")
    assert code == 0


def test_rep_truncated_json(capsys, tmp_path):
    target = tmp_path / "rep.json"
    code, _ = run(capsys, "rep", "--algebra", "so31", "--label", "0,0.5i", "--params=-1,-1/100",
                  "--cutoff", "10", "--verify", "--json", str(target))
    doc = json.loads(target.read_text())
    assert code == 0
    assert doc["verification"]["ok"] and doc["verification"]["interior_lmax"] == "9"
    assert any("imaginary" in n for n in doc["notes"])


def test_rep_non_unitary_fails(capsys):
    code, out = run(capsys, "rep", "--algebra", "so4", "--label", "2,1", "--params=1,-1")
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["rep", "--algebra", "so4", "--label", "1,2"],
    ["cg", "1", "0", "1"],
    ["jacobi"],
    ["nosuch"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "defangmom.cli", "cg", "1/2", "1/2", "1/2", "-1/2", "1", "0"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "sqrt(2)" in res.stdout
