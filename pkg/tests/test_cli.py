import json
import subprocess
import sys

import pytest

from hyperaut.cli import EXIT_DISAGREE, EXIT_INPUT, EXIT_OK, parse_coeffs, run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_classify_gl23(capsys):
    code, js, _ = call(capsys, "classify", "--coeffs=1,0,-5,0,-5,0,1")
    assert code == EXIT_OK
    assert js["verdict"]["full"] == "GL2(3)" and js["verdict"]["order"] == 48


def test_invariants_subset(capsys):
    code, js, _ = call(capsys, "invariants", "--coeffs", "1,0,0,0,0,0,1", "--names", "I2,I4")
    assert code == EXIT_OK and js["invariants"]["I2"] == "2/1" and set(js["invariants"]) == {"I2", "I4"}


def test_dihedral_values(capsys):
    code, js, _ = call(capsys, "dihedral", "--coeffs", "1,0,15,0,15,0,1")
    assert code == EXIT_OK and js["levels"][0]["values"] == ["6750/1", "450/1"]
    assert (js["n"], js["t"], js["kind"]) == (2, 3, "EvenPart")


def test_absolute_and_normalform(capsys):
    code, js, _ = call(capsys, "absolute", "--coeffs", "3,1,4,1,5,9,2,6,5,3,5,8,9")
    assert code == EXIT_OK and js["moduli_point"]["branch"] == "(i1, i2)"
    code, js, _ = call(capsys, "normalform", "--coeffs", "1,0,2,0,3,0,1")
    assert code == EXIT_OK and js["decomposition"]["kind"] == "EvenPart"


@pytest.mark.parametrize("argv", [
    ["classify", "--coeffs", "1,1"],
    ["classify", "--coeffs", "1,,2"],
    ["classify", "--coeffs", "1,x,2,3,4,5,6"],
    ["classify"],
    ["invariants", "--coeffs", "1,0,0,0,0,0,1", "--names", "I99"],
    ["family", "gen", "--row", "A5.1", "--genus", "5", "--lambda", "1"],
    ["family", "list"],
    ["nosuchcommand"],
])
def test_invalid_input(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == EXIT_INPUT and err


def test_disagreement_exit_code(capsys):
    code, js, _ = call(capsys, "classify", "--coeffs", "1,0,1,0,1,0,1", "--mode", "cross")
    assert code == EXIT_DISAGREE
    assert js["error"] == "route disagreement" and js["report"]["routes"]["Oracle"] == "D4"


def test_family_roundtrip(capsys, tmp_path):
    code, js, _ = call(capsys, "family", "gen", "--row", "A4.1", "--genus", "5", "--lambda", "7/2")
    assert code == EXIT_OK
    path = tmp_path / "curve.json"
    path.write_text(json.dumps(js))
    code, v, _ = call(capsys, "autgroup", "--curve", str(path))
    assert code == EXIT_OK and v["full"] == "Z2xA4" and v["order"] == 24
    code, v3, _ = call(capsys, "autgroup", "--algorithm3", "--curve", str(path))
    assert code == EXIT_OK and v3["full"] == "Z2xA4"


def test_family_list_and_table(capsys):
    code, js, _ = call(capsys, "family", "list", "--genus", "2")
    assert code == EXIT_OK and {"row": "S4.3", "group": "GL2(3)", "n": None, "delta": 0} in js
    code, js, _ = call(capsys, "table1", "--genus", "2")
    assert code == EXIT_OK and "GL2(3)" in {e["group"] for e in js}
    code, js, _ = call(capsys, "table1")
    assert code == EXIT_OK and len(js["rows"]) == 31


def test_output_is_deterministic(capsys):
    a = call(capsys, "classify", "--coeffs=1,0,-5,0,-5,0,1", "--mode", "cross")[1]
    b = call(capsys, "classify", "--coeffs=1,0,-5,0,-5,0,1", "--mode", "cross")[1]
    assert a == b


def test_radicand_coefficients():
    from hyperaut.exactnum import QuadExt
    assert parse_coeffs("1,0,3-2*sqrt(2)", 2) == [1, 0, QuadExt(3, -2, 2)]


def test_console_script_runs():
    out = subprocess.run([sys.executable, "-m", "hyperaut.cli", "classify", "--coeffs", "1,0,15,0,15,0,1"],
                         capture_output=True, text=True, timeout=120)
    assert out.returncode == 0 and json.loads(out.stdout)["verdict"]["full"] == "V6"
