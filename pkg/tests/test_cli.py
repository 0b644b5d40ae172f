import json
import subprocess
import sys

import pytest

from pclab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "heis(3)")
    data = json.loads(out)
    assert code == 0 and data["order"] == 27 and data["exponent"] == 3


def test_eval_accepts_catalog_names(capsys):
    code, out, _ = run(capsys, "eval", "ThmA(3,7)")
    assert json.loads(out)["order"] == 63


@pytest.mark.parametrize("kind,extra", [("omega", ["--p", "3"]), ("zeta", []),
                                        ("lambda", ["--p", "3", "--k", "1"]), ("M", ["--p", "3"])])
def test_series(capsys, kind, extra):
    code, out, _ = run(capsys, "series", "--kind", kind, *extra, "ypm(3,2)")
    assert code == 0 and json.loads(out)["terms"]


def test_series_needs_prime(capsys):
    code, _, err = run(capsys, "series", "--kind", "omega", "heis(3)")
    assert code == 4


def test_cores(capsys):
    code, out, _ = run(capsys, "cores", "--p", "5", "Heis5:C4")
    data = json.loads(out)
    assert data["sandwich"] and data["p_soluble"]


def test_fusion(capsys):
    code, out, _ = run(capsys, "fusion", "--p", "5", "--normalizer", "SL2(Z/25)")
    data = json.loads(out)
    assert code == 0 and data["controls"] is False and data["witness"]


def test_verify_formats(capsys):
    code, out, _ = run(capsys, "verify", "--theorem", "A", "--p", "2", "SL2(F5)")
    assert code == 0 and json.loads(out)["status"] == "hypothesisNotMet"
    code, out, _ = run(capsys, "verify", "--theorem", "C", "--p", "5", "--format", "csv", "heis(5)")
    assert out.splitlines()[0] == "theorem,kind,name,holds,status"
    code, out, _ = run(capsys, "verify", "--theorem", "props", "--p", "3", "--format", "text", "heis(3)")
    assert "props on heis(3): verified" in out


def test_verify_other_theorems(capsys):
    for theorem, expr in [("B", "sl2sylow(5,2)"), ("D", "heis(5)"), ("E", "Heis5:C4")]:
        code, out, _ = run(capsys, "verify", "--theorem", theorem, "--p", "5", expr)
        assert code == 0, out


def test_input_errors(capsys):
    assert run(capsys, "eval", "cyclic(")[0] == 4
    assert run(capsys, "verify", "--theorem", "Q", "--p", "3", "heis(3)")[0] == 4
    assert run(capsys, "catalog", "build", "nope")[0] == 4
    assert run(capsys, "verify", "--theorem", "C", "--p", "3", "cyclic(6)")[0] == 4


def test_cap_exit_code(capsys):
    assert run(capsys, "eval", "--max-order", "100", "sl2zmod(5,1)")[0] == 3


def test_catalog_list_and_build(capsys, tmp_path):
    code, out, _ = run(capsys, "catalog", "list")
    assert "SL2(Z/25)" in out
    snap = tmp_path / "g.pclg"
    code, out, _ = run(capsys, "catalog", "build", "Heis3", "--out", str(snap))
    assert code == 0 and snap.exists() and json.loads(out)["order"] == 27


def test_console_script_is_installed():
    res = subprocess.run([sys.executable, "-m", "pclab.cli", "eval", "cyclic(5)"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["order"] == 5
