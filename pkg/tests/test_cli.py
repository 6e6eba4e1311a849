import csv
import io
import json
import shutil
import subprocess
import sys

import pytest

from uchi.cli import CENTER_CSV, main
from uchi.liealg import to_json

from conftest import algebra


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_center_json(capsys):
    code, out, _ = run(capsys, "center", "--algebra", "sl2", "--p", "3", "--chi", "e")
    assert code == 0
    doc = json.loads(out)
    assert (doc["dim_center"], doc["p_to_ell"], doc["regular"], doc["consistent"]) == (3, 3, True, True)


def test_center_csv_header_and_row(capsys):
    code, out, _ = run(capsys, "center", "--algebra", "sl2", "--p", "5", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == CENTER_CSV and len(rows) == 2
    assert rows[1][:8] == ["zero", "5", "sl2", "3", "1", "3", "false", "7"]
    assert rows[1][-1] == ""


def test_sweep_is_deterministic(capsys, tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"s{k}.json"
        code, _, _ = run(capsys, "sweep", "--algebra", "gl2", "--p", "3", "--output", str(path),
                         "--meta", str(tmp_path / f"m{k}.json"))
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    doc = json.loads(outs[0])
    assert [r["label"] for r in doc] == sorted(r["label"] for r in doc)
    assert "elapsed_ms" in json.loads((tmp_path / "m0.json").read_text())


def test_threads_do_not_change_output(capsys):
    _, a, _ = run(capsys, "sweep", "--algebra", "sl2", "--p", "5", "--format", "csv")
    _, b, _ = run(capsys, "sweep", "--algebra", "sl2", "--p", "5", "--format", "csv", "--threads", "2")
    assert a == b and len(a.splitlines()) == 5


def test_timing_goes_to_stderr(capsys):
    code, out, err = run(capsys, "center", "--algebra", "sl2", "--p", "3", "--format", "csv", "--timing")
    assert code == 0 and out.splitlines()[1].split(",")[-1].isdigit()
    assert "elapsed_ms" in json.loads(err.strip().splitlines()[-1])


def test_not_very_good_prime_is_input_error(capsys):
    code, out, err = run(capsys, "sweep", "--algebra", "sl3", "--p", "3")
    assert code == 1 and not out and "p=3 is not very good for sl_3" in err


@pytest.mark.parametrize("argv", [
    ["center", "--algebra", "sl2", "--p", "4"],
    ["center", "--algebra", "sl2"],
    ["center", "--p", "3"],
    ["center", "--algebra", "sl2", "--p", "3", "--chi", "[1, 2]"],
    ["center", "--algebra", "sl2", "--p", "3", "--chi", "{bad"],
    ["center", "--algebra", "sl2", "--p", "3", "--chi", "unknown-name"],
    ["kw", "--algebra", "sl2", "--p", "3", "--chi", '{"chi_s": [0, 0, 0], "chi_n": [0, 1, 0]}'],
    ["tensor", "--algebra", "sl2", "--p", "3"],
])
def test_input_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and not out and err


def test_budget_exit_code(capsys):
    code, out, err = run(capsys, "center", "--algebra", "sl3", "--p", "5", "--no-reduce")
    assert code == 2 and "budget" in err
    code, _, _ = run(capsys, "center", "--algebra", "sl2", "--p", "5", "--no-reduce", "--budget", "3^3")
    assert code == 2


def test_inconsistency_exit_code(capsys, monkeypatch):
    from uchi import centers
    real = centers.center_dimension

    def broken(g, chi=None, **kw):
        res = real(g, chi, **kw)
        res.dim += 1
        return res

    monkeypatch.setattr(centers, "center_dimension", broken)
    code, out, err = run(capsys, "center", "--algebra", "sl2", "--p", "3", "--chi", "e")
    assert code == 3 and json.loads(out)["consistent"] is False
    assert "consistency check failed" in err


def test_chi_file_formats(capsys, tmp_path):
    f = tmp_path / "chi.json"
    f.write_text(json.dumps({"coeffs": [1, 0, 0]}))
    _, a, _ = run(capsys, "center", "--algebra", "sl2", "--p", "3", "--chi", str(f))
    _, b, _ = run(capsys, "center", "--algebra", "sl2", "--p", "3", "--chi", "[1, 0, 0]")
    assert json.loads(a)["dim_center"] == json.loads(b)["dim_center"] == 3
    f.write_text(json.dumps({"chi_s": [0, 2, 0], "chi_n": [0, 0, 0]}))
    code, out, _ = run(capsys, "kw", "--algebra", "sl2", "--p", "3", "--chi", str(f))
    doc = json.loads(out)
    assert code == 0 and doc["match"] and doc["d"] == 1


def test_algebra_file_import(capsys, tmp_path):
    f = tmp_path / "mysl2.json"
    f.write_text(to_json(algebra("sl2", 5)))
    code, out, _ = run(capsys, "center", "--algebra-file", str(f), "--chi", "h")
    assert code == 1  # named representatives belong to catalog algebras only
    code, out, _ = run(capsys, "center", "--algebra-file", str(f), "--chi", "[0, 0, 0]")
    assert code == 0 and json.loads(out)["dim_center"] == 7
    code, _, err = run(capsys, "center", "--algebra-file", str(f), "--p", "3")
    assert code == 1 and "disagrees" in err


def test_algebra_file_rejected_when_invalid(capsys, tmp_path):
    doc = json.loads(to_json(algebra("sl2", 5)))
    doc["brackets"][0][2][0][1] = (doc["brackets"][0][2][0][1] + 1) % 5
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(doc))
    code, out, err = run(capsys, "validate", "--algebra-file", str(f))
    assert code == 1 and not out


def test_validate_and_uenv(capsys):
    code, out, _ = run(capsys, "validate", "--algebra", "sp4", "--p", "3")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert doc["axioms"][-1]["axiom"].startswith("jacobson_vs_matrix")
    code, out, _ = run(capsys, "uenv", "--algebra", "sl2", "--p", "3", "--chi", "zero", "--chi", "e",
                       "--format", "csv")
    assert code == 0 and out.splitlines()[1:] == ["zero,50,true,true", "e,50,true,true"]


def test_census_csv(capsys):
    code, out, _ = run(capsys, "census", "--algebra", "sl2", "--p", "3", "--exhaustive")
    assert code == 0 and out == "dim_stab,count\n1,26\n3,1\n"
    _, a, _ = run(capsys, "census", "--algebra", "sl3", "--p", "5", "--samples", "500", "--seed", "2")
    _, b, _ = run(capsys, "census", "--algebra", "sl3", "--p", "5", "--samples", "500", "--seed", "2")
    assert a == b


def test_probe_and_support_and_tensor(capsys):
    code, out, err = run(capsys, "probe", "--algebra", "sl2", "--p", "3", "--all-lines", "--format", "csv")
    rows = out.splitlines()
    assert code == 0 and rows[0] == "line,chi0,psi,t,dim_center" and len(rows) == 1 + 13 * 3
    assert "F_p-points" in err
    code, out, _ = run(capsys, "support", "--algebra", "gl2", "--p", "3", "--chi", "central")
    assert code == 0 and json.loads(out)["equal"]
    code, out, _ = run(capsys, "tensor", "--algebra", "sl2+torus1", "--p", "3")
    doc = json.loads(out)
    assert code == 0 and (doc["dim_center"], doc["dim_center_1"], doc["dim_center_2"]) == (12, 4, 3)


@pytest.mark.skipif(shutil.which("uchi") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["uchi", "center", "--algebra", "sl2", "--p", "3", "--chi", "h"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["dim_center"] == 3
    proc = subprocess.run([sys.executable, "-m", "uchi.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("uchi ")
