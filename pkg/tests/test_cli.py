import json
import subprocess
import sys

import pytest

from specradius.cli import main
from specradius.io import write_matrix_market, write_structure

from systems import companion, diag12, row5, single_edge


@pytest.fixture
def files(tmp_path):
    write_matrix_market(tmp_path / "companion.mtx", companion())
    write_structure(tmp_path / "row5.json", row5())
    write_matrix_market(tmp_path / "diag.mtx", diag12())
    write_structure(tmp_path / "one.json", single_edge())
    return tmp_path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_radius(files, capsys):
    code, out, _ = run(["radius", "--matrix", files / "companion.mtx", "--structure", files / "row5.json"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["radius"] == pytest.approx(10.1465, abs=0.05)
    assert doc["diagnostics"]["converged"] and doc["diagnostics"]["restarts_used"] > 0
    assert len(doc["delta"]) == 5 and doc["trace"][0]["eps"] == 1.0


def test_radius_zero_init_to_file(files, capsys):
    out = files / "r.json"
    argv = ["radius", "--matrix", files / "companion.mtx", "--structure", files / "row5.json",
            "--init", "zero", "--restarts", "0", "-o", out]
    assert run(argv, capsys)[0] == 0
    doc = json.loads(out.read_text())
    assert doc["radius"] == pytest.approx(10.1465, abs=0.05)
    assert len(doc["trace"]) == 5


def test_abscissa(files, capsys):
    code, out, _ = run(["abscissa", "--matrix", files / "diag.mtx", "--structure", files / "one.json",
                        "--epsilon", "0.5"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["alpha"] == pytest.approx(-0.5, abs=1e-9)
    assert doc["diagnostics"]["r_over_ell"] > 0


def test_sweep_csv(files, capsys):
    code, out, _ = run(["sweep", "--matrix", files / "diag.mtx", "--structure", files / "one.json",
                        "--eps", "0,0.25,0.5"], capsys)
    lines = out.strip().split("\n")
    assert code == 0 and lines[0] == "eps,alpha,converged,iterations"
    assert [float(l.split(",")[1]) for l in lines[1:]] == pytest.approx([-1, -0.75, -0.5])


def test_sweep_json(files, capsys):
    code, out, _ = run(["sweep", "--matrix", files / "diag.mtx", "--structure", files / "one.json",
                        "--eps", "0.1,0.2", "--format", "json"], capsys)
    assert code == 0 and len(json.loads(out)["points"]) == 2


def test_sample_is_byte_identical(files, capsys):
    outs = []
    for name in ("a.csv", "b.csv"):
        argv = ["sample", "--matrix", files / "companion.mtx", "--structure", files / "row5.json",
                "--epsilon", "10.1465", "--samples", "1000", "--seed", "7", "-o", files / name]
        assert run(argv, capsys)[0] == 0
        outs.append((files / name).read_bytes())
    assert outs[0] == outs[1] and outs[0].startswith(b"re,im,sample_index\n")


def test_generate(files, capsys):
    code, out, _ = run(["generate", "companion", "--coeffs", "13,69,187,260,150"], capsys)
    assert code == 0 and out.startswith("%%MatrixMarket matrix array real general")
    code, out, _ = run(["generate", "rows", "--n", "5", "--rows", "5", "--hi", "0"], capsys)
    doc = json.loads(out)
    assert doc["n"] == 5 and len(doc["edges"]) == 5 and doc["edges"][0]["hi"] == 0.0
    target = files / "circ.mtx"
    assert run(["generate", "circulant", "--n", "10", "--diag", "-0.1", "--sup", "1", "--sub", "-1", "-o", target], capsys)[0] == 0
    assert target.read_text().startswith("%%MatrixMarket")


def test_missing_file_exit_2(files, capsys):
    code, _, err = run(["radius", "--matrix", files / "nope.mtx", "--structure", files / "row5.json"], capsys)
    assert code == 2 and json.loads(err)["exit_code"] == 2


def test_parse_error_exit_2(files, capsys):
    (files / "bad.mtx").write_text("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 1\n")
    code, _, err = run(["abscissa", "--matrix", files / "bad.mtx", "--structure", files / "one.json",
                        "--epsilon", "1"], capsys)
    assert code == 2 and json.loads(err)["error"] == "UnsupportedField"


def test_dimension_mismatch_exit_2(files, capsys):
    code, _, err = run(["abscissa", "--matrix", files / "diag.mtx", "--structure", files / "row5.json",
                        "--epsilon", "1"], capsys)
    assert code == 2 and json.loads(err)["error"] == "InvalidStructure"


def test_bad_zeta_exit_2(files, capsys):
    code, _, _ = run(["radius", "--matrix", files / "diag.mtx", "--structure", files / "one.json",
                      "--zeta", "1.5"], capsys)
    assert code == 2


def test_solver_error_exit_1(files, capsys):
    H = {"n": 5, "rows": [1, 5], "lo": -1e-6, "hi": 1e-6}
    (files / "tight.json").write_text(json.dumps(H))
    code, _, err = run(["abscissa", "--matrix", files / "companion.mtx", "--structure", files / "tight.json",
                        "--epsilon", "1", "--restarts", "0"], capsys)
    assert code == 1 and json.loads(err)["error"] == "FullySaturated"


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "specradius", "radius", "--matrix", str(files / "missing.mtx"),
         "--structure", str(files / "row5.json")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2 and json.loads(proc.stderr)["error"] == "FileNotFoundError"
