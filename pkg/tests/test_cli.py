import csv
import json
import math

import numpy as np
import pytest

from qsplit.cli import run_command
from qsplit.documents import family_to_doc, machine_from_doc
from qsplit.machine import construct_machine
from qsplit.simulator import nogo_witness, run_split, sample_measurement
from tests.helpers import PI, family

R2 = 1 / math.sqrt(2)


def write_family(tmp_path, thetas, phis, name="family.json"):
    path = tmp_path / name
    path.write_text(json.dumps(family_to_doc(family(thetas, phis), label="test")))
    return str(path)


def run(argv, capsys):
    code = run_command(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_feasible(tmp_path, capsys):
    path = write_family(tmp_path, (0, PI), (0, PI))
    code, out, _ = run(["analyze", path, "--mode", "tensor"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["feasible"] is True
    assert doc["mode"] == "tensor" and doc["tol"] == 1e-9
    assert doc["gamma_star"] == 1.0


def test_analyze_require_feasible_exit_3(tmp_path, capsys):
    path = write_family(tmp_path, (0.3, 1.1, 2.0), (0, 1, 2))
    code, out, _ = run(["analyze", path, "--require-feasible"], capsys)
    assert code == 3
    assert json.loads(out)["independent"] is False


def test_gamma_matrix_mode(tmp_path, capsys):
    path = write_family(tmp_path, (0, PI), (0, PI / 2))
    code, out, _ = run(["gamma", path, "--mode", "matrix"], capsys)
    assert code == 0
    assert json.loads(out)["gamma_star"] == pytest.approx(2 - math.sqrt(2), abs=1e-8)
    code, out, _ = run(["gamma", path, "--per-state"], capsys)
    assert json.loads(out)["gammas"] == pytest.approx([1.0, 1.0])


def test_malformed_input_exit_2(tmp_path, capsys):
    bad = tmp_path / "notjson.txt"
    bad.write_text("theta = 1")
    code, _, err = run(["analyze", str(bad)], capsys)
    assert code == 2
    assert err.startswith("error: malformed-input: ")

    shape = tmp_path / "shape.json"
    shape.write_text(json.dumps({"states": [{"theta": 1}]}))
    assert run(["analyze", str(shape)], capsys)[0] == 2

    angle = tmp_path / "angle.json"
    angle.write_text(json.dumps({"states": [{"theta": 4.0, "phi": 0}]}))
    code, _, err = run(["analyze", str(angle)], capsys)
    assert code == 2 and err.startswith("error: angle-out-of-range: ")

    assert run(["analyze", str(tmp_path / "missing.json")], capsys)[0] == 2
    assert run(["frobnicate"], capsys)[0] == 2


def test_normalize_angles_flag(tmp_path, capsys):
    path = tmp_path / "wrapped.json"
    path.write_text(json.dumps({"states": [{"theta": 0, "phi": 0}, {"theta": PI, "phi": 2 * PI + PI}]}))
    assert run(["analyze", str(path)], capsys)[0] == 2
    code, out, _ = run(["analyze", str(path), "--normalize-angles"], capsys)
    assert code == 0 and json.loads(out)["feasible"] is True


def test_construct_simulate_round_trip(tmp_path, capsys):
    fam_path = write_family(tmp_path, (0.6, 2.2), (0.4, 3.9))
    machine_path = tmp_path / "machine.json"
    code, _, _ = run(["construct", fam_path, "--gammas", "0.3,0.25", "--out", str(machine_path)], capsys)
    assert code == 0

    doc = json.loads(machine_path.read_text())
    assert doc["dims"] == {"A": 2, "B": 2, "P": 3}
    assert len(doc["U"]) == 12 and len(doc["U"][0][0]) == 2
    assert doc["defects"]["unitarity"] <= 1e-9

    in_process = construct_machine(family((0.6, 2.2), (0.4, 3.9)), [0.3, 0.25])
    loaded = machine_from_doc(doc)
    assert np.array_equal(loaded.U, in_process.U)

    for i in range(2):
        code, out, _ = run(["simulate", str(machine_path), "--state-index", str(i),
                            "--shots", "5000", "--seed", "11"], capsys)
        assert code == 0
        res = json.loads(out)
        ref = run_split(in_process, i)
        assert res["success_prob"] == pytest.approx(ref.success_prob, abs=1e-9)
        assert res["fidelity_target"] == pytest.approx(ref.fidelity_target, abs=1e-9)
        assert res["frequency"] == sample_measurement(in_process, i, 5000, 11)

    code, out, _ = run(["witness", str(machine_path), f"--coeffs={R2},0,{R2},0"], capsys)
    assert code == 0
    assert json.loads(out)["fidelity"] == pytest.approx(nogo_witness(in_process, [R2, R2]).fidelity, abs=1e-12)


def test_outputs_are_deterministic(tmp_path, capsys):
    fam_path = write_family(tmp_path, (0.6, 2.2), (0.4, 3.9))
    outs = []
    for k in range(2):
        m = tmp_path / f"m{k}.json"
        run(["construct", fam_path, "--gammas", "0.3,0.25", "--out", str(m)], capsys)
        _, sim, _ = run(["simulate", str(m), "--state-index", "0", "--shots", "999", "--seed", "5"], capsys)
        outs.append((m.read_text(), sim))
    assert outs[0] == outs[1]


def test_construct_infeasible_and_mismatch_exit_3(tmp_path, capsys):
    path = write_family(tmp_path, (0, PI), (0, PI / 2))
    out_path = str(tmp_path / "m.json")
    code, _, err = run(["construct", path, "--gammas", "0.9,0.9", "--mode", "matrix", "--out", out_path], capsys)
    assert code == 3 and err.startswith("error: infeasible: ")
    code, _, err = run(["construct", path, "--gammas", "0.5,0.5", "--mode", "matrix", "--out", out_path], capsys)
    assert code == 3 and err.startswith("error: gram-mismatch: ")
    code, _, _ = run(["construct", path, "--gammas", "0.5", "--out", out_path], capsys)
    assert code == 2


def test_witness_argument_errors(tmp_path, capsys):
    fam_path = write_family(tmp_path, (0, PI), (0, PI / 2))
    m = tmp_path / "m.json"
    run(["construct", fam_path, "--gammas", "1,1", "--out", str(m)], capsys)
    assert run(["witness", str(m), "--coeffs=1,0"], capsys)[0] == 2
    assert run(["witness", str(m), "--coeffs=0,0,0,0"], capsys)[0] == 2
    code, out, _ = run(["witness", str(m), f"--coeffs={R2},0,{R2},0"], capsys)
    assert json.loads(out)["fidelity"] == pytest.approx(0.625, abs=1e-9)


def test_simulate_rejects_non_machine(tmp_path, capsys):
    path = write_family(tmp_path, (0, PI), (0, PI))
    assert run(["simulate", path, "--state-index", "0"], capsys)[0] == 2


def test_scan_csv(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    code, _, _ = run(["scan", "--theta2-steps", "3", "--phi2-steps", "4", "--fixed-theta1", "0",
                      "--fixed-phi1", "0", "--mode", "matrix", "--out", str(out)], capsys)
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["theta1", "phi1", "theta2", "phi2", "gamma_star"]
    assert len(rows) == 1 + 12
    grid = [(float(r[2]), float(r[3])) for r in rows[1:]]
    assert grid == sorted(grid)
    # theta2 = pi, phi2 = pi/2 is the matrix-mode example with gamma* = 2 - sqrt(2).
    cell = next(r for r in rows[1:] if float(r[2]) == PI and float(r[3]) == PI / 2)
    assert float(cell[4]) == pytest.approx(2 - math.sqrt(2), abs=1e-8)
    # The duplicate of the fixed state reports zero.
    assert float(rows[1][4]) == 0.0


def test_oracle_command(tmp_path, capsys):
    path = write_family(tmp_path, (PI / 2, PI / 2), (0, PI / 2))
    code, out, _ = run(["oracle", path, "--gammas", "1,1"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["tensor_mode_deviation"] <= 1e-10
    assert doc["matrix_mode_deviation"] >= 0.1
    assert np.array(doc["constructed"]).shape == (2, 2, 2)


def test_tolerance_env_and_flag(tmp_path, capsys, monkeypatch):
    path = write_family(tmp_path, (0, PI), (0, PI))
    monkeypatch.setenv("QSPLIT_TOL", "1e-7")
    _, out, _ = run(["analyze", path], capsys)
    assert json.loads(out)["tol"] == 1e-7
    _, out, _ = run(["analyze", path, "--tol", "1e-11"], capsys)
    assert json.loads(out)["tol"] == 1e-11
    monkeypatch.setenv("QSPLIT_TOL", "abc")
    assert run(["analyze", path], capsys)[0] == 2


def test_report_floats_round_trip(tmp_path, capsys):
    path = write_family(tmp_path, (0.123456789012345, 2.5), (1.0, 5.0))
    _, out, _ = run(["analyze", path], capsys)
    doc = json.loads(out)
    assert doc["family"][0]["theta"] == 0.123456789012345
    assert doc["version"] == "0.1.0"
