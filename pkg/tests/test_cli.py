import csv
import io
import json
import math

import pytest

from quantum_cluster import emit_model, preset
from quantum_cluster.cli import SWEEP_COLUMNS, main

from conftest import E4


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_estimate_at_zero(capsys):
    code, out, _ = run_cli(capsys, "estimate", "--preset", "tfim", "--graph", "path:2", "--beta", "0")
    assert code == 0
    doc = json.loads(out)
    assert doc["log_z"]["re"] == pytest.approx(2 * math.log(2))
    assert doc["t_m"] == {"re": 0.0, "im": 0.0}
    assert doc["rigorous"] is True
    assert "seconds" not in doc["diagnostics"]


def test_compare_passes(capsys):
    beta = str(1 / (2 * E4))
    code, out, _ = run_cli(capsys, "compare", "--preset", "tfim", "--graph", "path:3",
                           "--param", "h=0.5", "--param", "J=0.5", "--beta", beta)
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert doc["relative_error"] <= 1e-3


def test_compare_failure_exit_code(capsys):
    code, out, _ = run_cli(capsys, "compare", "--preset", "tfim", "--graph", "path:4",
                           "--beta", "0.3", "--order", "2", "--force-region", "--epsilon", "1e-6")
    assert code == 3
    assert json.loads(out)["passed"] is False


def test_region_violation(capsys):
    code, out, err = run_cli(capsys, "estimate", "--preset", "tfim", "--graph", "path:3", "--beta", "0.5")
    assert code == 1 and out == ""
    assert "1/(e^4 Delta)" in err
    code, out, _ = run_cli(capsys, "estimate", "--preset", "tfim", "--graph", "path:3",
                           "--beta", "0.5", "--force-region", "--order", "3")
    assert code == 0 and json.loads(out)["rigorous"] is False


def test_invalid_inputs(capsys, tmp_path):
    assert run_cli(capsys, "estimate")[0] == 1
    assert run_cli(capsys, "estimate", "--preset", "tfim", "--graph", "blob:3")[0] == 1
    assert run_cli(capsys, "estimate", "--preset", "tfim", "--beta", "x")[0] == 1
    assert run_cli(capsys, "estimate", "--preset", "tfim", "--param", "q=1")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": 2}')
    assert run_cli(capsys, "estimate", "--model", str(bad))[0] == 1
    assert run_cli(capsys, "estimate", "--model", str(tmp_path / "missing.json"))[0] == 1


def test_resource_exit_code(capsys):
    code, _, err = run_cli(capsys, "exact", "--preset", "tfim", "--graph", "path:16")
    assert code == 2 and "cap" in err


def test_model_file_and_output(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(emit_model(preset("xxz", "cycle", n=4)))
    out_path = tmp_path / "result.json"
    code, out, _ = run_cli(capsys, "exact", "--model", str(path), "--beta", "0.1,0.05",
                           "--output", str(out_path))
    assert code == 0 and out == ""
    doc = json.loads(out_path.read_text())
    assert doc["dim"] == 16 and len(doc["eigenvalues"]) == 16
    assert doc["beta"] == {"re": 0.1, "im": 0.05}


def test_sweep_csv(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--preset", "random_hermitian", "--graph", "cycle:4",
                           "--beta", "0.009", "--steps", "4", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == SWEEP_COLUMNS
    assert [float(r["beta_re"]) for r in rows] == pytest.approx([0.00225, 0.0045, 0.00675, 0.009])
    assert all(float(r["rel_error"]) <= float(r["apriori_error"]) for r in rows)


def test_estimate_csv_single_row(capsys):
    code, out, _ = run_cli(capsys, "estimate", "--preset", "tfim", "--beta", "0.005", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 1
    assert "t_m_re" in rows[0]


def test_presets_listing(capsys):
    code, out, _ = run_cli(capsys, "presets")
    doc = json.loads(out)
    assert code == 0 and "tfim" in doc["presets"] and "grid" in doc["graphs"]


def test_threads_identical_output(capsys):
    argv = ["estimate", "--preset", "random_hermitian", "--graph", "grid:2x3", "--beta", "0.004"]
    _, a, _ = run_cli(capsys, *argv, "--threads", "1")
    _, b, _ = run_cli(capsys, *argv, "--threads", "4")
    assert a == b


def test_edgeless_model_document_is_strict_json(capsys, tmp_path):
    from quantum_cluster.model import SpinModel

    path = tmp_path / "edgeless.json"
    path.write_text(emit_model(SpinModel(("a", "b"), (), ())))
    code, out, _ = run_cli(capsys, "estimate", "--model", str(path), "--beta", "1")
    doc = json.loads(out, parse_constant=lambda c: pytest.fail(f"non-standard constant {c}"))
    assert code == 0 and doc["diagnostics"]["radius_bound"] is None
    assert doc["log_z"]["re"] == pytest.approx(2 * math.log(2))
