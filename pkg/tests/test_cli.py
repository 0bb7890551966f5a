import csv
import json

import numpy as np
import pytest
import yaml

from lindblad_forge.cli import main
from lindblad_forge.constraints import full_validate
from lindblad_forge.evolve import EvolutionConfig, analytic_dephase3, propagate, uniform_superposition
from lindblad_forge.dissipator import build_phenomenological
from lindblad_forge.specfile import (
    ReportDocument,
    SpecFileError,
    load_density_matrix,
    load_system_spec,
    parse_system_spec,
    trajectory_rows,
)


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else yaml.safe_dump(doc))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


EXAMPLE1 = {
    "dimension": 3,
    "gamma": [[0, 1, 0], [0, 0, 0], [0, 0, 0]],
    "Gamma": [[0, 0.5, 0], [0.5, 0, 0], [0, 0, 0]],
}
EXAMPLE2 = {"dimension": 3, "Gamma": [[0, 1, 0], [1, 0, 0], [0, 0, 0]]}
LAMBDA = {"preset": {"name": "lambda3_symmetric", "params": {"gamma": 1.0, "dephasing": 0.5, "alpha": 2.0}}}


# --- spec files ---------------------------------------------------------------


def test_parse_full_spec():
    spec = parse_system_spec({
        "dimension": 2,
        "gamma": [[0, 1], [0, 0]],
        "Gd": [[0, 0.1], [0.1, 0]],
        "hamiltonian": [[[1, 0], [0, 0.5]], [[0, -0.5], [-1, 0]]],
        "unit_scale": "MHz",
    })
    assert spec.N == 2
    assert spec.rates.Gamma[0, 1] == pytest.approx(0.6)
    assert spec.rates.hamiltonian[0, 1] == 0.5j
    assert spec.unit_scale == "MHz"


def test_missing_dephasing_means_none():
    spec = parse_system_spec({"dimension": 3, "gamma": [[0, 1, 0], [0, 0, 0], [0, 0, 0]]})
    assert spec.rates.Gamma[0, 1] == pytest.approx(0.5)
    assert spec.rates.Gamma[1, 2] == pytest.approx(0.5)


@pytest.mark.parametrize("doc,fragment", [
    ([1, 2], "mapping"),
    ({"dimension": 3, "colour": 1}, "unknown key"),
    ({"dimension": 1}, "dimension"),
    ({"dimension": True}, "dimension"),
    ({"dimension": 2, "gamma": [[0, 1]]}, "gamma"),
    ({"dimension": 2, "gamma": [[0, "x"], [0, 0]]}, "gamma[0][1]"),
    ({"dimension": 2, "Gamma": [[0, 1], [1, 0]], "Gd": [[0, 1], [1, 0]]}, "at most one"),
    ({"preset": "bogus"}, "unknown preset"),
    ({"preset": {"name": "tripod", "params": {"beta": 9.0}}}, "beta"),
    ({"preset": "tripod", "dimension": 3}, "N=4"),
])
def test_malformed_specs(doc, fragment):
    with pytest.raises(SpecFileError) as info:
        parse_system_spec(doc)
    assert fragment in str(info.value)


def test_yaml_syntax_error_has_location(tmp_path):
    path = write(tmp_path, "bad.yaml", "dimension: 3\ngamma: [[0, 1\n")
    with pytest.raises(SpecFileError, match="line"):
        load_system_spec(path)


def test_density_matrix_file(tmp_path):
    path = write(tmp_path, "rho.yaml", {"rho0": [[0.5, [0, 0.5]], [[0, -0.5], 0.5]]})
    rho = load_density_matrix(path, 2)
    assert rho[0, 1] == 0.5j
    bare = write(tmp_path, "bare.yaml", [[1, 0], [0, 0]])
    assert load_density_matrix(bare).shape == (2, 2)


@pytest.mark.parametrize("rho,fragment", [
    ([[0.5, 0.5], [0, 0.5]], "Hermitian"),
    ([[0.5, 0], [0, 0.6]], "trace"),
    ([[1, 0, 0], [0, 0, 0], [0, 0, 0]], "rows"),
])
def test_malformed_density_matrix(tmp_path, rho, fragment):
    path = write(tmp_path, "rho.yaml", {"rho0": rho})
    with pytest.raises(SpecFileError, match=fragment):
        load_density_matrix(path, 2)


def test_report_document_round_trip():
    spec = parse_system_spec(EXAMPLE1)
    doc = ReportDocument.from_constraints("validate", 3, full_validate(spec.rates), unit_scale="kHz")
    doc.kossakowski_spectrum = [0.0, 1.0]
    doc.messages.append("note")
    again = ReportDocument.from_json(doc.to_json())
    assert again == doc
    assert again.to_dict() == json.loads(doc.to_json())
    assert "FAIL" in doc.to_text()


# --- commands -------------------------------------------------------------------


def test_validate_first_counterexample(tmp_path, capsys):
    code, out, _ = run(capsys, "validate", write(tmp_path, "ex1.yaml", EXAMPLE1))
    assert code == 1
    report = json.loads(out)
    assert report["cp_ok"] is False
    assert any(k.startswith("Eq27") for k, ok in report["verdicts"].items() if not ok)
    assert report["margins"]["spectral"] < 0


def test_validate_negative_gamma_is_a_violation(tmp_path, capsys):
    code, out, _ = run(capsys, "validate", write(tmp_path, "n.yaml", {"dimension": 2, "gamma": [[0, -1], [0, 0]]}))
    assert code == 1
    assert json.loads(out)["verdicts"]["gamma>=0"] is False


def test_validate_tripod_and_empty(tmp_path, capsys):
    code, out, _ = run(capsys, "validate", write(tmp_path, "t.yaml", {"preset": {"name": "tripod", "params": {"alpha": 1, "beta": 1}}}))
    assert code == 0 and json.loads(out)["preset"] == "tripod"
    code, out, _ = run(capsys, "validate", write(tmp_path, "e.yaml", {"dimension": 3}))
    assert code == 0
    assert json.loads(out)["kossakowski_spectrum"] == [0.0] * 8


def test_validate_text_format_and_report_file(tmp_path, capsys):
    report_path = tmp_path / "r.json"
    code, out, _ = run(capsys, "validate", write(tmp_path, "ex1.yaml", EXAMPLE1), "--format", "text", "--report", str(report_path))
    assert code == 1
    assert out.startswith("validate: N=3 cp_ok=False")
    assert ReportDocument.from_json(report_path.read_text()).cp_ok is False


def test_validate_reports_equation_labels(tmp_path, capsys):
    code, out, _ = run(capsys, "validate", write(tmp_path, "d.yaml", {"preset": "degenerate4_clebsch_gordan"}))
    assert code == 0
    keys = json.loads(out)["verdicts"]
    assert {"spectral", "Eq31-det", "Eq32", "Eq34(13+24)", "Eq35(12*34)"} <= set(keys)


def test_input_errors_exit_2(tmp_path, capsys):
    code, _, err = run(capsys, "validate", write(tmp_path, "bad.yaml", "dimension: [\n"))
    assert code == 2 and "line" in err
    code, _, err = run(capsys, "validate", str(tmp_path / "missing.yaml"))
    assert code == 2 and "cannot read" in err
    code, _, _ = run(capsys, "frobnicate")
    assert code == 2


def test_decompose_ladder_identity(tmp_path, capsys):
    code, out, _ = run(capsys, "decompose", write(tmp_path, "l.yaml", {"preset": "ladder3"}))
    assert code == 0
    Gp = np.array(json.loads(out)["decay_induced"])
    assert Gp[0, 1] + Gp[0, 2] == pytest.approx(Gp[1, 2])


def test_decompose_decay_only_input(tmp_path, capsys):
    doc = {"dimension": 3, "gamma": [[0, 1, 0], [0, 0, 1], [0, 0, 0]]}
    code, out, _ = run(capsys, "decompose", write(tmp_path, "p.yaml", doc))
    report = json.loads(out)
    assert code == 0
    assert np.allclose(report["pure_dephasing"], 0)
    assert np.allclose(report["reduced_spectrum"], 0)


def test_decompose_clebsch_gordan(tmp_path, capsys):
    code, out, _ = run(capsys, "decompose", write(tmp_path, "cg.yaml", {"preset": {"name": "degenerate4_clebsch_gordan", "params": {"gamma": 2.0}}}))
    assert code == 0
    assert json.loads(out)["decay_induced"][1][3] == pytest.approx(2.0)


def test_lindblad_lambda_channels(tmp_path, capsys):
    code, out, _ = run(capsys, "lindblad", write(tmp_path, "l.yaml", LAMBDA))
    assert code == 0
    report = json.loads(out)
    assert len(report["channels"]) == 4
    assert report["residual"] < 1e-9
    rates = sorted(c["rate"] for c in report["channels"])
    assert rates == pytest.approx(sorted([2 * 0.5 / 3, 1.0, 0.5, 0.5]))


def test_lindblad_amplitude_damping(tmp_path, capsys):
    doc = {"dimension": 2, "gamma": [[0, 1], [0, 0]]}
    code, out, _ = run(capsys, "lindblad", write(tmp_path, "a.yaml", doc))
    report = json.loads(out)
    assert code == 0 and len(report["channels"]) == 1
    assert np.allclose(report["channels"][0]["operator"], [[[0, 0], [1, 0]], [[0, 0], [0, 0]]], atol=1e-12)


def test_lindblad_on_non_cp_model(tmp_path, capsys):
    code, out, _ = run(capsys, "lindblad", write(tmp_path, "ex1.yaml", EXAMPLE1))
    assert code == 1
    assert "validate" in json.loads(out)["messages"][0]


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def test_evolve_first_counterexample(tmp_path, capsys):
    out_csv = tmp_path / "ex1.csv"
    code, _, err = run(capsys, "evolve", write(tmp_path, "ex1.yaml", EXAMPLE1), "--rho0", "uniform",
                       "--t-final", "5", "--steps", "500", "--out", str(out_csv))
    assert code == 1 and "warning" in err
    header, data = read_csv(out_csv)
    assert header == ["t", "lambda_1", "lambda_2", "lambda_3", "trace_residual", "hermiticity_residual"]
    assert data.shape == (501, 6)
    assert np.all(data[1:, 1] < 0)
    assert np.all(np.diff(data[:, 1:4], axis=1) >= 0)


def test_evolve_second_counterexample_with_state_file(tmp_path, capsys):
    rho_path = write(tmp_path, "rho.yaml", {"rho0": np.full((3, 3), 1 / 3).tolist()})
    out_csv = tmp_path / "ex2.csv"
    code, _, _ = run(capsys, "evolve", write(tmp_path, "ex2.yaml", EXAMPLE2), "--rho0", rho_path,
                     "--t-final", "5", "--steps", "50", "--out", str(out_csv))
    assert code == 1
    _, data = read_csv(out_csv)
    assert np.all(data[1:, 1] < 0)
    for row in data:
        lam = np.linalg.eigvalsh(analytic_dephase3(uniform_superposition(3), 1.0, row[0]))
        assert np.allclose(row[1:4], lam, atol=1e-8)


def test_evolve_valid_lambda_stays_positive(tmp_path, capsys):
    out_csv = tmp_path / "l.csv"
    code, _, _ = run(capsys, "evolve", write(tmp_path, "l.yaml", LAMBDA), "--rho0", "uniform",
                     "--t-final", "10", "--steps", "100", "--method", "rk4", "--out", str(out_csv))
    assert code == 0
    _, data = read_csv(out_csv)
    assert data[:, 1].min() >= -1e-9
    assert data[:, 4].max() <= 1e-9 and data[:, 5].max() <= 1e-9


def test_evolve_csv_is_deterministic(tmp_path, capsys):
    spec = write(tmp_path, "l.yaml", LAMBDA)
    texts = []
    for k in range(2):
        path = tmp_path / f"out{k}.csv"
        run(capsys, "evolve", spec, "--rho0", "uniform", "--t-final", "2", "--steps", "20", "--out", str(path))
        texts.append(path.read_text())
    assert texts[0] == texts[1]
    first_value = texts[0].splitlines()[1].split(",")[1]
    assert "e" in first_value and len(first_value.split("e")[0].replace("-", "").replace(".", "")) >= 12


def test_evolve_input_errors(tmp_path, capsys):
    spec = write(tmp_path, "l.yaml", LAMBDA)
    bad_rho = write(tmp_path, "rho.yaml", {"rho0": [[1, 0], [0, 0]]})
    code, _, _ = run(capsys, "evolve", spec, "--rho0", bad_rho, "--t-final", "1", "--out", str(tmp_path / "x.csv"))
    assert code == 2
    code, _, _ = run(capsys, "evolve", spec, "--rho0", "uniform", "--t-final", "-1", "--out", str(tmp_path / "x.csv"))
    assert code == 2
    neg = write(tmp_path, "neg.yaml", {"dimension": 2, "gamma": [[0, 1], [-0.5, 0]]})
    code, _, _ = run(capsys, "evolve", neg, "--rho0", "uniform", "--t-final", "1", "--out", str(tmp_path / "x.csv"))
    assert code == 2


def test_trajectory_rows_format():
    traj = propagate(uniform_superposition(2), build_phenomenological(parse_system_spec({"dimension": 2}).rates),
                     EvolutionConfig(1.0, 2))
    header, rows = trajectory_rows(traj)
    assert header[0] == "t" and len(rows) == 3
    assert rows[0][0] == "0.000000000000000e+00"


def test_presets_commands(capsys):
    code, out, _ = run(capsys, "presets", "list")
    assert code == 0 and len(out.strip().splitlines()) == 7
    code, out, _ = run(capsys, "presets", "show", "tripod")
    assert code == 0 and "beta" in out and "alpha(4-alpha) >= beta >= 0" in out
    code, _, err = run(capsys, "presets", "show", "bogus")
    assert code == 2 and "unknown preset" in err
    code, _, _ = run(capsys, "presets", "show")
    assert code == 2


def test_version(capsys):
    assert main(["--version"]) == 0
