"""Scenario parsing, CLI subcommands, exit codes, and output determinism."""

import json
import math

import numpy as np
import pytest

from gwpdyn.cli import main
from gwpdyn.runner import CSV_COLUMNS, run_evolution
from gwpdyn.scenario import (
    ScenarioParseError,
    ScenarioValidationError,
    bundled_scenario_names,
    load_scenario,
    scenario_from_dict,
)

BUNDLED = ("coherent", "fig3", "fig4", "free", "omega_half", "omega_two",
           "piecewise")


def minimal_dict():
    return {
        "system": {"m": 1.0, "hbar": 1.0,
                   "omega": {"kind": "constant", "omega0": 1.0}},
        "initial": {"kind": "moments", "sigma_xx": 0.5, "sigma_pp": 0.5,
                    "sigma_xp": 0.0, "x": 1.0, "p": 0.0},
        "time": {"t_end": 1.0, "n_steps": 10},
    }


def read_csv(path):
    rows = path.read_text().splitlines()
    header = rows[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in rows[1:]])
    return header, data


# ---------------------------------------------------------------------------
# scenario loading
# ---------------------------------------------------------------------------

def test_bundled_names_are_complete():
    assert bundled_scenario_names() == [n + ".toml" for n in sorted(BUNDLED)]


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_scenarios_load(name):
    sc = load_scenario(name)
    assert sc.name == name
    assert sc.t_end > 0.0 and sc.n_steps >= 2


def test_load_json_alternative(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(minimal_dict()))
    sc = load_scenario(str(path))
    assert sc.name == "run"
    assert sc.initial_kind == "moments"
    assert math.isclose(sc.ermakov.alpha, 1.0, rel_tol=1e-12)


def test_missing_file_is_parse_error():
    with pytest.raises(ScenarioParseError):
        load_scenario("definitely_not_here.toml")


def test_malformed_toml_is_parse_error(tmp_path):
    path = tmp_path / "bad.toml"
    path.write_text("[system\n")
    with pytest.raises(ScenarioParseError):
        load_scenario(str(path))


def test_unsupported_suffix_is_parse_error(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("system: {}")
    with pytest.raises(ScenarioParseError):
        load_scenario(str(path))


def test_initial_kind_conversions():
    data = minimal_dict()
    data["initial"] = {"kind": "ermakov", "alpha": 1.0, "alpha_dot": 0.0,
                       "x": 1.0, "p": 0.0}
    sc = scenario_from_dict(data)
    assert math.isclose(sc.uncertainties.sigma_xx, 0.5, rel_tol=1e-12)
    data["initial"] = {"kind": "riccati", "c_r": 0.0, "c_i": 1.0,
                       "x": 1.0, "p": 0.0}
    sc = scenario_from_dict(data)
    assert math.isclose(sc.ermakov.alpha, 1.0, rel_tol=1e-12)
    assert math.isclose(sc.uncertainties.sigma_pp, 0.5, rel_tol=1e-12)


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("time"),
    lambda d: d["initial"].update(kind="wavefunction"),
    lambda d: d["initial"].update(sigma_xx=1.0),  # breaks the SR identity
    lambda d: d["initial"].pop("x"),
    lambda d: d["system"]["omega"].update(kind="chirp"),
    lambda d: d["time"].update(n_steps=1),
    lambda d: d["time"].update(n_steps=2.5),
    lambda d: d["time"].update(t_end=-1.0),
    lambda d: d.update(extra={"a": 1}),
    lambda d: d["initial"].update(alpha=1.0),  # key from another kind
    lambda d: d.update(outputs={"plots": ["holograms"]}),
    lambda d: d.update(integrator={"method": "euler"}),
])
def test_validation_rejections(mutate):
    data = minimal_dict()
    mutate(data)
    with pytest.raises(ScenarioValidationError):
        scenario_from_dict(data)


def test_riccati_initial_must_be_contracting_free():
    data = minimal_dict()
    data["initial"] = {"kind": "riccati", "c_r": 0.0, "c_i": -1.0,
                       "x": 0.0, "p": 0.0}
    with pytest.raises(ScenarioValidationError):
        scenario_from_dict(data)


def test_piecewise_profile_parses():
    data = minimal_dict()
    data["system"]["omega"] = {"kind": "piecewise",
                               "segments": [[0.0, 1.0], [5.0, 2.0]]}
    sc = scenario_from_dict(data)
    assert sc.system.omega.omega(6.0) == 2.0


# ---------------------------------------------------------------------------
# CLI subcommands and exit codes
# ---------------------------------------------------------------------------

def test_exit_code_parse_error(tmp_path, capsys):
    assert main(["evolve", "no_such_scenario.toml", "-o", str(tmp_path)]) == 1
    assert "not found" in capsys.readouterr().err


def test_exit_code_validation_error(tmp_path, capsys):
    path = tmp_path / "impure.toml"
    path.write_text(
        '[system]\nm = 1.0\nhbar = 1.0\n[system.omega]\nkind = "constant"\n'
        'omega0 = 1.0\n[initial]\nkind = "moments"\nsigma_xx = 1.0\n'
        'sigma_pp = 1.0\nsigma_xp = 0.0\nx = 0.0\np = 0.0\n[time]\n'
        't_end = 1.0\nn_steps = 10\n')
    assert main(["evolve", str(path), "-o", str(tmp_path)]) == 2
    assert "minimum-uncertainty" in capsys.readouterr().err


def test_exit_code_numerical_failure(tmp_path, capsys):
    # requesting the kernel exactly at a focus (t = pi for omega0 = 1)
    code = main(["propagate", "fig4", "--times", str(math.pi),
                 "-o", str(tmp_path)])
    assert code == 3
    assert "numerical failure" in capsys.readouterr().err


@pytest.mark.parametrize("name", BUNDLED)
def test_check_passes_on_bundled(name, capsys):
    assert main(["check", name]) == 0
    assert "passed" in capsys.readouterr().out


def test_scenarios_listing(capsys):
    assert main(["scenarios"]) == 0
    out = capsys.readouterr().out.split()
    assert out == [n + ".toml" for n in sorted(BUNDLED)]


def test_evolve_csv_schema_and_values(tmp_path):
    assert main(["evolve", "free", "-o", str(tmp_path)]) == 0
    header, data = read_csv(tmp_path / "free_timeseries.csv")
    assert header == list(CSV_COLUMNS)
    assert data.shape == (1001, len(CSV_COLUMNS))
    # row 200 sits at t ~ 2 where the width has grown to 5 sigma_xx(0)
    t = data[200, header.index("t")]
    assert abs(t - 2.0) < 1e-12
    assert abs(data[200, header.index("sigma_xx")] - 2.5) < 1e-9
    summary = json.loads((tmp_path / "free_summary.json").read_text())
    assert summary["scenario"] == "free"
    for key in ("max_sr_violation", "invariant_drift", "wronskian_drift",
                "moments", "cor"):
        assert key in summary
    assert summary["max_sr_violation"] < 1e-9


def test_evolve_coherent_traces_are_flat(tmp_path):
    assert main(["evolve", "coherent", "-o", str(tmp_path)]) == 0
    header, data = read_csv(tmp_path / "coherent_timeseries.csv")
    for col, val in (("sigma_xx", 0.5), ("sigma_pp", 0.5), ("sigma_xp", 0.0),
                     ("alpha", 1.0), ("C_I", 1.0), ("C_R", 0.0)):
        series = data[:, header.index(col)]
        assert float(np.max(np.abs(series - val))) < 1e-9
    summary = json.loads((tmp_path / "coherent_summary.json").read_text())
    assert summary["invariant_drift"] < 1e-9


def test_evolve_outputs_are_byte_identical(tmp_path):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    assert main(["evolve", "fig3", "-o", str(d1)]) == 0
    assert main(["evolve", "fig3", "-o", str(d2)]) == 0
    for name in ("fig3_timeseries.csv", "fig3_summary.json",
                 "fig3_moments.svg", "fig3_correlation.svg",
                 "fig3_squeezing.svg"):
        assert (d1 / name).read_bytes() == (d2 / name).read_bytes(), name


def test_vector_field_svg_annotations(tmp_path):
    out = tmp_path / "r.svg"
    assert main(["vector-field", "riccati", "--omega0", "1", "-o",
                 str(out)]) == 0
    text = out.read_text()
    assert text.count("fixed point") == 2
    out2 = tmp_path / "e.svg"
    assert main(["vector-field", "ermakov", "--omega0", "1", "-o",
                 str(out2)]) == 0
    assert out2.read_text().count("fixed point") == 1


def test_vector_field_is_deterministic(tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert main(["vector-field", "ermakov", "--omega0", "2", "-o", str(a)]) == 0
    assert main(["vector-field", "ermakov", "--omega0", "2", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_wigner_snapshot_outputs(tmp_path):
    times = ",".join(str(k * math.pi / 4.0) for k in (0, 1, 2, 3, 5, 6, 7, 8))
    assert main(["wigner", "fig4", "--times", times, "-o", str(tmp_path)]) == 0
    grids = sorted(tmp_path.glob("fig4_wigner_0?.csv"))
    svgs = sorted(tmp_path.glob("fig4_wigner_0?.svg"))
    assert len(grids) == 8 and len(svgs) == 8
    index = json.loads((tmp_path / "fig4_wigner_index.json").read_text())
    assert len(index) == 8
    # the sampled peak follows the classical ellipse of the centroid
    energies = [rec["classical_energy"] for rec in index]
    assert all(abs(e - 2.5) < 1e-9 for e in energies)
    peak_e = [0.5 * rec["peak_p"] ** 2 + 0.5 * rec["peak_x"] ** 2
              for rec in index]
    assert all(abs(e - 2.5) < 1e-6 for e in peak_e)


def test_wigner_binary_grid_option(tmp_path):
    assert main(["wigner", "free", "--times", "1.0", "--grid-format",
                 "binary", "-o", str(tmp_path)]) == 0
    from gwpdyn.wigner import grid_from_binary
    grid = grid_from_binary(tmp_path / "free_wigner_00.bin")
    assert grid.values.shape == (201, 201)
    assert abs(grid.normalization() - 1.0) < 1e-6


def test_wigner_rejects_bad_thread_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("RD_THREADS", "many")
    assert main(["wigner", "free", "--times", "1.0", "-o", str(tmp_path)]) == 2
    assert "RD_THREADS" in capsys.readouterr().err


def test_wigner_rejects_negative_times(tmp_path):
    assert main(["wigner", "free", "--times", "-1.0", "-o", str(tmp_path)]) == 2


def test_propagate_report(tmp_path, capsys):
    assert main(["propagate", "fig3", "-o", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "points compared" in out
    report = json.loads((tmp_path / "fig3_propagate.json").read_text())
    assert report["max_abs_dc"] < 1e-8
    assert report["max_abs_dx"] < 1e-8
    assert report["max_abs_dp"] < 1e-8
    assert report["n_points"] + report["n_skipped_focal"] == 2000


def test_propagate_explicit_times(tmp_path):
    assert main(["propagate", "fig3", "--times", "0.5,1.0,2.0",
                 "-o", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "fig3_propagate.json").read_text())
    assert report["n_points"] == 3
    assert report["t_first"] == 0.5 and report["t_last"] == 2.0


def test_propagate_times_outside_range(tmp_path):
    assert main(["propagate", "fig3", "--times", "1000.0",
                 "-o", str(tmp_path)]) == 2


def test_run_evolution_summary_extrema():
    result = run_evolution(load_scenario("fig3"))
    assert abs(result.summary["cor"]["max"] - 0.6) < 1e-3
    assert result.summary["cor"]["min"] < 1e-9
    assert abs(result.summary["moments"]["sigma_xx"]["min"] - 0.25) < 1e-6
    assert abs(result.summary["moments"]["sigma_xx"]["max"] - 1.0) < 1e-9
