import json

import numpy as np
import pandas as pd
import pytest

from tfdw.cli import main
from tfdw.constants import EXIT_CONFIG, EXIT_NOT_CONVERGED, EXIT_OK
from tfdw.curves.curve import CurveSample, EnergyCurve
from tfdw.curves.export import JSON, export
from tfdw.energy.potential import Atomic, NoPotential
from tfdw.grid.radial import RadialFunction, RadialGrid
from tfdw.grid.state_file import save_state
from tfdw.utils.config import RunConfig

HYDROGEN = ["--set", "constants.thomas_fermi=false", "--set", "constants.dirac=false",
            "--set", "constants.hartree=false", "--set", "potential.type=atomic", "--set", "potential.z=1"]
ATOMIC = ["--set", "potential.type=atomic", "--set", "potential.z=1"]


def artifact(directory, stem):
    found = sorted(directory.glob(f"{stem}-*.json"))
    assert len(found) == 1
    return json.loads(found[0].read_text())


def test_bad_key(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["--out", str(out), "--set", "solver.m=1", "minimize"]) == EXIT_CONFIG
    assert not out.exists()
    assert "configuration error" in capsys.readouterr().err


def test_bad_usage(tmp_path):
    assert main(["--out", str(tmp_path), "unknown"]) == EXIT_CONFIG
    assert main(["--out", str(tmp_path), "--jobs", "0", "curve"]) == EXIT_CONFIG


def test_energy_missing_state(tmp_path):
    assert main(["--out", str(tmp_path), "energy", str(tmp_path / "missing.json")]) == EXIT_CONFIG


def test_energy_of_zero_state(tmp_path, capsys):
    grid = RadialGrid(n=200)
    path = save_state(RadialFunction(grid, np.zeros(grid.n)), tmp_path / "zero.json")
    assert main(["--out", str(tmp_path), "energy", str(path)]) == EXIT_OK
    doc = artifact(tmp_path, "energy")
    assert all(value == 0.0 for value in doc["energy"].values())
    assert "total" in capsys.readouterr().out


def test_minimize_hydrogen(tmp_path):
    assert main(["--out", str(tmp_path), *HYDROGEN, "minimize"]) == EXIT_OK
    doc = artifact(tmp_path, "minimize")
    assert doc["converged"]
    assert doc["energy"]["total"] == pytest.approx(-0.25, rel=1e-3)
    assert doc["config_hash"] == RunConfig.load(overrides=HYDROGEN[1::2]).hash
    state = artifact(tmp_path, "state")
    assert state["meta"]["config_hash"] == doc["config_hash"]
    assert len(list(tmp_path.glob("state-*.dat"))) == 1


def test_minimize_not_converged(tmp_path):
    assert main(["--out", str(tmp_path), *ATOMIC, "--set", "solve.max_iter=1", "minimize"]) == EXIT_NOT_CONVERGED
    assert not artifact(tmp_path, "minimize")["converged"]


def test_minimize_is_deterministic(tmp_path):
    for name in ("a", "b"):
        assert main(["--out", str(tmp_path / name), *ATOMIC, "--set", "solve.m=0.5", "minimize"]) == EXIT_OK
    first = next((tmp_path / "a").glob("minimize-*.json")).read_bytes()
    second = next((tmp_path / "b").glob("minimize-*.json")).read_bytes()
    assert first == second


def test_output_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("TFDW_OUT", str(tmp_path / "env"))
    assert main([*HYDROGEN, "--set", "solve.m=0.5", "minimize"]) == EXIT_OK
    assert len(list((tmp_path / "env").glob("minimize-*.json"))) == 1


def test_curve(tmp_path):
    args = ["--out", str(tmp_path), *HYDROGEN, "--set", "curve.m_values=[0.25, 0.5, 1.0]"]
    assert main([*args, "curve"]) == EXIT_OK
    frame = pd.read_csv(next(tmp_path.glob("curve-*.csv")))
    assert list(frame.columns) == ["m", "energy", "residual", "converged"]
    assert len(frame) == 3
    assert np.allclose(frame["energy"], -frame["m"] / 4, rtol=1e-3)

    # resumed sweeps only solve the new mass
    assert main([*args[:-1], "curve.m_values=[0.25, 0.5, 1.0, 1.5]", "--resume", "curve"]) == EXIT_OK
    doc = artifact(tmp_path, "curve")
    assert [s["m"] for s in doc["samples"]] == [0.25, 0.5, 1.0, 1.5]


def synthetic_curves(tmp_path, free_grid=None):
    samples_v = [CurveSample(m=m, energy=e, residual=0.0, converged=True, kinetic=k)
                 for m, e, k in ((0.5, -0.18, 0.1), (1.0, -0.4, 0.3))]
    samples_0 = [CurveSample(m=m, energy=e, residual=0.0, converged=True)
                 for m, e in ((0.5, -0.004), (1.0, -0.01))]
    curve_v = EnergyCurve(potential=Atomic(z=1.0), samples=samples_v)
    curve_0 = EnergyCurve(potential=NoPotential(), samples=samples_0, grid=free_grid or RadialGrid())
    return (export(curve_v, tmp_path / "v.json", JSON), export(curve_0, tmp_path / "free.json", JSON))


def test_binding(tmp_path):
    path_v, path_0 = synthetic_curves(tmp_path)
    args = ["--out", str(tmp_path / "out"), *ATOMIC, "binding", "--potential-curve", str(path_v),
            "--free-curve", str(path_0)]
    assert main(args) == EXIT_OK
    doc = artifact(tmp_path / "out", "binding")
    pairs = [(r["m"], r["m_prime"]) for r in doc["residuals"]]
    assert pairs == [(0.5, 0.0), (0.5, 0.5), (1.0, 0.0), (1.0, 0.5), (1.0, 1.0)]
    assert doc["gap"][0] == [0.0, 0.0, 0.0]
    assert doc["per_mass"][0][2] is None
    assert doc["splits"] == {"free": [], "potential": []}


def test_binding_missing_sample(tmp_path, capsys):
    path_v, path_0 = synthetic_curves(tmp_path)
    args = ["--out", str(tmp_path / "out"), *ATOMIC, "--set", "binding.pairs=[[1.0, 0.4]]", "binding",
            "--potential-curve", str(path_v), "--free-curve", str(path_0)]
    assert main(args) == EXIT_CONFIG
    assert "missing sample" in capsys.readouterr().err


def test_binding_rejects_mixed_configurations(tmp_path):
    path_v, path_0 = synthetic_curves(tmp_path, free_grid=RadialGrid(r_max=20.0))
    args = ["--out", str(tmp_path / "out"), *ATOMIC, "binding", "--potential-curve", str(path_v),
            "--free-curve", str(path_0)]
    assert main(args) == EXIT_CONFIG


def test_diagnose(tmp_path):
    assert main(["--out", str(tmp_path), *ATOMIC, "--set", "solve.m=0.5", "diagnose"]) == EXIT_OK
    doc = artifact(tmp_path, "diagnose")
    assert doc["report"]["R_m"] > 0
    assert doc["escape"] is None
    concentration = pd.read_csv(next(tmp_path.glob("concentration-*.csv")))
    assert list(concentration.columns) == ["R", "M_R"]
