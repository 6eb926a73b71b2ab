import json

import numpy as np
import pytest

from tfdw.diagnostics.report import build_report, radius_table
from tfdw.energy.potential import Atomic
from tfdw.grid.radial import RadialGrid, from_profile
from tfdw.solver.minimize import SolveConfig, minimize_mass_constrained


@pytest.fixture(scope="module")
def results():
    return [minimize_mass_constrained(Atomic(z=1.0), SolveConfig(m=m)) for m in (0.5, 1.0)]


def test_report_of_atomic_minimizer(results):
    result = results[0]
    report = build_report(result.u, result.potential, result.constants)
    assert report.m == pytest.approx(0.5)
    assert report.R_m > 0
    assert report.r_m is not None
    assert report.masses_in_range()
    assert set(report.localization_gaps) == {1.0, 2.0, 4.0, 8.0}
    assert set(report.annulus_residuals) == {1.0, 2.0, 4.0, 8.0}
    assert report.outer_coulomb == pytest.approx(1.0)
    assert report.boundary_mass < 1e-4
    doc = report.to_dict()
    assert json.loads(json.dumps(doc))["localization_gaps"].keys() == {"1", "2", "4", "8"}


def test_report_without_split_point():
    u = from_profile(RadialGrid(r_max=3.0, n=400), lambda r: np.exp(-r ** 2), m=0.01)
    report = build_report(u, radii=[0.5])
    assert report.r_m is None
    assert report.annulus_residuals == {}
    assert report.concentration


def test_radius_table(results):
    table = radius_table(results[::-1])
    assert list(table.columns) == ["m", "R_m"]
    assert list(table["m"]) == [0.5, 1.0]
    assert np.all(table["R_m"] > 0)
