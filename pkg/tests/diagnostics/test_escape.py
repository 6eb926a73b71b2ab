import pytest

from tfdw.diagnostics.escape import ESCAPE_SUSPECTED, escape_indicator
from tfdw.energy.potential import Atomic
from tfdw.errors import ConfigurationError
from tfdw.grid.radial import RadialGrid
from tfdw.solver.minimize import SolveConfig, minimize_mass_constrained


def solve(potential, m, r_max, max_iter=2000):
    cfg = SolveConfig(m=m, max_iter=max_iter, auto_extent=False)
    return minimize_mass_constrained(potential, cfg, grid=RadialGrid(r_max=r_max))


@pytest.fixture(scope="module")
def atomic_results():
    return [solve(Atomic(z=1.0), 0.5, r_max) for r_max in (20.0, 40.0, 80.0)]


def test_escape_of_large_free_mass():
    results = [solve(None, 50.0, r_max) for r_max in (20.0, 40.0, 80.0)]
    report = escape_indicator(results)
    assert report.decreasing
    assert report.escape_suspected
    assert report.flags == [ESCAPE_SUSPECTED]
    assert [row[0] for row in report.rows] == [20.0, 40.0, 80.0]


def test_bound_atom_does_not_escape(atomic_results):
    report = escape_indicator(atomic_results[::-1])
    assert not report.escape_suspected
    assert report.boundary_fraction < 1e-6
    assert report.to_dict()["flags"] == []


def test_escape_input_validation(atomic_results):
    with pytest.raises(ConfigurationError, match="at least two"):
        escape_indicator(atomic_results[:1])
    with pytest.raises(ConfigurationError, match="distinct extents"):
        escape_indicator([atomic_results[0], atomic_results[0]])
    other = solve(Atomic(z=1.0), 0.25, 20.0)
    with pytest.raises(ConfigurationError, match="different problems"):
        escape_indicator([atomic_results[0], other])
