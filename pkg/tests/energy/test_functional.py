import numpy as np
import pytest

from tfdw.energy.couplings import Constants
from tfdw.energy.functional import *
from tfdw.energy.potential import Atomic, NoPotential, RadialTable
from tfdw.errors import ConfigurationError, DegenerateInputError, DomainError, UnsupportedError
from tfdw.grid.cartesian import BoxGrid, resample_radial
from tfdw.grid.radial import RadialFunction, RadialGrid, from_profile
from tfdw.solver.minimize import SolveConfig, minimize_mass_constrained

# energy terms of the unit Gaussian pi^(-3/4) exp(-r^2/2) at unit couplings
GAUSSIAN_A = 1.5
GAUSSIAN_B = 0.6 ** 1.5 / np.pi
GAUSSIAN_C = 0.75 ** 1.5 / np.sqrt(np.pi)
GAUSSIAN_D = 1 / np.sqrt(2 * np.pi)
GAUSSIAN_COULOMB = -2 / np.sqrt(np.pi)


def gaussian(r):
    return np.pi ** -0.75 * np.exp(-0.5 * r ** 2)


def random_state(rng, grid, m=1.0):
    centers = rng.uniform(0.0, 2.0, size=3)
    widths = rng.uniform(0.7, 1.5, size=3)
    amplitudes = rng.uniform(0.2, 1.0, size=3)

    def profile(r):
        return sum(a * np.exp(-((r - c) / w) ** 2) for a, c, w in zip(amplitudes, centers, widths))

    return from_profile(grid, profile, m=m)


def test_zero_state():
    grid = RadialGrid(n=200)
    terms = energy(RadialFunction(grid, np.zeros(grid.n)), Atomic(z=1.0))
    assert terms == EnergyBreakdown()
    assert terms.total == 0.0


def test_gaussian_values():
    u = from_profile(RadialGrid(), gaussian)
    terms = energy(u)
    assert np.isclose(terms.weizsacker, GAUSSIAN_A, rtol=1e-5)
    assert np.isclose(terms.thomas_fermi, GAUSSIAN_B, rtol=1e-5)
    assert np.isclose(terms.dirac, GAUSSIAN_C, rtol=1e-5)
    assert np.isclose(terms.hartree, GAUSSIAN_D, rtol=1e-4)
    assert terms.external == 0.0
    assert np.isclose(terms.total, GAUSSIAN_A + GAUSSIAN_B - GAUSSIAN_C + GAUSSIAN_D, rtol=1e-4)
    terms.check()

    with_nucleus = energy(u, Atomic(z=1.0))
    assert np.isclose(with_nucleus.external, GAUSSIAN_COULOMB, rtol=1e-5)


def test_gaussian_on_box():
    box = BoxGrid(length=12.0, n=48)
    terms = energy(resample_radial(gaussian, box))
    assert np.isclose(terms.weizsacker, GAUSSIAN_A, rtol=1e-5)
    assert np.isclose(terms.thomas_fermi, GAUSSIAN_B, rtol=1e-5)
    assert np.isclose(terms.dirac, GAUSSIAN_C, rtol=1e-5)
    assert np.isclose(terms.hartree, GAUSSIAN_D, rtol=2e-2)


def test_total_order():
    terms = EnergyBreakdown(weizsacker=1.0, thomas_fermi=2.0, dirac=0.5, external=-3.0, hartree=0.25)
    assert terms.total == ((((1.0 + 2.0) - 0.5) + -3.0) + 0.25)
    assert EnergyBreakdown.from_dict(terms.to_dict()) == terms


def test_toggles():
    u = from_profile(RadialGrid(), gaussian)
    hydrogen = Constants(thomas_fermi=False, dirac=False, hartree=False)
    terms = energy(u, Atomic(z=1.0), hydrogen)
    assert terms.thomas_fermi == terms.dirac == terms.hartree == 0.0
    assert np.isclose(terms.total, GAUSSIAN_A + GAUSSIAN_COULOMB, rtol=1e-5)


@pytest.mark.parametrize("potential", [NoPotential(), Atomic(z=1.0)])
def test_gradient_is_directional_derivative(potential):
    rng = np.random.default_rng(3)
    grid = RadialGrid(n=800)
    eps = 1e-6
    for _ in range(20):
        u = random_state(rng, grid, m=rng.uniform(0.2, 2.0))
        g = el_gradient(u, potential)
        phi = random_state(rng, grid).values
        plus = energy(u.with_values(u.values + eps * phi), potential).total
        minus = energy(u.with_values(u.values - eps * phi), potential).total
        assert np.isclose((plus - minus) / (2 * eps), grid.dot(g.values, phi), rtol=1e-6)


def test_translation_invariance_on_box():
    box = BoxGrid(length=16.0, n=32)
    u = resample_radial(gaussian, box)
    shifted = u.with_values(np.roll(u.values, (2, -1, 3), axis=(0, 1, 2)))
    assert np.isclose(energy(shifted).total, energy(u).total, rtol=1e-9)


def test_lower_bound_C1():
    k = Constants()
    assert lower_bound_C1(None, k) == 0.5
    assert lower_bound_C1(Atomic(z=1.0), k) == 2.5
    assert lower_bound_C1(Atomic(z=2.0), k) == 0.5 + 8.0
    with pytest.raises(UnsupportedError):
        lower_bound_C1(RadialTable(r=(0.0, 1.0), v=(-1.0, 0.0)), k)


def test_basic_energy_estimate():
    rng = np.random.default_rng(4)
    grid = RadialGrid(n=800)
    for _ in range(50):
        u = random_state(rng, grid, m=rng.uniform(0.1, 3.0))
        for potential in (NoPotential(), Atomic(z=1.0)):
            lhs, rhs = lower_bound_sides(u, potential, Constants())
            assert lhs >= rhs


@pytest.mark.parametrize("potential, m", [(NoPotential(), 0.25), (Atomic(z=1.0), 0.5), (Atomic(z=1.0), 1.0)])
def test_basic_energy_estimate_at_minimizers(potential, m):
    result = minimize_mass_constrained(potential, SolveConfig(m=m))
    lhs, rhs = lower_bound_sides(result.u, potential, Constants())
    assert lhs >= rhs


def test_complete_square_margin():
    rng = np.random.default_rng(5)
    grid = RadialGrid(n=400)
    u = RadialFunction(grid, rng.normal(scale=2.0, size=grid.n))
    assert complete_square_margin(u, Constants()) >= -1e-9
    assert complete_square_margin(u, Constants.physical()) >= -1e-9


def test_coulomb_cross():
    grid = RadialGrid(n=600)
    u = from_profile(grid, gaussian)
    rho = u.with_values(u.values ** 2)
    assert np.isclose(coulomb_cross(rho, rho), energy(u).hartree, rtol=1e-12)

    with pytest.raises(ConfigurationError, match="different grids"):
        coulomb_cross(rho, from_profile(RadialGrid(n=700), gaussian))
    with pytest.raises(DomainError):
        coulomb_cross(rho, rho.with_values(-rho.values))


def test_hardy_quotient():
    u = from_profile(RadialGrid(), gaussian)
    # <1/r^2> = 2 and <|grad u|^2> = 3/2 for the unit Gaussian
    assert np.isclose(hardy_quotient(u), 1 / 3, rtol=1e-3)

    rng = np.random.default_rng(6)
    grid = RadialGrid(n=800)
    for _ in range(50):
        assert 0 < hardy_quotient(random_state(rng, grid, m=rng.uniform(0.1, 3.0))) <= 1.0

    grid = RadialGrid(n=100)
    assert hardy_quotient(RadialFunction(grid, np.zeros(grid.n))) == 0.0
    with pytest.raises(DomainError, match="origin"):
        hardy_quotient(u, center=(1.0, 0.0, 0.0))


def test_hardy_quotient_on_box():
    box = BoxGrid(length=12.0, n=48)
    u = resample_radial(gaussian, box)
    assert np.isclose(hardy_quotient(u), 1 / 3, rtol=0.2)
    assert hardy_quotient(u, center=(0.5, 0.0, 0.0)) <= 1.0
    with pytest.raises(DomainError, match="outside the box"):
        hardy_quotient(u, center=(9.0, 0.0, 0.0))
    with pytest.raises(DegenerateInputError):
        hardy_quotient(u.with_values(np.ones(box.shape)))


def test_hydrogen_ground_state():
    u = from_profile(RadialGrid(), lambda r: np.pi ** -0.5 * np.exp(-r))
    assert u.grid.integrate(u.values ** 2) == pytest.approx(1.0, rel=1e-9)
    assert energy(u).weizsacker == pytest.approx(1.0, rel=1e-4)
    # <1/r^2> = 2 for the 1s state
    assert hardy_quotient(u) == pytest.approx(0.5, rel=1e-3)
    hydrogen = Constants(thomas_fermi=False, dirac=False, hartree=False)
    assert energy(u, Atomic(z=1.0), hydrogen).total == pytest.approx(0.0, abs=1e-4)


def test_radial_and_box_agree():
    table = RadialTable(r=tuple(np.linspace(0.0, 20.0, 2001)), v=tuple(-np.exp(-np.linspace(0.0, 20.0, 2001))))
    radial = energy(from_profile(RadialGrid(), gaussian), table)
    box = energy(resample_radial(gaussian, BoxGrid(length=12.0, n=64)), table)
    for name in ("weizsacker", "thomas_fermi", "dirac"):
        assert getattr(box, name) == pytest.approx(getattr(radial, name), rel=1e-3)
    assert box.external == pytest.approx(radial.external, rel=5e-3)
    assert box.hartree == pytest.approx(radial.hartree, rel=2e-2)
    assert box.total == pytest.approx(radial.total, rel=2e-2)
