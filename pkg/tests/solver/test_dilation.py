import numpy as np
import pytest

from tfdw.energy.couplings import Constants
from tfdw.energy.functional import energy
from tfdw.errors import DomainError
from tfdw.grid.cartesian import BoxGrid, resample_radial
from tfdw.grid.radial import RadialGrid, from_profile
from tfdw.solver.dilation import *

K = Constants()


def gaussian(r):
    return np.pi ** -0.75 * np.exp(-0.5 * r ** 2)


def random_state(rng, grid):
    centers = rng.uniform(0.0, 1.5, size=3)
    widths = rng.uniform(0.8, 1.5, size=3)
    amplitudes = rng.uniform(0.2, 1.0, size=3)
    return from_profile(grid, lambda r: sum(a * np.exp(-((r - c) / w) ** 2)
                                            for a, c, w in zip(amplitudes, centers, widths)), m=1.0)


@pytest.mark.parametrize("ell", [0.5, 2.0])
def test_scaling_law(ell):
    rng = np.random.default_rng(7)
    grid = RadialGrid()
    for _ in range(10):
        u = random_state(rng, grid)
        before = energy(u)
        after = energy(dilate_state(u, ell))
        assert np.isclose(after.weizsacker, ell ** 2 * before.weizsacker, rtol=5e-3)
        assert np.isclose(after.thomas_fermi, ell ** 2 * before.thomas_fermi, rtol=5e-3)
        assert np.isclose(after.dirac, ell * before.dirac, rtol=5e-3)
        assert np.isclose(after.hartree, ell * before.hartree, rtol=5e-3)


def test_scaling_law_on_box():
    box = BoxGrid(length=16.0, n=48)
    u = resample_radial(gaussian, box)
    before, after = energy(u), energy(dilate_state(u, 1.25))
    assert np.isclose(after.dirac, 1.25 * before.dirac, rtol=1e-2)
    assert np.isclose(after.weizsacker, 1.25 ** 2 * before.weizsacker, rtol=1e-2)


def test_profile_terms():
    u = from_profile(RadialGrid(), gaussian)
    terms = profile_terms(u, K)
    assert np.isclose(terms.a, 1.5, rtol=1e-5)
    assert np.isclose(terms.d, 1 / np.sqrt(2 * np.pi), rtol=1e-4)
    with pytest.raises(DomainError, match="unit mass"):
        profile_terms(u.with_values(2 * u.values), K)


def test_parabola():
    assert parabola_minimum(2.0, 4.0) == DilationOptimum(1.0, -2.0, True)
    assert parabola_minimum(2.0, -1.0) == DilationOptimum(0.0, 0.0, False)
    assert parabola_minimum(2.0, 0.0).attained is False


def test_optimal_dilation_matches_rescaled_energy():
    grid = RadialGrid(r_max=400.0, n=4000)
    u = from_profile(grid, gaussian)
    m = 0.5
    best = optimal_dilation(u, m, K)
    assert best.attained
    v = rescale_to_mass(u, m, best.ell)
    assert np.isclose(grid.integrate(v.values ** 2), m, rtol=1e-6)
    assert np.isclose(energy(v).total, best.value, rtol=1e-3)

    # any other dilation is worse
    for factor in (0.8, 1.25):
        assert energy(rescale_to_mass(u, m, factor * best.ell)).total > best.value


def test_no_optimum_for_large_mass():
    u = from_profile(RadialGrid(), gaussian)
    best = optimal_dilation(u, 5.0, K)
    assert not best.attained
    assert best.value == 0.0
    assert dilation_bound(u, 5.0, K) == 0.0
    with pytest.raises(DomainError):
        optimal_dilation(u, 0.0, K)


@pytest.mark.parametrize("m", [0.01, 0.1, 0.5])
def test_dilation_bound_is_the_optimum(m):
    u = from_profile(RadialGrid(), gaussian)
    assert np.isclose(dilation_bound(u, m, K), optimal_dilation(u, m, K).value, rtol=1e-10)


def test_h_curve():
    u = from_profile(RadialGrid(), gaussian)
    s = np.linspace(0.01, 1.5, 300)
    table = h_curve(u, s, K)
    assert table.shape == (300, 3)
    assert np.allclose(table[:, 0], s)
    assert np.all(table[:, 1] >= 0)

    # derivative column against central differences
    eps = 1e-6
    h_plus = h_curve(u, s + eps, K)[:, 1]
    h_minus = h_curve(u, s - eps, K)[:, 1]
    assert np.allclose((h_plus - h_minus) / (2 * eps), table[:, 2], rtol=1e-5, atol=1e-9)

    with pytest.raises(DomainError):
        h_curve(u, [0.0, 1.0], K)


def test_increasing_range():
    u = from_profile(RadialGrid(), gaussian)
    s0 = increasing_range(u, K)
    terms = profile_terms(u, K)
    assert 0 < s0 <= terms.c / terms.d
    _, dh = h_values(terms, np.linspace(1e-3, s0 * (1 - 1e-6), 200))
    assert np.all(dh > 0)
    _, dh_after = h_values(terms, np.array([s0 * 1.01]))
    assert dh_after[0] <= 0


def test_closed_form_matches_a_dilation_scan():
    rng = np.random.default_rng(11)
    grid = RadialGrid()
    m = 0.25
    ells = np.geomspace(1e-3, 1e3, 10 ** 4)
    for _ in range(20):
        u = random_state(rng, grid)
        a, b = coefficients(profile_terms(u, K), m)
        best = optimal_dilation(u, m, K)
        assert best.attained
        scanned = np.min(ells ** 2 * a - ells * b)
        assert scanned == pytest.approx(best.value, rel=1e-6)


def test_h_increases_for_small_s_on_random_states():
    rng = np.random.default_rng(12)
    grid = RadialGrid()
    eps = 1e-6
    for _ in range(20):
        u = random_state(rng, grid)
        terms = profile_terms(u, K)
        s = np.linspace(1e-3, 0.9 * increasing_range(u, K), 100)
        _, dh = h_values(terms, s)
        assert np.all(dh > 0)
        fd = (h_values(terms, s + eps)[0] - h_values(terms, s - eps)[0]) / (2 * eps)
        assert np.allclose(fd, dh, rtol=1e-6, atol=1e-10)
