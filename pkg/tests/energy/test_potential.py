import numpy as np
import pytest

from tfdw.energy.couplings import Constants
from tfdw.energy.potential import *
from tfdw.errors import ConfigurationError, DomainError
from tfdw.grid.cartesian import BoxGrid
from tfdw.grid.radial import RadialGrid


def test_from_dict():
    assert PotentialSpec.from_dict(None) == NoPotential()
    assert PotentialSpec.from_dict({"type": "none"}) == NoPotential()
    assert PotentialSpec.from_dict({"type": "atomic", "z": 2}) == Atomic(z=2.0)
    with pytest.raises(ConfigurationError, match="not registered"):
        PotentialSpec.from_dict({"type": "yukawa"})
    with pytest.raises(ConfigurationError, match="invalid parameters"):
        PotentialSpec.from_dict({"type": "atomic", "charge": 1})


@pytest.mark.parametrize("potential", [
    NoPotential(),
    Atomic(z=3.0),
    Atomic(z=1.0, sigma=0.4),
    Molecular(nuclei=((1.0, (0.0, 0.0, 0.7)), (1.0, (0.0, 0.0, -0.7)))),
    RadialTable(r=(0.0, 1.0, 2.0), v=(-1.0, -0.5, 0.0)),
])
def test_dict_round_trip(potential):
    assert PotentialSpec.from_dict(potential.to_dict()) == potential


def test_register_custom_variant():
    class Flat(NoPotential):
        pass

    PotentialSpec.register("flat-test", Flat)
    assert isinstance(PotentialSpec.create("flat-test"), Flat)
    assert Flat().to_dict() == {"type": "flat-test"}


def test_atomic_sampling():
    grid = RadialGrid(kind="linear", r_min=0.0, r_max=10.0, n=101)
    v = Atomic(z=2.0).sample(grid)
    assert v[0] == 0.0
    assert np.allclose(v[1:], -2.0 / grid.nodes[1:])
    assert Atomic(z=2.0).total_charge() == 2.0

    box = BoxGrid(length=8.0, n=16)
    assert np.all(np.isfinite(Atomic(z=1.0).sample(box)))

    with pytest.raises(DomainError):
        Atomic(z=-1.0)


def test_molecular_reduction():
    assert Molecular(nuclei=()).reduce() == NoPotential()
    centered = Molecular(nuclei=[{"z": 2, "position": [0, 0, 0]}])
    assert centered.reduce() == Atomic(z=2.0)
    assert not centered.needs_box

    h2 = Molecular(nuclei=[(1.0, (0.7, 0.0, 0.0)), (1.0, (-0.7, 0.0, 0.0))])
    assert h2.needs_box
    assert h2.total_charge() == 2.0
    with pytest.raises(ConfigurationError, match="needs a box"):
        h2.sample(RadialGrid(n=100))
    assert h2.sample(BoxGrid(length=8.0, n=16)).shape == (16, 16, 16)

    with pytest.raises(ConfigurationError, match="3-vector"):
        Molecular(nuclei=[(1.0, (0.0, 0.0))])


def test_radial_table():
    table = RadialTable(r=(0.0, 1.0, 3.0), v=(-2.0, -1.0, 0.0))
    assert np.allclose(table.evaluate(np.array([0.5, 2.0, 5.0])), [-1.5, -0.5, 0.0])
    assert table.total_charge() == 0.0

    with pytest.raises(DomainError, match="nonpositive"):
        RadialTable(r=(0.0, 1.0), v=(-1.0, 0.5))
    with pytest.raises(DomainError, match="does not decay"):
        RadialTable(r=(0.0, 1.0, 2.0), v=(-1.0, -1.0, -1.0))
    with pytest.raises(ConfigurationError, match="strictly increasing"):
        RadialTable(r=(0.0, 2.0, 1.0), v=(-1.0, -1.0, 0.0))


def test_constants():
    k = Constants()
    assert (k.c_tf, k.c_d, k.c_w) == (1.0, 1.0, 1.0)
    assert k.all_enabled
    assert k.square_constant == 0.25

    physical = Constants.physical()
    assert np.isclose(physical.c_tf, 0.3 * (3 * np.pi ** 2) ** (2 / 3))
    assert physical.c_w == 0.5
    assert Constants.from_dict({"preset": "physical", "hartree": False}) == Constants.physical(hartree=False)
    assert Constants.from_dict(k.to_dict()) == k

    with pytest.raises(ConfigurationError, match="must be positive"):
        Constants(c_w=0.0)
    with pytest.raises(ConfigurationError, match="unknown constants keys"):
        Constants.from_dict({"c_x": 1.0})
