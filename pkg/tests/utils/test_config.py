import json

import pytest
import yaml

from tfdw.constants import HASH_LENGTH, OUTPUT_ENV
from tfdw.energy.couplings import Constants
from tfdw.energy.potential import Atomic, NoPotential
from tfdw.errors import ConfigurationError
from tfdw.grid.cartesian import BoxGrid
from tfdw.grid.radial import RadialGrid
from tfdw.utils.config import *


def test_defaults():
    config = RunConfig.load()
    assert config.constants == Constants()
    assert isinstance(config.potential, NoPotential)
    assert config.grid == RadialGrid()
    assert config.curve == {"m_values": [0.25, 0.5, 0.75, 1.0], "warm_start": True}
    assert config.diagnose["radii"] == [1.0, 2.0, 4.0, 8.0]
    assert config.asymptotics["m_values"] == [0.1, 0.01, 0.001]
    assert config.binding["pairs"] is None


def test_unknown_keys():
    with pytest.raises(ConfigurationError, match="unknown keys"):
        RunConfig.from_dict({"solver": {}})
    with pytest.raises(ConfigurationError, match="unknown keys in 'grid'"):
        RunConfig.from_dict({"grid": {"points": 100}})
    with pytest.raises(ConfigurationError, match="unknown keys in 'curve'"):
        RunConfig.from_dict({"curve": {"masses": [1.0]}})
    with pytest.raises(ConfigurationError):
        RunConfig.from_dict({"solve": {"mass": 1.0}})


def test_invalid_values():
    with pytest.raises(ConfigurationError):
        RunConfig.from_dict({"solve": {"m": -1}})
    with pytest.raises(ConfigurationError, match="m_values"):
        RunConfig.from_dict({"curve": {"m_values": []}})
    with pytest.raises(ConfigurationError, match="binding pairs"):
        RunConfig.from_dict({"binding": {"pairs": [[0.5, 1.0]]}})
    with pytest.raises(ConfigurationError):
        RunConfig.from_dict({"grid": {"n": 4}})


def test_overrides():
    config = RunConfig.load(overrides=["solve.m=0.5", "potential.type=atomic", "potential.z=2",
                                       "constants.dirac=false", "curve.m_values=[0.1, 0.2]"])
    assert config.solve.m == 0.5
    assert config.potential == Atomic(z=2.0)
    assert not config.constants.dirac
    assert config.curve["m_values"] == [0.1, 0.2]


def test_bad_overrides():
    with pytest.raises(ConfigurationError, match="key=value"):
        apply_overrides({}, ["solve.m"])
    with pytest.raises(ConfigurationError, match="non-mapping"):
        apply_overrides({"output": "out"}, ["output.dir=x"])


def test_overrides_do_not_mutate():
    doc = {"solve": {"m": 1.0}}
    apply_overrides(doc, ["solve.m=2"])
    assert doc == {"solve": {"m": 1.0}}


def test_hash():
    a = RunConfig.load(overrides=["potential.type=atomic", "potential.z=1"])
    b = RunConfig.from_dict({"potential": {"z": 1.0, "type": "atomic"}})
    assert a.hash == b.hash
    assert len(a.hash) == HASH_LENGTH
    # the solver settings do not change the problem
    assert RunConfig.load(overrides=["solve.m=3"]).hash == RunConfig.load().hash
    assert RunConfig.load(overrides=["grid.n=1000"]).hash != RunConfig.load().hash
    assert a.physics_hash == RunConfig.load().physics_hash
    assert a.hash != RunConfig.load().hash


def test_digest_is_canonical():
    assert digest({"a": 1, "b": [1, 2]}) == digest({"b": [1, 2], "a": 1})
    assert config_hash(Constants(), NoPotential(), RadialGrid(), BoxGrid()) == RunConfig().hash


def test_output_dir(monkeypatch):
    config = RunConfig.from_dict({"output": "from-doc"})
    monkeypatch.delenv(OUTPUT_ENV, raising=False)
    assert str(config.output_dir()) == "from-doc"
    monkeypatch.setenv(OUTPUT_ENV, "from-env")
    assert str(config.output_dir()) == "from-env"
    assert str(config.output_dir("from-flag")) == "from-flag"


def test_load_files(tmp_path):
    doc = {"potential": {"type": "atomic", "z": 1}, "solve": {"m": 0.5}}
    json_path = tmp_path / "run.json"
    json_path.write_text(json.dumps(doc))
    yaml_path = tmp_path / "run.yaml"
    yaml_path.write_text(yaml.safe_dump(doc))
    assert RunConfig.load(json_path).hash == RunConfig.load(yaml_path).hash
    assert RunConfig.load(yaml_path, ["solve.m=0.25"]).solve.m == 0.25
    assert RunConfig.load(json_path).to_dict()["solve"]["m"] == 0.5


def test_load_errors(tmp_path):
    with pytest.raises(ConfigurationError, match="not found"):
        RunConfig.load(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ConfigurationError, match="cannot parse"):
        RunConfig.load(bad)
    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigurationError, match="mapping"):
        RunConfig.load(listing)
