import json

import numpy as np
import pytest

from tfdw.errors import InvalidStateError
from tfdw.grid.cartesian import BoxGrid, Field3
from tfdw.grid.radial import RadialFunction, RadialGrid
from tfdw.grid.state_file import *


def test_radial_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    grid = RadialGrid(n=300)
    u = RadialFunction(grid, rng.normal(size=grid.n), {"m": 0.5, "note": "seed"})
    path = save_state(u, tmp_path / "state.json")
    v = load_state(path)
    assert v.grid == grid
    assert np.array_equal(v.values, u.values)
    assert v.meta == u.meta


def test_box_round_trip(tmp_path):
    rng = np.random.default_rng(2)
    box = BoxGrid(length=10.0, n=16)
    u = Field3(box, rng.normal(size=box.shape))
    v = load_state(save_state(u, tmp_path / "box.json"))
    assert isinstance(v, Field3)
    assert v.grid == box
    assert np.array_equal(v.values, u.values)


def test_box_layout():
    box = BoxGrid(length=10.0, n=16)
    doc = state_to_dict(Field3(box, np.zeros(box.shape)))
    assert doc["grid"] == {"L": 10.0, "n": 16}
    assert doc["encoding"] == "row-major"
    assert doc["dtype"] == "<f8"


def test_missing_file(tmp_path):
    with pytest.raises(InvalidStateError, match="not found"):
        load_state(tmp_path / "nope.json")


def test_not_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{values: ")
    with pytest.raises(InvalidStateError, match="not valid JSON"):
        load_state(path)


@pytest.mark.parametrize("doc", [
    {"values": [0.0] * 16},
    {"grid": {"kind": "linear", "r_min": 0.0, "r_max": 1.0, "n": 16}, "values": [0.0] * 15},
    {"grid": {"kind": "spiral", "n": 16}, "values": [0.0] * 16},
    {"grid": {"L": 10.0, "n": 16}, "encoding": "row-major", "dtype": "<f8", "payload": "AAAA"},
    {"grid": {"L": 10.0, "n": 16}, "encoding": "column-major", "dtype": "<f8", "payload": ""},
])
def test_malformed_documents(doc):
    with pytest.raises(InvalidStateError):
        state_from_dict(doc)


def test_non_finite_values(tmp_path):
    path = tmp_path / "nan.json"
    grid = {"kind": "linear", "r_min": 0.0, "r_max": 1.0, "n": 16}
    path.write_text(json.dumps({"grid": grid, "values": [0.0] * 15 + [float("nan")]}))
    with pytest.raises(InvalidStateError, match="non-finite"):
        load_state(path)


def test_save_is_atomic(tmp_path, monkeypatch):
    grid = RadialGrid(n=100)
    path = save_state(RadialFunction(grid, np.ones(grid.n)), tmp_path / "state.json")

    def interrupted(doc, fh, **kwargs):
        fh.write('{"grid": ')
        raise KeyboardInterrupt

    monkeypatch.setattr(json, "dump", interrupted)
    with pytest.raises(KeyboardInterrupt):
        save_state(RadialFunction(grid, np.zeros(grid.n)), path)
    monkeypatch.undo()

    assert np.array_equal(load_state(path).values, np.ones(grid.n))
    assert [p.name for p in tmp_path.iterdir()] == ["state.json"]
