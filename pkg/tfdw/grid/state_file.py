"""JSON state files.

Radial states are stored as
    {"grid": {"kind", "r_min", "r_max", "n"}, "values": [...], "meta": {...}}
with every value written at full double precision.
Box states are stored as
    {"grid": {"L", "n"}, "encoding": "row-major", "dtype": "<f8", "payload": base64, "meta": {...}}
where the payload holds the n^3 samples in C order.
"""

import base64
import json
from pathlib import Path

import numpy as np

from ..errors import ConfigurationError, InvalidStateError
from .cartesian import BoxGrid, Field3
from .radial import RadialFunction, RadialGrid
from ..utils.files import atomic_write

ENCODING = "row-major"
DTYPE = "<f8"


def state_to_dict(u: RadialFunction | Field3) -> dict:
    if isinstance(u, RadialFunction):
        return {"grid": u.grid.to_dict(), "values": [float(v) for v in u.values], "meta": u.meta}
    payload = base64.b64encode(np.ascontiguousarray(u.values, dtype=DTYPE).tobytes()).decode("ascii")
    return {"grid": {"L": u.grid.length, "n": u.grid.n}, "encoding": ENCODING, "dtype": DTYPE,
            "payload": payload, "meta": u.meta}


def state_from_dict(doc: dict) -> RadialFunction | Field3:
    """Rebuilds a state from its document.

    Raises:
        InvalidStateError: if the document is malformed or has non-finite samples.
    """
    try:
        grid_doc = doc["grid"]
        meta = dict(doc.get("meta", {}))
        if "L" in grid_doc:
            if doc.get("encoding") != ENCODING or doc.get("dtype", DTYPE) != DTYPE:
                raise InvalidStateError(f"unsupported payload layout {doc.get('encoding')}/{doc.get('dtype')}")
            grid = BoxGrid(length=float(grid_doc["L"]), n=int(grid_doc["n"]))
            raw = base64.b64decode(doc["payload"], validate=True)
            values = np.frombuffer(raw, dtype=DTYPE)
            if values.size != grid.n ** 3:
                raise InvalidStateError(f"payload holds {values.size} samples, expected {grid.n ** 3}")
            u = Field3(grid, values.reshape(grid.shape).astype(float), meta)
        else:
            grid = RadialGrid.from_dict(grid_doc)
            u = RadialFunction(grid, np.asarray(doc["values"], dtype=float), meta)
    except InvalidStateError:
        raise
    except (KeyError, TypeError, ValueError, ConfigurationError) as e:
        raise InvalidStateError(f"malformed state document: {e}") from e
    u.check_finite()
    return u


def save_state(u: RadialFunction | Field3, path) -> Path:
    """Writes u atomically; an interrupted write leaves any previous file intact."""
    doc = state_to_dict(u)
    return atomic_write(path, lambda fh: json.dump(doc, fh, indent=1))


def load_state(path) -> RadialFunction | Field3:
    """Reads a state file written by `save_state`.

    Raises:
        InvalidStateError: if the file is missing, is not JSON or does not describe a state.
    """
    path = Path(path)
    try:
        with path.open() as fh:
            doc = json.load(fh)
    except FileNotFoundError as e:
        raise InvalidStateError(f"state file {path} not found") from e
    except json.JSONDecodeError as e:
        raise InvalidStateError(f"state file {path} is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise InvalidStateError(f"state file {path} does not hold a JSON object")
    return state_from_dict(doc)
