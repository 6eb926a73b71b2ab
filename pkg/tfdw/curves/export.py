"""Writing and reading curve and report artifacts.

Files are written atomically (temporary file in the target directory, then rename) and their names carry
the config hash: <stem>-<hash>.<fmt>.
"""

import json
from pathlib import Path

import numpy as np
import pandas as pd

from ..constants import CURVE_COLUMNS, CONCENTRATION_COLUMNS
from ..energy.couplings import Constants
from ..energy.potential import PotentialSpec
from ..errors import ConfigurationError, InvalidStateError
from ..grid.cartesian import BoxGrid
from ..grid.radial import RadialGrid
from ..solver.minimize import SolveConfig
from ..utils.files import atomic_write
from .curve import CurveSample, EnergyCurve

CSV = "csv"
JSON = "json"


def artifact_path(directory, stem: str, digest: str, fmt: str) -> Path:
    return Path(directory) / f"{stem}-{digest}.{fmt}"


def curve_to_dict(curve: EnergyCurve) -> dict:
    return {"label": curve.label, "config_hash": curve.config_hash, "physics_hash": curve.physics_hash,
            "potential": curve.potential.to_dict(), "constants": curve.constants.to_dict(),
            "grid": curve.grid.to_dict(), "box": curve.box.to_dict(), "solve": curve.solve.to_dict(),
            "samples": [{"m": s.m, "energy": s.energy, "residual": s.residual, "converged": s.converged,
                         "kinetic": s.kinetic, "iterations": s.iterations, "boundary_mass": s.boundary_mass,
                         "split": s.split, "solved": s.solved}
                        for s in curve.samples]}


def _optional(value) -> float | None:
    return None if value is None else float(value)


def curve_from_dict(doc: dict) -> EnergyCurve:
    """Rebuilds a curve from its JSON document.

    Raises:
        ConfigurationError: if the document is malformed or its hash does not match its content.
    """
    try:
        samples = [CurveSample(m=float(s["m"]), energy=float(s["energy"]), residual=float(s["residual"]),
                               converged=bool(s["converged"]), kinetic=float(s.get("kinetic", 0.0)),
                               iterations=int(s.get("iterations", 0)),
                               boundary_mass=float(s.get("boundary_mass", 0.0)),
                               split=_optional(s.get("split")), solved=_optional(s.get("solved")))
                   for s in doc["samples"]]
        curve = EnergyCurve(potential=PotentialSpec.from_dict(doc["potential"]),
                            constants=Constants.from_dict(doc["constants"]), samples=samples,
                            grid=RadialGrid.from_dict(doc["grid"]), box=BoxGrid.from_dict(doc["box"]),
                            solve=SolveConfig.from_dict(doc["solve"]))
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigurationError(f"malformed curve document: {e}") from e
    if "config_hash" in doc and doc["config_hash"] != curve.config_hash:
        raise ConfigurationError("curve document hash does not match its configuration")
    return curve


def curve_frame(curve: EnergyCurve) -> pd.DataFrame:
    return pd.DataFrame([(s.m, s.energy, s.residual, s.converged) for s in curve.samples],
                        columns=list(CURVE_COLUMNS))


def _report_frame(report) -> pd.DataFrame:
    return pd.DataFrame(report.concentration, columns=list(CONCENTRATION_COLUMNS))


def export(item, path, fmt: str = JSON) -> Path:
    """Writes a curve (CSV or JSON) or a report (JSON, or its concentration table as CSV).

    CSV curves have the header "m,energy,residual,converged"; concentration tables "R,M_R".
    """
    if fmt not in (CSV, JSON):
        raise ConfigurationError(f"unknown export format '{fmt}'")
    if fmt == CSV:
        frame = curve_frame(item) if isinstance(item, EnergyCurve) else _report_frame(item)
        return write_frame(frame, path)
    doc = curve_to_dict(item) if isinstance(item, EnergyCurve) else item.to_dict()
    return atomic_write(path, lambda fh: json.dump(doc, fh, indent=1))


def write_json(doc: dict, path) -> Path:
    return atomic_write(path, lambda fh: json.dump(doc, fh, indent=1))


def write_frame(frame: pd.DataFrame, path) -> Path:
    return atomic_write(path, lambda fh: frame.to_csv(fh, index=False, float_format="%.17g"))


def write_dat(path, x, y, header: str = "") -> Path:
    """Two-column whitespace separated data for gnuplot."""
    data = np.column_stack([np.asarray(x, dtype=float), np.asarray(y, dtype=float)])
    return atomic_write(path, lambda fh: np.savetxt(fh, data, fmt="%.17g", header=header))


def load_curve(path) -> EnergyCurve:
    """Reads a curve written by `export(curve, path, "json")`.

    Raises:
        InvalidStateError: if the file is missing or not JSON.
        ConfigurationError: if it does not describe a curve.
    """
    path = Path(path)
    try:
        with path.open() as fh:
            doc = json.load(fh)
    except FileNotFoundError as e:
        raise InvalidStateError(f"curve file {path} not found") from e
    except json.JSONDecodeError as e:
        raise InvalidStateError(f"curve file {path} is not valid JSON: {e}") from e
    return curve_from_dict(doc)
