"""Run configuration.

A run is described by one JSON document (YAML is accepted too). Keys at every level are checked, and
`--set section.key=value` overrides are applied to the raw document before validation, with the value
parsed as YAML so numbers, booleans and lists keep their types.

Example:
    {"constants": {"c_tf": 1, "c_d": 1, "c_w": 1},
     "potential": {"type": "atomic", "z": 1},
     "grid": {"kind": "logarithmic", "r_min": 1e-4, "r_max": 40, "n": 2000},
     "solve": {"m": 0.5, "tol": 1e-6},
     "curve": {"m_values": [0.25, 0.5, 0.75, 1.0]}}
"""

import copy
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from ..constants import (CONSTANTS, POTENTIAL, GRID, BOX, SOLVE, CURVE, BINDING, DIAGNOSE, ASYMPTOTICS, OUTPUT,
                         SEED, M_VALUES, OUTPUT_ENV, HASH_LENGTH)
from ..energy.couplings import Constants
from ..energy.potential import PotentialSpec
from ..errors import ConfigurationError
from ..grid.cartesian import BoxGrid
from ..grid.radial import RadialGrid
from ..solver.minimize import SolveConfig

SECTION_DEFAULTS = {
    CURVE: {M_VALUES: [0.25, 0.5, 0.75, 1.0], "warm_start": True},
    BINDING: {"pairs": None, "potential_curve": None, "free_curve": None},
    DIAGNOSE: {"radii": [1.0, 2.0, 4.0, 8.0], "extents": [], "concentration_radii": None},
    ASYMPTOTICS: {M_VALUES: [0.1, 0.01, 0.001]},
}
GRID_KEYS = {"kind", "r_min", "r_max", "n"}
BOX_KEYS = {"length", "n"}
TOP_LEVEL = {CONSTANTS, POTENTIAL, GRID, BOX, SOLVE, CURVE, BINDING, DIAGNOSE, ASYMPTOTICS, OUTPUT, SEED}
DEFAULT_OUTPUT = "out"


def digest(doc) -> str:
    """First HASH_LENGTH hex digits of the sha256 of canonical JSON."""
    text = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:HASH_LENGTH]


def config_hash(constants: Constants, potential: PotentialSpec, grid: RadialGrid, box: BoxGrid) -> str:
    return digest({CONSTANTS: constants.to_dict(), POTENTIAL: potential.to_dict(), GRID: grid.to_dict(),
                   BOX: box.to_dict()})


def physics_hash(constants: Constants, grid: RadialGrid, box: BoxGrid) -> str:
    """Hash of everything but the potential; curves sharing it may be combined."""
    return digest({CONSTANTS: constants.to_dict(), GRID: grid.to_dict(), BOX: box.to_dict()})


def load_document(path) -> dict:
    """Reads a JSON or YAML configuration file.

    Raises:
        ConfigurationError: if the file is missing or unparsable.
    """
    path = Path(path)
    try:
        with path.open() as fh:
            if path.suffix in (".yaml", ".yml"):
                doc = yaml.safe_load(fh)
            else:
                doc = json.load(fh)
    except FileNotFoundError as e:
        raise ConfigurationError(f"config file {path} not found") from e
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigurationError(f"cannot parse {path}: {e}") from e
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ConfigurationError(f"config file {path} does not hold a mapping")
    return doc


def apply_overrides(doc: dict, overrides: list[str]) -> dict:
    """Returns a copy of `doc` with dotted-path assignments `a.b.c=value` applied."""
    doc = copy.deepcopy(doc)
    for item in overrides or []:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigurationError(f"override '{item}' is not of the form key=value")
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError as e:
            raise ConfigurationError(f"cannot parse override value '{raw}': {e}") from e
        path = key.split(".")
        node = doc
        for part in path[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigurationError(f"override '{key}' descends into a non-mapping value")
            node = child
        node[path[-1]] = value
    return doc


def _check_keys(section: str, doc: dict, allowed) -> None:
    if not isinstance(doc, dict):
        raise ConfigurationError(f"section '{section}' must be a mapping")
    unknown = set(doc) - set(allowed)
    if unknown:
        raise ConfigurationError(f"unknown keys in '{section}': {sorted(unknown)}")


def _section(doc: dict, name: str) -> dict:
    values = doc.get(name) or {}
    _check_keys(name, values, SECTION_DEFAULTS[name])
    return {**copy.deepcopy(SECTION_DEFAULTS[name]), **values}


@dataclass
class RunConfig:
    """Validated run configuration.

    Attributes:
        constants (Constants): couplings and toggles.
        potential (PotentialSpec): external potential.
        grid (RadialGrid): radial grid.
        box (BoxGrid): box for potentials that need one.
        solve (SolveConfig): solver parameters.
        curve (dict): m_values and warm_start of curve sweeps.
        binding (dict): split pairs and curve files of binding checks.
        diagnose (dict): cut radii, nested extents and concentration radii of diagnostics.
        asymptotics (dict): masses of the small-mass study.
        output (str): output directory.
        seed (int): seed for randomized checks.
    """

    constants: Constants = field(default_factory=Constants)
    potential: PotentialSpec = field(default_factory=lambda: PotentialSpec.from_dict(None))
    grid: RadialGrid = field(default_factory=RadialGrid)
    box: BoxGrid = field(default_factory=BoxGrid)
    solve: SolveConfig = field(default_factory=SolveConfig)
    curve: dict = field(default_factory=lambda: copy.deepcopy(SECTION_DEFAULTS[CURVE]))
    binding: dict = field(default_factory=lambda: copy.deepcopy(SECTION_DEFAULTS[BINDING]))
    diagnose: dict = field(default_factory=lambda: copy.deepcopy(SECTION_DEFAULTS[DIAGNOSE]))
    asymptotics: dict = field(default_factory=lambda: copy.deepcopy(SECTION_DEFAULTS[ASYMPTOTICS]))
    output: str = DEFAULT_OUTPUT
    seed: int = 0

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        """Validates a raw document.

        Raises:
            ConfigurationError: on unknown keys or invalid values.
        """
        _check_keys("<root>", doc, TOP_LEVEL)
        grid_doc = doc.get(GRID) or {}
        box_doc = doc.get(BOX) or {}
        _check_keys(GRID, grid_doc, GRID_KEYS)
        _check_keys(BOX, box_doc, BOX_KEYS)
        try:
            config = cls(constants=Constants.from_dict(doc.get(CONSTANTS) or {}),
                         potential=PotentialSpec.from_dict(doc.get(POTENTIAL)),
                         grid=RadialGrid.from_dict(grid_doc),
                         box=BoxGrid.from_dict(box_doc),
                         solve=SolveConfig.from_dict(doc.get(SOLVE) or {}),
                         curve=_section(doc, CURVE), binding=_section(doc, BINDING),
                         diagnose=_section(doc, DIAGNOSE), asymptotics=_section(doc, ASYMPTOTICS),
                         output=str(doc.get(OUTPUT, DEFAULT_OUTPUT)), seed=int(doc.get(SEED, 0)))
        except ConfigurationError:
            raise
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"invalid configuration: {e}") from e
        config.validate()
        return config

    @classmethod
    def load(cls, path=None, overrides: list[str] | None = None) -> "RunConfig":
        doc = load_document(path) if path else {}
        return cls.from_dict(apply_overrides(doc, overrides or []))

    def validate(self) -> None:
        for name, section in ((CURVE, self.curve), (ASYMPTOTICS, self.asymptotics)):
            masses = section[M_VALUES]
            if not masses or any(not float(m) > 0 for m in masses):
                raise ConfigurationError(f"'{name}.m_values' must be a nonempty list of positive masses")
        pairs = self.binding["pairs"]
        if pairs is not None and any(len(p) != 2 or not 0 <= float(p[1]) <= float(p[0]) for p in pairs):
            raise ConfigurationError("binding pairs must be [m, m'] with 0 <= m' <= m")
        if any(float(r) <= 0 for r in self.diagnose["radii"]):
            raise ConfigurationError("diagnose radii must be positive")

    def to_dict(self) -> dict:
        return {CONSTANTS: self.constants.to_dict(), POTENTIAL: self.potential.to_dict(),
                GRID: self.grid.to_dict(), BOX: self.box.to_dict(), SOLVE: self.solve.to_dict(),
                CURVE: self.curve, BINDING: self.binding, DIAGNOSE: self.diagnose,
                ASYMPTOTICS: self.asymptotics, OUTPUT: self.output, SEED: self.seed}

    @property
    def hash(self) -> str:
        return config_hash(self.constants, self.potential, self.grid, self.box)

    @property
    def physics_hash(self) -> str:
        return physics_hash(self.constants, self.grid, self.box)

    def output_dir(self, override: str | None = None) -> Path:
        """--out wins over the TFDW_OUT environment variable, which wins over the document."""
        return Path(override or os.environ.get(OUTPUT_ENV) or self.output)
