"""External potentials.

A PotentialSpec describes V and samples it on either representation.
Variants register themselves by name, so run configurations can build them from `{"type": ..., ...}`:

    none:          V = 0
    atomic:        V = -Z / |x|
    molecular:     V = -sum_j Z_j / |x - r_j|   (Gaussian-smeared on the box)
    radial_table:  tabulated V(r) <= 0 with r V(r) -> 0, linearly interpolated
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ..constants import POTENTIAL_NONE, POTENTIAL_ATOMIC, POTENTIAL_MOLECULAR, POTENTIAL_RADIAL_TABLE, TYPE
from ..errors import ConfigurationError, DomainError
from ..grid.cartesian import BoxGrid, molecular_potential
from ..grid.radial import RadialGrid

# relative size of |r V(r)| allowed at the end of a radial table
TABLE_TAIL_TOL = 1e-3


class PotentialSpec(ABC):
    """External potential (abstract).

    Class Attributes:
        _registry (dict[str, type]): mapping of variant names to classes.
    """

    _registry: dict = {}
    name: str = ""

    @classmethod
    def register(cls, name: str, potential_class=None):
        """Register a potential variant, directly or as a class decorator."""
        if potential_class is not None:
            potential_class.name = name
            cls._registry[name] = potential_class
            return None

        def decorator(potential_cls):
            potential_cls.name = name
            cls._registry[name] = potential_cls
            return potential_cls

        return decorator

    @classmethod
    def create(cls, name: str, **kwargs) -> "PotentialSpec":
        if name not in cls._registry:
            raise ConfigurationError(f"potential '{name}' is not registered")
        try:
            return cls._registry[name](**kwargs)
        except TypeError as e:
            raise ConfigurationError(f"invalid parameters for potential '{name}': {e}") from e

    @classmethod
    def from_dict(cls, config: dict | None) -> "PotentialSpec":
        if config is None:
            return NoPotential()
        config = dict(config)
        name = config.pop(TYPE, POTENTIAL_NONE)
        return cls.create(name, **config)

    def to_dict(self) -> dict:
        return {TYPE: self.name, **self._params()}

    def _params(self) -> dict:
        return {}

    @abstractmethod
    def total_charge(self) -> float:
        """Sum of the nuclear charges (0 when there are none)."""

    @property
    def needs_box(self) -> bool:
        """True when the potential is not spherically symmetric about the origin."""
        return False

    @abstractmethod
    def sample_radial(self, grid: RadialGrid) -> np.ndarray:
        pass

    @abstractmethod
    def sample_box(self, grid: BoxGrid) -> np.ndarray:
        pass

    def sample(self, grid: RadialGrid | BoxGrid) -> np.ndarray:
        if isinstance(grid, RadialGrid):
            return self.sample_radial(grid)
        return self.sample_box(grid)


@PotentialSpec.register(POTENTIAL_NONE)
@dataclass(frozen=True)
class NoPotential(PotentialSpec):

    def total_charge(self) -> float:
        return 0.0

    def sample_radial(self, grid: RadialGrid) -> np.ndarray:
        return np.zeros(grid.n)

    def sample_box(self, grid: BoxGrid) -> np.ndarray:
        return np.zeros(grid.shape)


@PotentialSpec.register(POTENTIAL_ATOMIC)
@dataclass(frozen=True)
class Atomic(PotentialSpec):
    """A single nucleus of charge z at the origin.

    On radial grids the exact -z/r is used at the nodes (0 at r = 0 on linear grids, where the
    node carries no quadrature weight). On the box the nucleus is smeared like a molecular one.
    """

    z: float = 1.0
    sigma: float | None = None

    def __post_init__(self):
        if self.z < 0:
            raise DomainError(f"nuclear charge must be nonnegative, got {self.z}")
        object.__setattr__(self, "z", float(self.z))
        if self.sigma is not None:
            object.__setattr__(self, "sigma", float(self.sigma))

    def _params(self) -> dict:
        params = {"z": self.z}
        if self.sigma is not None:
            params["sigma"] = self.sigma
        return params

    def total_charge(self) -> float:
        return float(self.z)

    def sample_radial(self, grid: RadialGrid) -> np.ndarray:
        r = grid.nodes
        return np.divide(-self.z, r, out=np.zeros_like(r), where=r > 0)

    def sample_box(self, grid: BoxGrid) -> np.ndarray:
        return molecular_potential(grid, [(self.z, (0.0, 0.0, 0.0))], self.sigma).values


@PotentialSpec.register(POTENTIAL_MOLECULAR)
@dataclass(frozen=True)
class Molecular(PotentialSpec):
    """Nuclei (Z_j, r_j). Sampled on the box with Gaussian smearing of width sigma (default 2h).

    Attributes:
        nuclei (tuple[tuple[float, tuple[float, float, float]], ...]): charges and positions.
        sigma (float | None): smearing width.
    """

    nuclei: tuple = ()
    sigma: float | None = None

    def __post_init__(self):
        nuclei = []
        for entry in self.nuclei:
            if isinstance(entry, dict):
                z, position = entry["z"], entry["position"]
            else:
                z, position = entry
            position = tuple(float(c) for c in position)
            if len(position) != 3:
                raise ConfigurationError(f"nucleus position {position} is not a 3-vector")
            if z < 0:
                raise DomainError(f"nuclear charge must be nonnegative, got {z}")
            nuclei.append((float(z), position))
        object.__setattr__(self, "nuclei", tuple(nuclei))
        if self.sigma is not None:
            object.__setattr__(self, "sigma", float(self.sigma))

    def _params(self) -> dict:
        params = {"nuclei": [{"z": z, "position": list(p)} for z, p in self.nuclei]}
        if self.sigma is not None:
            params["sigma"] = self.sigma
        return params

    def total_charge(self) -> float:
        return float(sum(z for z, _ in self.nuclei))

    def reduce(self) -> PotentialSpec | None:
        """The radial equivalent of this potential, if there is one."""
        charged = [(z, p) for z, p in self.nuclei if z > 0]
        if not charged:
            return NoPotential()
        if len(charged) == 1 and not any(charged[0][1]):
            return Atomic(z=charged[0][0], sigma=self.sigma)
        return None

    @property
    def needs_box(self) -> bool:
        return self.reduce() is None

    def sample_radial(self, grid: RadialGrid) -> np.ndarray:
        reduced = self.reduce()
        if reduced is None:
            raise ConfigurationError("a molecular potential off the origin needs a box grid")
        return reduced.sample_radial(grid)

    def sample_box(self, grid: BoxGrid) -> np.ndarray:
        return molecular_potential(grid, self.nuclei, self.sigma).values


@PotentialSpec.register(POTENTIAL_RADIAL_TABLE)
@dataclass(frozen=True)
class RadialTable(PotentialSpec):
    """Tabulated short-range radial potential.

    Values are linearly interpolated in r, held constant below the first radius and zero beyond the last.

    Attributes:
        r (tuple[float, ...]): strictly increasing radii.
        v (tuple[float, ...]): V(r) <= 0, with |r V(r)| vanishing at the end of the table.
    """

    r: tuple = ()
    v: tuple = ()

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        v = np.asarray(self.v, dtype=float)
        if r.ndim != 1 or r.shape != v.shape or r.size < 2:
            raise ConfigurationError("radial table needs matching r and v arrays with at least 2 entries")
        if np.any(np.diff(r) <= 0) or r[0] < 0:
            raise ConfigurationError("radial table radii must be nonnegative and strictly increasing")
        if np.any(v > 0):
            raise DomainError("radial table potential must be nonpositive")
        tail = np.abs(r * v)
        if tail[-1] > TABLE_TAIL_TOL * max(tail.max(), np.finfo(float).tiny):
            raise DomainError("radial table does not decay: |r V(r)| is not small at the last radius")
        object.__setattr__(self, "r", tuple(r.tolist()))
        object.__setattr__(self, "v", tuple(v.tolist()))

    def _params(self) -> dict:
        return {"r": list(self.r), "v": list(self.v)}

    def total_charge(self) -> float:
        return 0.0

    def evaluate(self, r: np.ndarray) -> np.ndarray:
        return np.interp(r, self.r, self.v, right=0.0)

    def sample_radial(self, grid: RadialGrid) -> np.ndarray:
        return self.evaluate(grid.nodes)

    def sample_box(self, grid: BoxGrid) -> np.ndarray:
        return self.evaluate(grid.radius())
