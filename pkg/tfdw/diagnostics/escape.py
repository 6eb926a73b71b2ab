"""Escape detection over nested domains.

A minimizer cannot exist when enlarging the domain keeps lowering the constrained minimum while mass
sits at the boundary. Given solves of the same problem on growing grids, `escape_indicator` flags that
signature.
"""

from dataclasses import dataclass, field

import numpy as np

from ..constants import ESCAPE_TOL_FACTOR, ESCAPE_BOUNDARY_FRACTION
from ..errors import ConfigurationError
from ..grid.radial import RadialGrid
from ..solver.minimize import MinimizeResult
from ..utils import log

ESCAPE_SUSPECTED = "escape-suspected"


@dataclass
class EscapeReport:
    """Energies and boundary masses over growing domains.

    Attributes:
        rows (list[tuple[float, float, float]]): (r_max, energy, boundary_mass), by increasing r_max.
        decreasing (bool): the energy dropped by more than 3 tol max(1, |E|) at every enlargement.
        boundary_fraction (float): boundary mass over m at the largest domain.
        flags (list[str]): "escape-suspected" when both conditions hold.
    """

    rows: list
    decreasing: bool
    boundary_fraction: float
    flags: list = field(default_factory=list)

    @property
    def escape_suspected(self) -> bool:
        return ESCAPE_SUSPECTED in self.flags

    def to_dict(self) -> dict:
        return {"rows": [list(r) for r in self.rows], "decreasing": self.decreasing,
                "boundary_fraction": self.boundary_fraction, "flags": list(self.flags)}


def _physics(result: MinimizeResult) -> tuple:
    grid = result.grid
    kind = (grid.kind, grid.r_min, grid.n) if isinstance(grid, RadialGrid) else ("box", grid.n)
    return (result.potential, result.constants, result.m, kind)


def _extent(result: MinimizeResult) -> float:
    return result.grid.r_max


def escape_indicator(results: list[MinimizeResult]) -> EscapeReport:
    """Flags escaping mass across solves of one problem on nested domains.

    Raises:
        ConfigurationError: for fewer than two results, differing physics, or repeated extents.
    """
    if len(results) < 2:
        raise ConfigurationError("escape detection needs at least two domains")
    physics = _physics(results[0])
    if any(_physics(r) != physics for r in results[1:]):
        raise ConfigurationError("results describe different problems")
    ordered = sorted(results, key=_extent)
    extents = [_extent(r) for r in ordered]
    if np.any(np.diff(extents) <= 0):
        raise ConfigurationError("domains must have distinct extents")

    tol = max(r.tol for r in ordered)
    decreasing = all(b.energy < a.energy - ESCAPE_TOL_FACTOR * tol * max(1.0, abs(a.energy))
                     for a, b in zip(ordered, ordered[1:]))
    largest = ordered[-1]
    fraction = largest.boundary_mass / largest.m
    flags = [ESCAPE_SUSPECTED] if decreasing and fraction >= ESCAPE_BOUNDARY_FRACTION else []
    if flags:
        log.logger.warning(f"escape suspected for m = {largest.m:g}: boundary fraction {fraction:.3g}")
    rows = [(_extent(r), r.energy, r.boundary_mass) for r in ordered]
    return EscapeReport(rows=rows, decreasing=decreasing, boundary_fraction=fraction, flags=flags)
