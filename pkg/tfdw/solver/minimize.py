"""Mass-constrained minimization of the TFDW energy.

`minimize_mass_constrained` approximates I_V(m) = inf {E_V(u) : int |u|^2 = m} with `SphereDescent`.
States are radial unless the potential needs the box. Results over the radial class are upper bounds
for the true infimum (for V = 0 they are reported as the radial value I~_0(m)).
"""

from dataclasses import dataclass, field, asdict, fields

import numpy as np

from ..constants import (MAX_ITER, GRADIENT_TOL, STEP_RULE_BB, STEP_RULE_FIXED, INITIAL_STEP, SEED_GAUSSIAN,
                         SEED_EXPONENTIAL, BOUNDARY_SHELL, DIVERGENCE_FACTOR, EXTENT_WIDTHS)
from ..energy.couplings import Constants
from ..energy.functional import EnergyBreakdown, Functional, lower_bound_C1
from ..energy.potential import PotentialSpec, NoPotential
from ..errors import ConfigurationError, SolverFailure, UnsupportedError
from ..grid.cartesian import BoxGrid, Field3, resample_radial
from ..grid.radial import RadialFunction, RadialGrid, from_profile, resample
from ..utils import log
from .descent import SphereDescent
from .dilation import dilate_state, optimal_dilation

SEED_PROFILES = {
    SEED_GAUSSIAN: lambda r: np.pi ** -0.75 * np.exp(-0.5 * r ** 2),
    SEED_EXPONENTIAL: lambda r: np.pi ** -0.5 * np.exp(-r),
}

# dilation factors of the restart seeds, cycled
RESTART_FACTORS = (0.8, 1.25, 0.64, 1.5625)


@dataclass(frozen=True)
class SolveConfig:
    """Parameters of one constrained solve.

    Attributes:
        m (float): target mass.
        max_iter (int): iteration cap per start.
        tol (float): target relative projected-gradient norm.
        step_rule (str): "bb" (alternating two-point steps) or "fixed".
        step (float): initial step, or the step of the fixed rule.
        restarts (int): extra starts from dilated seeds.
        seed (str): seed profile, "gaussian" or "exponential".
        auto_extent (bool): grow r_max to fit the seed when the potential has no charge.
    """

    m: float = 1.0
    max_iter: int = MAX_ITER
    tol: float = GRADIENT_TOL
    step_rule: str = STEP_RULE_BB
    step: float = INITIAL_STEP
    restarts: int = 0
    seed: str = SEED_GAUSSIAN
    auto_extent: bool = True

    def __post_init__(self):
        if not self.m > 0:
            raise ConfigurationError(f"target mass must be positive, got {self.m}")
        if not self.tol > 0:
            raise ConfigurationError(f"tolerance must be positive, got {self.tol}")
        if self.max_iter < 1 or self.restarts < 0:
            raise ConfigurationError("max_iter must be positive and restarts nonnegative")
        if self.step_rule not in (STEP_RULE_BB, STEP_RULE_FIXED):
            raise ConfigurationError(f"unknown step rule '{self.step_rule}'")
        if not self.step > 0:
            raise ConfigurationError(f"step must be positive, got {self.step}")
        if self.seed not in SEED_PROFILES:
            raise ConfigurationError(f"unknown seed profile '{self.seed}'")

    @classmethod
    def from_dict(cls, config: dict) -> "SolveConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(config) - known
        if unknown:
            raise ConfigurationError(f"unknown solve keys: {sorted(unknown)}")
        casts = {"m": float, "max_iter": int, "tol": float, "step": float, "restarts": int,
                 "step_rule": str, "seed": str, "auto_extent": bool}
        try:
            return cls(**{k: casts[k](v) for k, v in config.items()})
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"invalid solve config: {e}") from e

    def to_dict(self) -> dict:
        return asdict(self)

    def with_mass(self, m: float) -> "SolveConfig":
        return SolveConfig(**{**asdict(self), "m": m})


@dataclass
class MinimizeResult:
    """Best state found by a constrained solve.

    Attributes:
        u (RadialFunction | Field3): final state, of mass m.
        breakdown (EnergyBreakdown): energy terms of u.
        residual (float): relative projected-gradient norm at u.
        iterations (int): accepted steps of the winning start.
        boundary_mass (float): mass in the outermost shell (5% of r_max).
        converged (bool): residual <= tolerance.
        multiplier (float): Lagrange multiplier estimate <g, u> / (2m).
        m (float): target mass.
        potential (PotentialSpec): external potential.
        constants (Constants): couplings.
        tol (float): tolerance of the solve.
        stagnated (bool): the winning start stopped because no decreasing step was found.
        history (list[float]): energies of the accepted steps.
    """

    u: RadialFunction | Field3
    breakdown: EnergyBreakdown
    residual: float
    iterations: int
    boundary_mass: float
    converged: bool
    multiplier: float
    m: float
    potential: PotentialSpec = field(default_factory=NoPotential)
    constants: Constants = field(default_factory=Constants)
    tol: float = GRADIENT_TOL
    stagnated: bool = False
    history: list = field(default_factory=list)

    @property
    def energy(self) -> float:
        return self.breakdown.total

    @property
    def grid(self) -> RadialGrid | BoxGrid:
        return self.u.grid

    @property
    def kinetic(self) -> float:
        """int |grad u|^2 without the coupling."""
        return self.breakdown.weizsacker / self.constants.c_w

    def summary(self) -> dict:
        return {"m": self.m, "energy": self.breakdown.to_dict(), "residual": self.residual,
                "iterations": self.iterations, "boundary_mass": self.boundary_mass,
                "converged": self.converged, "multiplier": self.multiplier,
                "radial_ansatz": isinstance(self.u, RadialFunction)}


def seed_width(potential: PotentialSpec, m: float, constants: Constants, profile: str = SEED_GAUSSIAN) -> float:
    """Length scale of the seed state.

    The free problem suggests 1 / (m l*) from the optimal dilation of the unit profile; with nuclei the
    hydrogenic length 2 c_W / Z is used when it is shorter. Without either, the width is 1.
    """
    unit = from_profile(RadialGrid(), SEED_PROFILES[profile], m=1.0)
    best = optimal_dilation(unit, m, constants)
    widths = []
    if best.attained:
        widths.append(1 / (m * best.ell))
    z = potential.total_charge()
    if z > 0:
        widths.append(2 * constants.c_w / z)
    return min(widths) if widths else 1.0


def prepare_grid(potential: PotentialSpec, cfg: SolveConfig, constants: Constants,
                 grid: RadialGrid | None = None, box: BoxGrid | None = None) -> RadialGrid | BoxGrid:
    """Chooses the representation for a solve; radial grids of charge-free problems fit the seed."""
    if potential.needs_box:
        return box or BoxGrid()
    grid = grid or RadialGrid()
    if cfg.auto_extent and potential.total_charge() == 0:
        extent = EXTENT_WIDTHS * seed_width(potential, cfg.m, constants, cfg.seed)
        if extent > grid.r_max:
            log.logger.info(f"extending r_max from {grid.r_max:g} to {extent:.4g} for m = {cfg.m:g}")
            grid = grid.with_extent(extent)
    return grid


def transfer(u: RadialFunction | Field3, grid: RadialGrid | BoxGrid) -> RadialFunction | Field3:
    """Moves a state onto another grid."""
    if isinstance(grid, RadialGrid):
        if not isinstance(u, RadialFunction):
            raise ConfigurationError("a box state cannot seed a radial solve")
        return resample(u, grid)
    if isinstance(u, RadialFunction):
        return resample_radial(u, grid)
    if u.grid != grid:
        raise ConfigurationError("box states can only seed solves on the same box")
    return u


def seed_state(potential: PotentialSpec, grid: RadialGrid | BoxGrid, m: float, constants: Constants,
               profile: str = SEED_GAUSSIAN) -> RadialFunction | Field3:
    """Mass-m seed of the chosen profile, sized by `seed_width`."""
    width = seed_width(potential, m, constants, profile)
    shape = SEED_PROFILES[profile]
    if isinstance(grid, RadialGrid):
        return from_profile(grid, lambda r: shape(r / width), m=m)
    u = resample_radial(lambda r: shape(r / width), grid)
    return u.with_values(u.values * np.sqrt(m / grid.integrate(u.values ** 2)))


def divergence_floor(potential: PotentialSpec, m: float, constants: Constants) -> float | None:
    try:
        return -DIVERGENCE_FACTOR * lower_bound_C1(potential, constants) * m
    except UnsupportedError:
        return None


def minimize_mass_constrained(potential: PotentialSpec | None, cfg: SolveConfig, constants: Constants | None = None,
                              grid: RadialGrid | None = None, box: BoxGrid | None = None,
                              seed: RadialFunction | Field3 | None = None) -> MinimizeResult:
    """Approximates I_V(m) by descent on the sphere int |u|^2 = m.

    Args:
        potential (PotentialSpec): external potential (None for V = 0).
        cfg (SolveConfig): target mass and solver parameters.
        constants (Constants): couplings.
        grid (RadialGrid): radial grid (default grid if None).
        box (BoxGrid): box for potentials that need one (default box if None).
        seed (RadialFunction | Field3): starting state, e.g. a warm start; moved onto the grid and renormalized.

    Returns:
        MinimizeResult: the lowest energy over all starts; ties go to the smaller residual.

    Raises:
        SolverFailure: if the energy falls below -10 C_1 m.
    """
    potential = potential or NoPotential()
    constants = constants or Constants()
    grid = prepare_grid(potential, cfg, constants, grid, box)
    functional = Functional(grid, potential, constants)

    if seed is None:
        seed = seed_state(potential, grid, cfg.m, constants, cfg.seed)
    else:
        seed = transfer(seed, grid)
    seed.check_finite()
    seeds = [seed] + [dilate_state(seed, RESTART_FACTORS[i % len(RESTART_FACTORS)]) for i in range(cfg.restarts)]

    kinetic = grid.gradient_energy(seed.values)
    sigma = constants.c_w * max(kinetic, np.finfo(float).tiny) / grid.integrate(seed.values ** 2)
    engine = SphereDescent(objective=lambda x: _objective(functional, x), dot=grid.dot, m=cfg.m,
                           precondition=grid.preconditioner(sigma, constants.c_w), max_iter=cfg.max_iter,
                           tol=cfg.tol, step_rule=cfg.step_rule, step=cfg.step,
                           floor=divergence_floor(potential, cfg.m, constants))

    log.logger.info(f"minimize m = {cfg.m:g} on {grid} with {potential} ({len(seeds)} start(s))")
    best = None
    for start in seeds:
        try:
            run = engine.run(start.values)
        except SolverFailure as e:
            raise SolverFailure(f"m = {cfg.m:g}: {e}", m=cfg.m) from e
        if best is None or _better(run, best, cfg.tol):
            best = run

    u = seed.with_values(best.x)
    u.meta.update({"m": cfg.m, "potential": potential.to_dict(), "constants": constants.to_dict()})
    breakdown = functional.energy(best.x)
    result = MinimizeResult(u=u, breakdown=breakdown, residual=best.residual, iterations=best.iterations,
                            boundary_mass=grid.integrate(best.x ** 2 * grid.boundary_mask(BOUNDARY_SHELL)),
                            converged=best.converged, multiplier=grid.dot(best.gradient, best.x) / (2 * cfg.m),
                            m=cfg.m, potential=potential, constants=constants, tol=cfg.tol,
                            stagnated=best.stagnated, history=best.history)
    log.logger.info(f"m = {cfg.m:g}: energy {result.energy:.10g}, residual {result.residual:.3e}, "
                    f"{result.iterations} iterations, converged = {result.converged}")
    if not result.converged:
        log.logger.warning(f"m = {cfg.m:g} did not reach tolerance {cfg.tol:g} (residual {result.residual:.3e})")
    return result


def _objective(functional: Functional, x: np.ndarray) -> tuple[float, np.ndarray]:
    terms, g = functional.evaluate(x)
    return terms.total, g


def preferred(value: float, residual: float, best_value: float, best_residual: float, tol: float) -> bool:
    """True when (value, residual) beats the best so far: lower energy beyond tol, ties to the smaller residual."""
    slack = tol * max(1.0, abs(best_value))
    if value < best_value - slack:
        return True
    return abs(value - best_value) <= slack and residual < best_residual


def _better(run, best, tol: float) -> bool:
    return preferred(run.value, run.residual, best.value, best.residual, tol)
