"""Energy curves m -> I_V(m).

A sweep solves the constrained problem at every requested mass. Sequential sweeps warm-start each solve from
the previous converged minimizer, rescaled to the new mass; parallel sweeps cold-start every mass on a thread pool.

Every sample is then completed by splits: pieces of mass m' and m - m' moved infinitely far apart cost
I_V(m') + I~_0(m - m'), so that sum is an upper bound for I_V(m) as good as any radial solve. A sample keeps
the smaller of its solve and its best split, and records which split won. Radial states on a bounded grid
cannot shed mass to infinity, so above the largest bound mass the splits take over.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from tqdm import tqdm

from ..energy.couplings import Constants
from ..energy.potential import PotentialSpec, NoPotential
from ..errors import ConfigurationError, MissingSampleError
from ..grid.cartesian import BoxGrid
from ..grid.radial import RadialGrid
from ..solver.dilation import dilate_state
from ..solver.minimize import MinimizeResult, SolveConfig, minimize_mass_constrained, preferred
from ..utils import log
from ..utils.config import config_hash, physics_hash

# relative tolerance of exact-match mass lookups
MATCH_RTOL = 1e-12

FREE_LABEL = "I~_0"
POTENTIAL_LABEL = "I_V"


@dataclass(frozen=True)
class CurveSample:
    """One point of a curve.

    Attributes:
        m (float): mass.
        energy (float): computed minimum.
        residual (float): relative projected-gradient norm of the minimizer.
        converged (bool): residual reached the tolerance.
        kinetic (float): int |grad u|^2 of the minimizer.
        iterations (int): accepted descent steps.
        boundary_mass (float): mass in the boundary shell.
        split (float | None): m' of the split that set `energy`, None when the solve did.
        solved (float | None): energy of the radial solve when a split replaced it.
    """

    m: float
    energy: float
    residual: float
    converged: bool
    kinetic: float = 0.0
    iterations: int = 0
    boundary_mass: float = 0.0
    split: float | None = None
    solved: float | None = None

    @property
    def solve_energy(self) -> float:
        return self.energy if self.solved is None else self.solved

    @property
    def settled(self) -> bool:
        """The solve converged, or a split replaced it."""
        return self.converged or self.split is not None

    @classmethod
    def from_result(cls, result: MinimizeResult) -> "CurveSample":
        return cls(m=result.m, energy=result.energy, residual=result.residual, converged=result.converged,
                   kinetic=result.kinetic, iterations=result.iterations, boundary_mass=result.boundary_mass)


@dataclass
class EnergyCurve:
    """Sampled energy curve with its provenance.

    Attributes:
        potential (PotentialSpec): external potential.
        constants (Constants): couplings.
        samples (list[CurveSample]): samples by strictly increasing mass.
        grid (RadialGrid): radial grid of the sweep (before any automatic extension).
        box (BoxGrid): box of the sweep.
        solve (SolveConfig): solver parameters (the mass field is irrelevant).
        results (dict[float, MinimizeResult]): minimizers of this session, not serialized.
    """

    potential: PotentialSpec = field(default_factory=NoPotential)
    constants: Constants = field(default_factory=Constants)
    samples: list = field(default_factory=list)
    grid: RadialGrid = field(default_factory=RadialGrid)
    box: BoxGrid = field(default_factory=BoxGrid)
    solve: SolveConfig = field(default_factory=SolveConfig)
    results: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.samples = sorted(self.samples, key=lambda s: s.m)
        masses = [s.m for s in self.samples]
        if np.any(np.diff(masses) <= 0):
            raise ConfigurationError("curve masses must be strictly increasing")

    @property
    def label(self) -> str:
        """The free curve is the radial value I~_0, an upper bound for I_0."""
        return FREE_LABEL if isinstance(self.potential, NoPotential) else POTENTIAL_LABEL

    @property
    def masses(self) -> np.ndarray:
        return np.array([s.m for s in self.samples])

    @property
    def energies(self) -> np.ndarray:
        return np.array([s.energy for s in self.samples])

    @property
    def tol(self) -> float:
        return self.solve.tol

    @property
    def config_hash(self) -> str:
        return config_hash(self.constants, self.potential, self.grid, self.box)

    @property
    def physics_hash(self) -> str:
        return physics_hash(self.constants, self.grid, self.box)

    def sample(self, m: float) -> CurveSample:
        """The sample at exactly m.

        Raises:
            MissingSampleError: if no sample matches m.
        """
        for s in self.samples:
            if np.isclose(s.m, m, rtol=MATCH_RTOL, atol=0.0):
                return s
        raise MissingSampleError(f"missing sample at m = {m:g} on the {self.label} curve")

    def value(self, m: float) -> float:
        """Energy at exactly m, with the convention I(0) = 0."""
        if m == 0:
            return 0.0
        return self.sample(m).energy

    def has(self, m: float) -> bool:
        try:
            self.sample(m)
        except MissingSampleError:
            return False
        return True


def warm_seed(previous: MinimizeResult, m: float):
    """Previous minimizer rescaled to mass m.

    Without charge the minimizer width scales like m^(-1/3), so the state is also dilated by (m / m_prev)^(1/3).
    """
    ratio = m / previous.m
    ell = ratio ** (1 / 3) if previous.potential.total_charge() == 0 else 1.0
    seed = dilate_state(previous.u, ell)
    return seed.with_values(np.sqrt(ratio) * seed.values)


def _lookup(samples, m: float) -> CurveSample | None:
    for s in samples:
        if np.isclose(s.m, m, rtol=MATCH_RTOL, atol=0.0):
            return s
    return None


def complete_splits(curve: EnergyCurve, free: EnergyCurve | None = None) -> EnergyCurve:
    """Lowers every sample to its best split I_V(m') + I~_0(m - m') over sampled m' and m - m'.

    Samples are visited by increasing mass, so the V-side part of a split is itself already completed.
    Completion starts from the solve energies, so completing twice changes nothing.

    Args:
        curve (EnergyCurve): curve to complete.
        free (EnergyCurve): the free curve supplying the escaping part; None completes a free curve
            against itself.

    Raises:
        ConfigurationError: if a potential curve comes without a free curve, or the curves do not share
            constants and grids.
    """
    if free is None:
        if not isinstance(curve.potential, NoPotential):
            raise ConfigurationError("completing a curve with a potential needs the free curve")
    elif not isinstance(free.potential, NoPotential):
        raise ConfigurationError("the escaping part of a split must come from the free curve")
    elif free.physics_hash != curve.physics_hash:
        raise ConfigurationError("curves were computed with different constants or grids")

    done = []
    for s in curve.samples:
        best, split = s.solve_energy, None
        for m_prime, left in [(0.0, 0.0)] + [(d.m, d.energy) for d in done]:
            rest = _lookup(done if free is None else free.samples, s.m - m_prime)
            if rest is None:
                continue
            candidate = left + rest.energy
            if candidate < best:
                best, split = candidate, m_prime
        if split is not None:
            log.logger.info(f"m = {s.m:g}: split m' = {split:g} gives {best:.10g}, below the solve "
                            f"{s.solve_energy:.10g}")
        done.append(replace(s, energy=best, split=split, solved=None if split is None else s.solve_energy))
    return EnergyCurve(potential=curve.potential, constants=curve.constants, samples=done, grid=curve.grid,
                       box=curve.box, solve=curve.solve, results=curve.results)


def compute_curve(potential: PotentialSpec | None, m_values, cfg: SolveConfig, constants: Constants | None = None,
                  grid: RadialGrid | None = None, box: BoxGrid | None = None, jobs: int = 1,
                  warm_start: bool = True, existing: EnergyCurve | None = None,
                  progress: bool = False, free: EnergyCurve | None = None) -> EnergyCurve:
    """Solves at every mass and collects the curve, completed by splits.

    Free curves are completed against themselves, potential curves against `free` when it is given.

    Args:
        potential (PotentialSpec): external potential (None for V = 0).
        m_values (list[float]): positive masses; sorted before solving.
        cfg (SolveConfig): solver parameters; the mass is replaced per sample.
        constants (Constants): couplings.
        grid (RadialGrid): radial grid.
        box (BoxGrid): box for potentials that need one.
        jobs (int): worker threads; above 1 every mass is cold-started concurrently.
        warm_start (bool): seed each sequential solve from the previous minimizer.
        existing (EnergyCurve): samples to reuse instead of solving again (resumed sweeps).
        progress (bool): show a progress bar.
        free (EnergyCurve): free curve for the splits of a potential curve.

    Raises:
        SolverFailure: carrying the offending mass.
    """
    potential = potential or NoPotential()
    constants = constants or Constants()
    grid = grid or RadialGrid()
    box = box or BoxGrid()
    masses = sorted(float(m) for m in m_values)
    if any(m <= 0 for m in masses):
        raise ConfigurationError("curve masses must be positive")

    done = {}
    if existing is not None:
        if existing.config_hash != config_hash(constants, potential, grid, box):
            raise ConfigurationError("cannot resume from a curve computed with another configuration")
        done = {m: existing.sample(m) for m in masses if existing.has(m)}
    todo = [m for m in masses if m not in done]
    log.logger.info(f"curve for {potential}: {len(todo)} solve(s), {len(done)} reused")

    def solve(m, seed=None):
        with log.stage(f"m={m:g}"):
            return minimize_mass_constrained(potential, cfg.with_mass(m), constants, grid, box, seed)

    results = {}
    with tqdm(total=len(todo), desc="curve", disable=not progress) as bar:
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                for m, result in zip(todo, pool.map(solve, todo)):
                    results[m] = result
                    bar.update(1)
        else:
            previous = None
            for m in todo:
                warm = warm_start and previous is not None and previous.converged
                result = solve(m, warm_seed(previous, m) if warm else None)
                if warm and not result.converged:
                    log.logger.info(f"m = {m:g}: warm start missed the tolerance, solving again from the cold seed")
                    cold = solve(m)
                    if preferred(cold.energy, cold.residual, result.energy, result.residual, cfg.tol):
                        result = cold
                results[m] = previous = result
                bar.update(1)

    samples = [done[m] if m in done else CurveSample.from_result(results[m]) for m in masses]
    curve = EnergyCurve(potential=potential, constants=constants, samples=samples, grid=grid, box=box,
                        solve=cfg, results=results)
    if isinstance(potential, NoPotential):
        return complete_splits(curve)
    if free is not None:
        return complete_splits(curve, free)
    return curve
