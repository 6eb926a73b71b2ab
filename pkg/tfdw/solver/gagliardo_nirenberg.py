"""Best constant of the Gagliardo-Nirenberg quotient (int |u|^(8/3))^2 / int |grad u|^2 over unit mass.

The supremum S fixes the small-mass behaviour of the free problem: I_0(m) / m^(5/3) -> -(c_D^2 / (4 c_W)) S.
It is estimated by maximizing the quotient over radial unit-mass states with the sphere descent engine.
"""

from dataclasses import dataclass

import numpy as np

from ..grid.radial import RadialFunction, RadialGrid, from_profile
from ..utils import log
from .descent import SphereDescent
from .dilation import dilate_state
from .minimize import SEED_PROFILES, SolveConfig


@dataclass
class GNResult:
    """Estimate of the supremum.

    Attributes:
        S (float): best quotient found.
        u (RadialFunction): maximizer, unit mass, dilated to int |grad u|^2 = 1.
        seed_quotient (float): quotient of the starting profile (a lower bound as well).
        residual (float): relative projected-gradient norm at the maximizer.
        iterations (int): accepted steps.
        converged (bool): residual <= tolerance.
    """

    S: float
    u: RadialFunction
    seed_quotient: float
    residual: float
    iterations: int
    converged: bool


def gn_quotient(u) -> float:
    """(int |u|^(8/3))^2 / (int |grad u|^2 (int |u|^2)^(5/3)); equals the quotient on unit mass and is
    invariant under scaling and dilation of u."""
    u.check_finite()
    grid = u.grid
    p = grid.integrate(np.abs(u.values) ** (8 / 3))
    kinetic = grid.gradient_energy(u.values)
    mass = grid.integrate(u.values ** 2)
    if kinetic <= 0 or mass <= 0:
        return 0.0
    return p * p / (kinetic * mass ** (5 / 3))


def gn_quotient_optimize(cfg: SolveConfig | None = None, grid: RadialGrid | None = None) -> GNResult:
    """Maximizes the quotient by minimizing log T - 2 log P on the unit sphere.

    Args:
        cfg (SolveConfig): iteration cap, tolerance, step rule and seed profile (the mass is ignored).
        grid (RadialGrid): radial grid (default grid if None).
    """
    cfg = cfg or SolveConfig()
    grid = grid or RadialGrid()
    seed = from_profile(grid, SEED_PROFILES[cfg.seed], m=1.0)

    def objective(x):
        lap = grid.neg_laplacian(x)
        kinetic = grid.gradient_energy(x)
        a23 = np.abs(x) ** (2 / 3)
        p = grid.integrate(a23 * x * x)
        value = np.log(kinetic) - 2 * np.log(p)
        return value, 2 * lap / kinetic - (16 / 3) * a23 * x / p

    kinetic0 = grid.gradient_energy(seed.values)
    solve = grid.preconditioner(kinetic0, 1.0)
    engine = SphereDescent(objective=objective, dot=grid.dot, m=1.0, precondition=lambda g: kinetic0 * solve(g),
                           max_iter=cfg.max_iter, tol=cfg.tol, step_rule=cfg.step_rule, step=cfg.step)
    run = engine.run(seed.values)

    u = seed.with_values(run.x)
    s = gn_quotient(u)
    u = dilate_state(u, 1 / np.sqrt(grid.gradient_energy(u.values)))
    log.logger.info(f"Gagliardo-Nirenberg estimate S = {s:.8g} after {run.iterations} iterations "
                    f"(residual {run.residual:.3e})")
    return GNResult(S=s, u=u, seed_quotient=gn_quotient(seed), residual=run.residual,
                    iterations=run.iterations, converged=run.converged)
