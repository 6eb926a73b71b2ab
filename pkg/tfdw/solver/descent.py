"""Riemannian gradient descent on the sphere <u, u> = m.

The engine is independent of the functional: it takes an objective returning (value, gradient representer),
the quadrature inner product and a preconditioner, and keeps every iterate on the sphere.

Each iteration
    1. preconditions the gradient and projects it onto the tangent space in the preconditioned metric,
    2. picks a two-point step (alternating the two Barzilai-Borwein quotients) or a fixed step,
    3. backtracks until the Armijo condition holds along the retraction u -> sqrt(m) v / |v|.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..constants import ARMIJO, INITIAL_STEP, MAX_BACKTRACK, MAX_ITER, GRADIENT_TOL, MAX_STEP, MIN_STEP, \
    STEP_RULE_BB, STEP_RULE_FIXED
from ..errors import ConfigurationError, SolverFailure
from ..utils import log

Objective = Callable[[np.ndarray], tuple[float, np.ndarray]]


@dataclass
class DescentResult:
    """Outcome of one descent run.

    Attributes:
        x (np.ndarray): final iterate (on the sphere).
        value (float): objective at x.
        gradient (np.ndarray): gradient representer at x.
        residual (float): relative norm of the tangent gradient at x.
        iterations (int): accepted steps.
        converged (bool): residual <= tolerance.
        stagnated (bool): backtracking could not find a decreasing step.
        history (list[float]): objective after every accepted step (first entry is the start).
    """

    x: np.ndarray
    value: float
    gradient: np.ndarray
    residual: float
    iterations: int
    converged: bool
    stagnated: bool = False
    history: list = field(default_factory=list)


class SphereDescent:
    """Projected, preconditioned descent with two-point steps and Armijo backtracking.

    Attributes:
        objective (Objective): values -> (value, gradient representer).
        dot (Callable): quadrature inner product.
        m (float): squared radius of the sphere.
        precondition (Callable): approximate inverse of the Hessian, self-adjoint in `dot`.
        max_iter (int): iteration cap.
        tol (float): target relative tangent-gradient norm.
        step_rule (str): "bb" or "fixed".
        step (float): initial (or fixed) step length.
        floor (float | None): objective values below it mean the iteration blew up.
    """

    def __init__(self, objective: Objective, dot: Callable, m: float, precondition: Callable | None = None,
                 max_iter: int = MAX_ITER, tol: float = GRADIENT_TOL, step_rule: str = STEP_RULE_BB,
                 step: float = INITIAL_STEP, floor: float | None = None):
        if step_rule not in (STEP_RULE_BB, STEP_RULE_FIXED):
            raise ConfigurationError(f"unknown step rule '{step_rule}'")
        self.objective = objective
        self.dot = dot
        self.m = m
        self.precondition = precondition or (lambda g: g)
        self.max_iter = max_iter
        self.tol = tol
        self.step_rule = step_rule
        self.step = step
        self.floor = floor

    def retract(self, v: np.ndarray) -> np.ndarray:
        return np.sqrt(self.m / self.dot(v, v)) * v

    def residual(self, x: np.ndarray, g: np.ndarray) -> float:
        norm = np.sqrt(self.dot(g, g))
        if norm == 0:
            return 0.0
        tangent = g - (self.dot(g, x) / self.m) * x
        return float(np.sqrt(self.dot(tangent, tangent)) / norm)

    def direction(self, x: np.ndarray, g: np.ndarray) -> np.ndarray:
        pg = self.precondition(g)
        px = self.precondition(x)
        return pg - (self.dot(x, pg) / self.dot(x, px)) * px

    def _two_point(self, it: int, s: np.ndarray, y: np.ndarray, last: float) -> float:
        sy = self.dot(s, y)
        if sy <= 0:
            return min(2 * last, MAX_STEP)
        tau = self.dot(s, s) / sy if it % 2 else sy / self.dot(y, y)
        return float(np.clip(tau, MIN_STEP, MAX_STEP))

    def run(self, x0: np.ndarray) -> DescentResult:
        x = self.retract(np.asarray(x0, dtype=float))
        value, g = self.objective(x)
        history = [value]
        tau = self.step
        prev_x = prev_d = None
        stagnated = converged = False
        res = self.residual(x, g)

        it = 0
        while it < self.max_iter:
            if res <= self.tol:
                converged = True
                break
            d = self.direction(x, g)
            slope = self.dot(g, d)
            if self.step_rule == STEP_RULE_BB and prev_x is not None:
                tau = self._two_point(it, x - prev_x, d - prev_d, tau)
            elif self.step_rule == STEP_RULE_FIXED:
                tau = self.step

            for _ in range(MAX_BACKTRACK):
                trial = self.retract(x - tau * d)
                trial_value, trial_g = self.objective(trial)
                if np.isfinite(trial_value) and trial_value <= value - ARMIJO * tau * slope:
                    break
                tau *= 0.5
            else:
                log.logger.info(f"backtracking exhausted at iteration {it} (residual {res:.3e})")
                stagnated = True
                break

            if self.floor is not None and trial_value < self.floor:
                raise SolverFailure(f"objective {trial_value:.6g} fell below the floor {self.floor:.6g}")
            assert trial_value <= value
            prev_x, prev_d = x, d
            x, value, g = trial, trial_value, trial_g
            history.append(value)
            res = self.residual(x, g)
            it += 1
        else:
            converged = res <= self.tol

        return DescentResult(x=x, value=value, gradient=g, residual=res, iterations=it, converged=converged,
                             stagnated=stagnated, history=history)
