"""Radial representation of spherically symmetric states.

This module defines the RadialGrid and RadialFunction classes together with the radial operations:
quadrature (`mass`), the von Weizsaecker integral (`kinetic_density`), the exact radial Hartree potential
(`hartree_radial`), dilations (`dilate`) and grid transfer (`resample`).

Grids are uniform in a coordinate s: s = ln r for logarithmic grids, s = r for linear grids.
Node weights are the trapezoid rule in s for the measure 4 pi r^2 dr.
Derivatives live on the cell midpoints and use a staggered fourth order stencil,
so the discrete kinetic form has no odd-even null mode and its gradient is an exact discrete Laplacian.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import make_interp_spline
from scipy.sparse import csc_matrix, csr_matrix, diags
from scipy.sparse.linalg import factorized

from ..constants import (RADIAL_KIND, RADIAL_R_MIN, RADIAL_R_MAX, RADIAL_N, RADIAL_MIN_POINTS,
                         DENSITY_TOL, MASS_RTOL)
from ..errors import ConfigurationError, DomainError, InvalidStateError
from ..utils import log

LINEAR = "linear"
LOGARITHMIC = "logarithmic"

# staggered derivative stencils at a midpoint, in units of 1/(24 ds)
_INTERIOR = np.array([1.0, -27.0, 27.0, -1.0]) / 24
_CLOSURE_LOW = np.array([-23.0, 21.0, 3.0, -1.0]) / 24
_CLOSURE_HIGH = np.array([1.0, -3.0, -21.0, 23.0]) / 24


@dataclass(frozen=True)
class RadialGrid:
    """Immutable radial grid.

    Attributes:
        kind (str): "linear" or "logarithmic".
        r_min (float): first node (> 0 for logarithmic grids).
        r_max (float): last node.
        n (int): number of nodes (at least 16).
    """

    kind: str = RADIAL_KIND
    r_min: float = RADIAL_R_MIN
    r_max: float = RADIAL_R_MAX
    n: int = RADIAL_N

    def __post_init__(self):
        if self.kind not in (LINEAR, LOGARITHMIC):
            raise ConfigurationError(f"unknown radial grid kind '{self.kind}'")
        if self.n < RADIAL_MIN_POINTS:
            raise ConfigurationError(f"radial grid needs at least {RADIAL_MIN_POINTS} nodes, got {self.n}")
        if not 0 <= self.r_min < self.r_max:
            raise ConfigurationError(f"invalid radial extent [{self.r_min}, {self.r_max}]")
        if self.kind == LOGARITHMIC and self.r_min <= 0:
            raise ConfigurationError("logarithmic grids need r_min > 0")

    @classmethod
    def from_dict(cls, config: dict) -> "RadialGrid":
        return cls(kind=config.get("kind", RADIAL_KIND), r_min=float(config.get("r_min", RADIAL_R_MIN)),
                   r_max=float(config.get("r_max", RADIAL_R_MAX)), n=int(config.get("n", RADIAL_N)))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "r_min": self.r_min, "r_max": self.r_max, "n": self.n}

    def with_extent(self, r_max: float) -> "RadialGrid":
        return RadialGrid(self.kind, self.r_min, r_max, self.n)

    # coordinates

    def to_s(self, r: np.ndarray) -> np.ndarray:
        """Maps radii to the uniform coordinate."""
        if self.kind == LOGARITHMIC:
            return np.log(r)
        return np.asarray(r, dtype=float)

    @cached_property
    def s(self) -> np.ndarray:
        return np.linspace(self.to_s(self.r_min), self.to_s(self.r_max), self.n)

    @cached_property
    def ds(self) -> float:
        return float(self.s[1] - self.s[0])

    @cached_property
    def nodes(self) -> np.ndarray:
        if self.kind == LOGARITHMIC:
            r = np.exp(self.s)
            r[0], r[-1] = self.r_min, self.r_max
            return r
        return self.s.copy()

    def radius(self) -> np.ndarray:
        """Distance of every node from the center."""
        return self.nodes

    def _jacobian(self, r: np.ndarray) -> np.ndarray:
        return r if self.kind == LOGARITHMIC else np.ones_like(r)

    @cached_property
    def weights(self) -> np.ndarray:
        r = self.nodes
        w = 4 * np.pi * r ** 2 * self._jacobian(r) * self.ds
        w[0] *= 0.5
        w[-1] *= 0.5
        return w

    @cached_property
    def midpoints(self) -> np.ndarray:
        s_mid = 0.5 * (self.s[:-1] + self.s[1:])
        return np.exp(s_mid) if self.kind == LOGARITHMIC else s_mid

    @cached_property
    def kinetic_weights(self) -> np.ndarray:
        r = self.midpoints
        return 4 * np.pi * r ** 2 / self._jacobian(r) * self.ds

    @cached_property
    def derivative(self) -> csr_matrix:
        """Sparse d/ds from nodes to midpoints, shape (n - 1, n)."""
        rows = np.repeat(np.arange(self.n - 1), 4)
        cols = (np.arange(self.n - 1) - 1)[:, None] + np.arange(4)
        coeffs = np.tile(_INTERIOR, (self.n - 1, 1))
        cols[0], coeffs[0] = np.arange(4), _CLOSURE_LOW
        cols[-1], coeffs[-1] = self.n - 4 + np.arange(4), _CLOSURE_HIGH
        return csr_matrix((coeffs.ravel() / self.ds, (rows, cols.ravel())), shape=(self.n - 1, self.n))

    @cached_property
    def stiffness(self) -> csc_matrix:
        d = self.derivative
        return (d.T @ diags(self.kinetic_weights) @ d).tocsc()

    # quadrature

    def integrate(self, f: np.ndarray) -> float:
        return float(self.weights @ f)

    def dot(self, a: np.ndarray, b: np.ndarray) -> float:
        return float(self.weights @ (a * b))

    def gradient_energy(self, values: np.ndarray) -> float:
        """Discrete integral of |u'|^2 over R^3."""
        du = self.derivative @ values
        return float(self.kinetic_weights @ (du * du))

    def neg_laplacian(self, values: np.ndarray) -> np.ndarray:
        """Representer of the gradient of `gradient_energy`, halved: <-Lap u, phi> = d/de T(u + e phi) / 2.

        Nodes without quadrature weight (r = 0 on linear grids) get 0; use `gradient_energy` for T itself.
        """
        weights = self.weights
        return np.divide(self.stiffness @ values, weights, out=np.zeros(self.n), where=weights > 0)

    def hartree(self, rho: np.ndarray) -> tuple[np.ndarray, float]:
        """Newton potential of a radial density and its self-energy D(rho, rho).

        The potential is phi_i = sum_j w_j rho_j / max(r_i, r_j), i.e. the enclosed charge over r_i
        plus the outer shells' potential, both accumulated as prefix sums.
        """
        r = self.nodes
        q = self.weights * rho
        inner = np.divide(np.cumsum(q), r, out=np.zeros_like(r), where=r > 0)
        shells = np.divide(q, r, out=np.zeros_like(r), where=r > 0)
        outer = np.append(np.cumsum(shells[::-1])[::-1][1:], 0.0)
        phi = inner + outer
        return phi, 0.5 * float(q @ phi)

    def preconditioner(self, sigma: float, c_w: float):
        """Returns a solver for (sigma + c_w (-Lap)) p = g."""
        solve = factorized((sigma * diags(self.weights) + c_w * self.stiffness).tocsc())
        weights = self.weights
        return lambda g: solve(weights * g)

    def boundary_mask(self, fraction: float) -> np.ndarray:
        return self.nodes >= (1 - fraction) * self.r_max


@dataclass(frozen=True, eq=False)
class RadialFunction:
    """Samples of a radial function u(r) on a RadialGrid.

    Attributes:
        grid (RadialGrid): grid the samples live on.
        values (np.ndarray): samples of u at the grid nodes.
        meta (dict): free-form provenance, written into state files.
    """

    grid: RadialGrid
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n,):
            raise InvalidStateError(f"expected {self.grid.n} samples, got shape {values.shape}")
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray) -> "RadialFunction":
        return RadialFunction(self.grid, values, dict(self.meta))

    def check_finite(self) -> None:
        if not np.all(np.isfinite(self.values)):
            raise InvalidStateError("state has non-finite samples")


def mass(u: RadialFunction) -> float:
    """Quadrature of 4 pi r^2 |u|^2.

    Raises:
        InvalidStateError: if `u` has NaN or Inf samples.
    """
    u.check_finite()
    return u.grid.integrate(u.values ** 2)


def kinetic_density(u: RadialFunction) -> float:
    """Integral of |grad u|^2 (no coupling constant)."""
    u.check_finite()
    return u.grid.gradient_energy(u.values)


def check_density(rho: np.ndarray) -> None:
    scale = float(np.max(np.abs(rho))) if rho.size else 0.0
    if np.any(rho < -DENSITY_TOL * max(scale, 1.0)):
        raise DomainError("density has negative values")


def hartree_radial(rho: RadialFunction) -> tuple[RadialFunction, float]:
    """Hartree potential and self-energy of a radial density.

    Args:
        rho (RadialFunction): samples of the density (not of u).

    Returns:
        tuple[RadialFunction, float]: potential phi and energy D(rho, rho) = (1/2) int rho phi.

    Raises:
        DomainError: if rho is negative beyond round-off.
    """
    rho.check_finite()
    check_density(rho.values)
    phi, energy = rho.grid.hartree(rho.values)
    return RadialFunction(rho.grid, phi), energy


def _spline(u: RadialFunction):
    return make_interp_spline(u.grid.s, u.values, k=3)


def evaluate(u: RadialFunction, r: np.ndarray) -> np.ndarray:
    """Evaluates u at arbitrary radii; constant below r_min, zero beyond r_max."""
    grid = u.grid
    out = np.zeros_like(r, dtype=float)
    below = r < grid.r_min
    inside = ~below & (r <= grid.r_max)
    out[below] = u.values[0]
    out[inside] = _spline(u)(grid.to_s(r[inside]))
    return out


def dilate(u: RadialFunction, ell: float) -> RadialFunction:
    """Returns ell^(3/2) u(ell r) on the same grid.

    Mass pushed beyond r_max (ell < 1) is lost; the lost fraction is logged
    and recorded under meta["clipped_mass"].

    Raises:
        DomainError: if ell <= 0.
    """
    if not ell > 0:
        raise DomainError(f"dilation factor must be positive, got {ell}")
    if ell == 1:
        return u.with_values(u.values.copy())

    r = u.grid.nodes
    v = u.with_values(ell ** 1.5 * evaluate(u, ell * r))
    if ell < 1:
        lost = u.grid.integrate(np.where(r > ell * u.grid.r_max, u.values ** 2, 0.0))
        total = u.grid.integrate(u.values ** 2)
        if total > 0 and lost > MASS_RTOL * total:
            log.logger.warning(f"dilation by {ell:.4g} pushes {lost / total:.3e} of the mass beyond r_max")
            v.meta["clipped_mass"] = lost
    return v


def resample(u: RadialFunction, grid: RadialGrid) -> RadialFunction:
    """Transfers u onto another radial grid by spline interpolation."""
    if grid == u.grid:
        return u.with_values(u.values.copy())
    return RadialFunction(grid, evaluate(u, grid.nodes), dict(u.meta))


def from_profile(grid: RadialGrid, profile, m: float | None = None) -> RadialFunction:
    """Samples a callable profile u(r), optionally normalized to mass m."""
    u = RadialFunction(grid, profile(grid.nodes))
    if m is not None:
        u = u.with_values(u.values * np.sqrt(m / mass(u)))
    return u
