"""Radii of a state: the half-mass radius R_m, the split point (r_m, a_m) and the concentration function M_R."""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect
from scipy.signal import fftconvolve

from ..constants import SPLIT_CANDIDATES, SPLIT_TIE, CONCENTRATION_OFFSETS
from ..energy.potential import PotentialSpec, NoPotential
from ..errors import DomainError
from ..grid.cartesian import Field3
from ..grid.radial import RadialFunction
from ..utils import log
from .cutoff import make_cutoff

State = RadialFunction | Field3


def _mass(u: State) -> float:
    u.check_finite()
    return u.grid.integrate(u.values ** 2)


def inner_mass(u: State, R: float) -> float:
    """int |chi_R u|^2."""
    chi, _ = make_cutoff(R).fields(u.grid.radius())
    return u.grid.integrate((chi * u.values) ** 2)


def radius_Rm(u: State) -> float:
    """Radius R_m with int |chi_{R_m} u|^2 = int |eta_{R_m} u|^2 = m / 2.

    Found by bisection on [0, r_max] to 1e-8 r_max. Returns 0 when chi_0 already holds half of the mass.

    Raises:
        DomainError: if u = 0.
    """
    m = _mass(u)
    if m <= 0:
        raise DomainError("the radius of a zero state is undefined")
    r_max = u.grid.r_max
    # box corners lie beyond r_max
    upper = max(r_max, float(np.max(u.grid.radius())))

    def excess(R):
        return inner_mass(u, R) - m / 2

    if excess(0.0) >= 0:
        return 0.0
    R = bisect(excess, 0.0, upper, xtol=1e-8 * r_max)
    log.logger.debug(f"R_m = {R:.10g} for m = {m:.6g}")
    return float(R)


@dataclass(frozen=True)
class SplitPoint:
    """Radius with small unit-annulus mass.

    Attributes:
        r_m (float): chosen radius in [R_m m^(-1/2), 2 R_m m^(-1/2)].
        a_m (float): int |chi_{r_m} u|^2.
        annulus_mass (float): int_{r_m <= |x| <= r_m + 1} |u|^2.
        outer_coulomb (float): sup over |x| >= r_m of |x V(x)|, the quantity bounding a_m for large m.
    """

    r_m: float
    a_m: float
    annulus_mass: float
    outer_coulomb: float


def annulus_mass(u: State, r: float, width: float = 1.0) -> float:
    radius = u.grid.radius()
    return u.grid.integrate(np.where((radius >= r) & (radius <= r + width), u.values ** 2, 0.0))


def split_point(u: State, potential: PotentialSpec | None = None, R_m: float | None = None) -> SplitPoint:
    """Picks r_m among evenly spaced candidates in [R_m m^(-1/2), 2 R_m m^(-1/2)] minimizing the unit-annulus
    mass; ties (within 1e-12) go to the smallest radius.

    Raises:
        DomainError: if the candidate interval plus one unit does not fit on the grid.
    """
    potential = potential or NoPotential()
    m = _mass(u)
    R_m = radius_Rm(u) if R_m is None else R_m
    lo = R_m / np.sqrt(m)
    hi = 2 * lo
    if hi + 1 > u.grid.r_max:
        raise DomainError(f"split interval [{lo:.4g}, {hi + 1:.4g}] exceeds r_max = {u.grid.r_max:g}")
    candidates = np.linspace(lo, hi, SPLIT_CANDIDATES)
    masses = np.array([annulus_mass(u, r) for r in candidates])
    index = int(np.flatnonzero(masses <= masses.min() + SPLIT_TIE)[0])
    r_m = float(candidates[index])

    radius = u.grid.radius()
    tail = radius >= r_m
    v = np.abs(potential.sample(u.grid))
    outer = float(np.max(radius[tail] * v[tail])) if np.any(tail) else 0.0
    return SplitPoint(r_m=r_m, a_m=inner_mass(u, r_m), annulus_mass=float(masses[index]), outer_coulomb=outer)


@dataclass(frozen=True)
class Concentration:
    """Concentration function sampled at radii.

    Attributes:
        radii (np.ndarray): ball radii R.
        masses (np.ndarray): M_R, the largest mass in a ball of radius R.
        threshold (float): m^(2/3).
        shell_radius (float | None): smallest sampled R with M_R > m^(2/3).
    """

    radii: np.ndarray
    masses: np.ndarray
    threshold: float
    shell_radius: float | None

    def rows(self) -> list[tuple[float, float]]:
        return [(float(r), float(mr)) for r, mr in zip(self.radii, self.masses)]


def _cap_fraction(r: np.ndarray, a: float, R: float) -> np.ndarray:
    """Fraction of the sphere |x| = r inside the ball of radius R centered at distance a from the origin."""
    if a == 0:
        return (r <= R).astype(float)
    safe = np.where(r > 0, r, 1.0)
    frac = (R * R - (r - a) ** 2) / (4 * a * safe)
    frac = np.where(r <= R - a, 1.0, frac)
    frac = np.where(r == 0, float(a <= R), frac)
    return np.clip(frac, 0.0, 1.0)


def _radial_concentration(u: RadialFunction, R: float, offsets: np.ndarray) -> float:
    grid = u.grid
    rho = u.values ** 2
    r = grid.nodes
    return max(grid.integrate(rho * _cap_fraction(r, a, R)) for a in offsets)


def _box_concentration(u: Field3, R: float) -> float:
    grid = u.grid
    half = min(int(np.ceil(R / grid.h)), grid.n - 1)
    axis = np.arange(-half, half + 1) * grid.h
    ball = (axis[:, None, None] ** 2 + axis[None, :, None] ** 2 + axis[None, None, :] ** 2 <= R * R).astype(float)
    window = fftconvolve(u.values ** 2, ball, mode="same")
    return grid.weights * float(window.max())


def concentration(u: State, radii) -> Concentration:
    """M_R = sup_y int_{|x - y| <= R} |u|^2 at each R.

    Radial states scan CONCENTRATION_OFFSETS centers on a ray through the origin; box states use a
    sliding-window sum over lattice centers.
    """
    m = _mass(u)
    radii = np.asarray(radii, dtype=float)
    if isinstance(u, RadialFunction):
        offsets = np.linspace(0.0, u.grid.r_max, CONCENTRATION_OFFSETS)
        masses = np.array([_radial_concentration(u, R, offsets) for R in radii])
    else:
        masses = np.array([_box_concentration(u, R) for R in radii])
    threshold = m ** (2 / 3)
    above = np.flatnonzero(masses > threshold)
    shell = float(radii[above[0]]) if above.size else None
    return Concentration(radii=radii, masses=masses, threshold=threshold, shell_radius=shell)
