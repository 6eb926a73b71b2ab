"""Localization checks on states: IMS defect, basic localization gap and annulus residual.

Signed residuals are returned; positive values agree with the estimates, negative values point at
non-minimal states or discretization error.
"""

import numpy as np

from ..constants import ANNULUS_FACTOR
from ..energy.couplings import Constants
from ..energy.functional import coulomb_cross
from ..energy.potential import PotentialSpec, NoPotential
from ..errors import DomainError
from ..grid.cartesian import Field3
from ..grid.radial import RadialFunction
from .cutoff import annulus_constant, localization_constant, make_cutoff

State = RadialFunction | Field3


def _radius(u: State) -> np.ndarray:
    return u.grid.radius()


def ims_defect(u: State, R: float) -> float:
    """T(u) - T(chi_R u) - T(eta_R u) + int (|grad chi_R|^2 + |grad eta_R|^2) |u|^2.

    Zero in the continuum; the value measures the discretization error of the kinetic form.
    """
    u.check_finite()
    grid, values = u.grid, u.values
    cutoff = make_cutoff(R)
    r = _radius(u)
    chi, eta = cutoff.fields(r)
    localized = grid.gradient_energy(values) - grid.gradient_energy(chi * values) - grid.gradient_energy(eta * values)
    return localized + grid.integrate(cutoff.gradient_squared(r) * values ** 2)


def localization_gap(u: State, potential: PotentialSpec | None, R: float, constants: Constants) -> float:
    """Right side minus left side of the basic localization estimate,

        [-int V |eta_R u|^2 + C_2 int_Omega |u|^2] - 2 D(|chi_R u|^2, |eta_R u|^2),

    with Omega = {R < |x| < R + 1}. Nonnegative at minimizers.
    """
    u.check_finite()
    potential = potential or NoPotential()
    grid, values = u.grid, u.values
    cutoff = make_cutoff(R)
    r = _radius(u)
    chi, eta = cutoff.fields(r)
    inner, outer = (chi * values) ** 2, (eta * values) ** 2
    v = potential.sample(grid)
    rhs = -grid.integrate(v * outer) + localization_constant(constants, cutoff) * grid.integrate(
        values ** 2 * cutoff.transition(r))
    return rhs - 2 * coulomb_cross(u.with_values(inner), u.with_values(outer))


def annulus_residual(u: State, potential: PotentialSpec | None, R: float,
                     constants: Constants | None = None) -> float:
    """Right side minus left side of the annulus estimate,

        12 int_{|x| >= R} (C_3 + |x V(x)|) |u|^2 - (int_{|x| <= R} |u|^2) (int_{|x| >= 2R} |u|^2).

    Raises:
        DomainError: if R < 1.
    """
    if R < 1:
        raise DomainError(f"the annulus estimate needs R >= 1, got {R}")
    u.check_finite()
    potential = potential or NoPotential()
    constants = constants or Constants()
    grid = u.grid
    rho = u.values ** 2
    r = _radius(u)
    weight = annulus_constant(constants) + r * np.abs(potential.sample(grid))
    rhs = ANNULUS_FACTOR * grid.integrate(np.where(r >= R, weight * rho, 0.0))
    lhs = grid.integrate(np.where(r <= R, rho, 0.0)) * grid.integrate(np.where(r >= 2 * R, rho, 0.0))
    return rhs - lhs
