"""LocalizationReport: every localization diagnostic of one minimizer."""

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from ..constants import BOUNDARY_SHELL
from ..energy.couplings import Constants
from ..energy.potential import PotentialSpec, NoPotential
from ..errors import DomainError
from ..grid.cartesian import Field3
from ..grid.radial import RadialFunction
from ..solver.minimize import MinimizeResult
from ..utils import log
from .localization import annulus_residual, ims_defect, localization_gap
from .radius import Concentration, concentration, radius_Rm, split_point

DEFAULT_RADII = (1.0, 2.0, 4.0, 8.0)

State = RadialFunction | Field3


@dataclass
class LocalizationReport:
    """Radii, split point and signed residuals of the localization estimates for a state of mass m.

    Residuals are right side minus left side, so nonnegative values agree with the estimates.

    Attributes:
        m (float): mass of the state.
        R_m (float): half-mass radius.
        r_m (float | None): split radius (None when the split interval does not fit on the grid).
        a_m (float | None): inner mass at the split radius.
        annulus_mass (float | None): unit-annulus mass at r_m.
        outer_coulomb (float | None): sup over |x| >= r_m of |x V(x)|.
        boundary_mass (float): mass in the outer boundary shell.
        external_mass (float): int |V| |u|^2, reported raw.
        localization_gaps (dict[float, float]): basic localization residual per cut radius.
        annulus_residuals (dict[float, float]): annulus residual per cut radius (R >= 1 only).
        ims_defects (dict[float, float]): IMS discretization defect per cut radius.
        concentration (list[tuple[float, float]]): (R, M_R) rows.
        shell_radius (float | None): smallest sampled R with M_R > m^(2/3).
    """

    m: float
    R_m: float
    r_m: float | None = None
    a_m: float | None = None
    annulus_mass: float | None = None
    outer_coulomb: float | None = None
    boundary_mass: float = 0.0
    external_mass: float = 0.0
    localization_gaps: dict = field(default_factory=dict)
    annulus_residuals: dict = field(default_factory=dict)
    ims_defects: dict = field(default_factory=dict)
    concentration: list = field(default_factory=list)
    shell_radius: float | None = None

    def to_dict(self) -> dict:
        def keyed(d):
            return {f"{k:g}": v for k, v in d.items()}

        return {"m": self.m, "R_m": self.R_m, "r_m": self.r_m, "a_m": self.a_m,
                "annulus_mass": self.annulus_mass, "outer_coulomb": self.outer_coulomb,
                "boundary_mass": self.boundary_mass, "external_mass": self.external_mass,
                "localization_gaps": keyed(self.localization_gaps),
                "annulus_residuals": keyed(self.annulus_residuals), "ims_defects": keyed(self.ims_defects),
                "concentration": [list(row) for row in self.concentration], "shell_radius": self.shell_radius}

    def masses_in_range(self) -> bool:
        masses = [self.a_m, self.annulus_mass, self.boundary_mass] + [mr for _, mr in self.concentration]
        return all(0 <= x <= self.m * (1 + 1e-9) for x in masses if x is not None)


def build_report(u: State, potential: PotentialSpec | None = None, constants: Constants | None = None,
                 radii=DEFAULT_RADII, concentration_radii=None) -> LocalizationReport:
    """Evaluates the localization diagnostics on a state, usually a converged minimizer."""
    potential = potential or NoPotential()
    constants = constants or Constants()
    u.check_finite()
    m = u.grid.integrate(u.values ** 2)
    R_m = radius_Rm(u)
    boundary = u.grid.integrate(u.values ** 2 * u.grid.boundary_mask(BOUNDARY_SHELL))
    report = LocalizationReport(m=m, R_m=R_m, boundary_mass=boundary,
                                external_mass=u.grid.integrate(np.abs(potential.sample(u.grid)) * u.values ** 2))
    try:
        split = split_point(u, potential, R_m=R_m)
        report.r_m, report.a_m = split.r_m, split.a_m
        report.annulus_mass, report.outer_coulomb = split.annulus_mass, split.outer_coulomb
    except DomainError as e:
        log.logger.warning(f"no split point: {e}")

    for R in radii:
        report.localization_gaps[R] = localization_gap(u, potential, R, constants)
        report.ims_defects[R] = ims_defect(u, R)
        if R >= 1:
            report.annulus_residuals[R] = annulus_residual(u, potential, R, constants)

    if concentration_radii is None:
        concentration_radii = np.linspace(0.5, 2 * max(R_m, 1.0) + 1, 16)
    table: Concentration = concentration(u, concentration_radii)
    report.concentration = table.rows()
    report.shell_radius = table.shell_radius
    return report


def radius_table(results: list[MinimizeResult]) -> pd.DataFrame:
    """(m, R_m) rows, sorted by mass, for inspecting how the radius grows."""
    rows = sorted((r.m, radius_Rm(r.u)) for r in results)
    return pd.DataFrame(rows, columns=["m", "R_m"])
