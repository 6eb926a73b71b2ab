"""This module defines the TFDW energy functional.

    E_V(u) = c_W int |grad u|^2 + c_TF int |u|^(10/3) - c_D int |u|^(8/3) + int V |u|^2 + D(|u|^2, |u|^2)

Every quantity is the discrete functional of the representation the state lives on (radial grid or box),
and `Functional.gradient` is its exact gradient in the quadrature inner product <a, b> = sum w a b.
"""

from dataclasses import dataclass, field, asdict

import numpy as np

from ..constants import EPSILON
from ..errors import ConfigurationError, DegenerateInputError, DomainError, UnsupportedError
from ..grid.cartesian import BoxGrid, Field3
from ..grid.radial import RadialFunction, RadialGrid, check_density
from .couplings import Constants
from .potential import PotentialSpec, NoPotential, RadialTable

State = RadialFunction | Field3


@dataclass(frozen=True)
class EnergyBreakdown:
    """The five terms of the energy and their total.

    Attributes:
        weizsacker (float): A = c_W int |grad u|^2.
        thomas_fermi (float): B = c_TF int |u|^(10/3).
        dirac (float): C = c_D int |u|^(8/3) (enters with a minus sign).
        external (float): int V |u|^2.
        hartree (float): D(|u|^2, |u|^2).
        total (float): A + B - C + external + D, always summed in this order.
    """

    weizsacker: float = 0.0
    thomas_fermi: float = 0.0
    dirac: float = 0.0
    external: float = 0.0
    hartree: float = 0.0
    total: float = field(init=False)

    def __post_init__(self):
        total = self.weizsacker + self.thomas_fermi - self.dirac + self.external + self.hartree
        object.__setattr__(self, "total", total)

    def check(self) -> None:
        assert self.weizsacker >= 0 and self.thomas_fermi >= 0 and self.dirac >= 0 and self.hartree >= 0, \
            f"negative energy term in {self}"
        assert self.total == self.weizsacker + self.thomas_fermi - self.dirac + self.external + self.hartree

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "EnergyBreakdown":
        return cls(**{k: float(doc[k]) for k in ("weizsacker", "thomas_fermi", "dirac", "external", "hartree")})


class Functional:
    """Energy and gradient for one (grid, potential, constants) triple.

    The potential is sampled once at construction.

    Attributes:
        grid (RadialGrid | BoxGrid): representation.
        potential (PotentialSpec): external potential.
        constants (Constants): couplings and toggles.
        v (np.ndarray): samples of V on the grid.
    """

    def __init__(self, grid: RadialGrid | BoxGrid, potential: PotentialSpec, constants: Constants):
        self.grid = grid
        self.potential = potential
        self.constants = constants
        self.v = potential.sample(grid)

    def energy(self, values: np.ndarray) -> EnergyBreakdown:
        return self.evaluate(values, gradient=False)[0]

    def gradient(self, values: np.ndarray) -> np.ndarray:
        return self.evaluate(values)[1]

    def evaluate(self, values: np.ndarray, gradient: bool = True) -> tuple[EnergyBreakdown, np.ndarray | None]:
        """Returns the breakdown and, if asked, the gradient representer

            g = 2 (c_W (-Lap u) + (5/3) c_TF |u|^(4/3) u - (4/3) c_D |u|^(2/3) u + V u + Phi u).
        """
        k, grid = self.constants, self.grid
        a = np.abs(values)
        rho = values * values
        terms = {"weizsacker": k.c_w * grid.gradient_energy(values)}
        g = k.c_w * grid.neg_laplacian(values) if gradient else None

        if k.thomas_fermi:
            a43 = a ** (4 / 3)
            terms["thomas_fermi"] = k.c_tf * grid.integrate(a43 * rho)
            if gradient:
                g = g + (5 / 3) * k.c_tf * a43 * values
        if k.dirac:
            a23 = a ** (2 / 3)
            terms["dirac"] = k.c_d * grid.integrate(a23 * rho)
            if gradient:
                g = g - (4 / 3) * k.c_d * a23 * values
        if k.external:
            terms["external"] = grid.integrate(self.v * rho)
            if gradient:
                g = g + self.v * values
        if k.hartree:
            phi, terms["hartree"] = grid.hartree(rho)
            if gradient:
                g = g + phi * values
        return EnergyBreakdown(**terms), (2 * g if gradient else None)


def _values(u: State) -> np.ndarray:
    u.check_finite()
    return u.values


def energy(u: State, potential: PotentialSpec | None = None, constants: Constants | None = None) -> EnergyBreakdown:
    """Term-by-term energy of u.

    Raises:
        InvalidStateError: if u has non-finite samples.
        ConfigurationError: if the potential cannot be represented on u's grid.
    """
    potential = potential or NoPotential()
    constants = constants or Constants()
    return Functional(u.grid, potential, constants).energy(_values(u))


def el_gradient(u: State, potential: PotentialSpec | None = None, constants: Constants | None = None) -> State:
    """Gradient of the energy at u, as a state on the same grid.

    <el_gradient(u), phi> is the directional derivative of `energy` along phi in the quadrature inner product.
    """
    potential = potential or NoPotential()
    constants = constants or Constants()
    g = Functional(u.grid, potential, constants).gradient(_values(u))
    return u.with_values(g)


def lower_bound_C1(potential: PotentialSpec | None, constants: Constants) -> float:
    """Constant C_1 with E_V(u) >= -C_1 int |u|^2.

    C_1 = c_D^2 / (2 c_TF) + 2 (sum_j Z_j)^2 / c_W; the second term vanishes without nuclei.

    Raises:
        UnsupportedError: for tabulated potentials, whose constant needs the bottom of a spectrum.
    """
    potential = potential or NoPotential()
    if isinstance(potential, RadialTable):
        raise UnsupportedError("C_1 for a tabulated potential needs the bottom of the spectrum of -c_W Lap - 4|V|")
    z = potential.total_charge()
    return constants.c_d ** 2 / (2 * constants.c_tf) + 2 * z ** 2 / constants.c_w


def lower_bound_sides(u: State, potential: PotentialSpec, constants: Constants) -> tuple[float, float]:
    """Both sides of the basic energy estimate

        E_V(u) + C_1 int |u|^2  >=  (c_TF/2) int |u|^(10/3) + (c_W/2) int |grad u|^2 + int |V| |u|^2 + D.

    Returns:
        tuple[float, float]: (left side, right side).
    """
    f = Functional(u.grid, potential, constants)
    values = _values(u)
    terms = f.energy(values)
    mass = u.grid.integrate(values ** 2)
    lhs = terms.total + lower_bound_C1(potential, constants) * mass
    full = Functional(u.grid, potential, Constants(constants.c_tf, constants.c_d, constants.c_w)).energy(values)
    rhs = (full.thomas_fermi / 2 + full.weizsacker / 2 + u.grid.integrate(np.abs(f.v) * values ** 2)
           + full.hartree)
    return lhs, rhs


def complete_square_margin(u: State, constants: Constants) -> float:
    """Smallest node value of c_TF |u|^(10/3) - c_D |u|^(8/3) + (c_D^2 / (4 c_TF)) |u|^2 (never negative)."""
    a = np.abs(_values(u))
    margin = constants.c_tf * a ** (10 / 3) - constants.c_d * a ** (8 / 3) + constants.square_constant * a ** 2
    return float(margin.min()) if margin.size else 0.0


def coulomb_cross(f: State, g: State) -> float:
    """D(f, g) = (1/2) int int f(x) g(y) / |x - y| for two densities on the same grid.

    Raises:
        ConfigurationError: if the densities live on different grids.
        DomainError: if either density is negative.
    """
    if f.grid != g.grid:
        raise ConfigurationError("densities live on different grids")
    for rho in (f, g):
        rho.check_finite()
        check_density(rho.values)
    phi, _ = f.grid.hartree(g.values)
    return 0.5 * f.grid.dot(f.values, phi)


def hardy_quotient(u: State, center=(0.0, 0.0, 0.0)) -> float:
    """(int |u|^2 / |x - center|^2) / (4 int |grad u|^2); at most 1 by Hardy's inequality.

    Radial states only admit the origin as center. On the box the node at the center is replaced by
    the average of 1/|x|^2 over the ball with the cell's volume.

    Raises:
        DomainError: if the center is not admissible for the representation.
        DegenerateInputError: if the kinetic energy vanishes while the numerator does not.
    """
    values = _values(u)
    grid = u.grid
    if isinstance(grid, RadialGrid):
        if any(center):
            raise DomainError("radial states only admit the origin as center")
        r = grid.nodes
        inv_r2 = np.divide(1.0, r ** 2, out=np.zeros_like(r), where=r > 0)
    else:
        if not grid.contains(center):
            raise DomainError(f"center {tuple(center)} is outside the box")
        r = grid.radius(center)
        a = (3 / (4 * np.pi)) ** (1 / 3) * grid.h
        inv_r2 = np.where(r > 0, 1.0 / np.where(r > 0, r, 1.0) ** 2, 3 / a ** 2)
    numerator = grid.integrate(values ** 2 * inv_r2)
    kinetic = grid.gradient_energy(values)
    if numerator == 0:
        return 0.0
    # round-off level kinetic energy of constant states counts as zero
    if kinetic <= EPSILON * numerator:
        raise DegenerateInputError("Hardy quotient with zero kinetic energy")
    return numerator / (4 * kinetic)
