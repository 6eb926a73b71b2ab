"""Dilation reduction of the free problem.

For a unit-mass profile u with A_u = c_W int |grad u|^2, B_u = c_TF int |u|^(10/3), C_u = c_D int |u|^(8/3)
and D_u = D(|u|^2, |u|^2), the mass-m states m^2 l^(3/2) u(m l x) have energy

    l^2 (m^3 A_u + m^(11/3) B_u) - l (m^(7/3) C_u - m^3 D_u),

so the best dilation is the vertex of a parabola. This module evaluates that reduction, the profile curve
h_u(s) = s (C_u - s D_u)_+^2 / (A_u + s B_u) and its derivative.
"""

from typing import NamedTuple

import numpy as np

from ..energy.couplings import Constants
from ..energy.functional import Functional
from ..energy.potential import NoPotential
from ..errors import DomainError
from ..grid.cartesian import Field3, dilate_field
from ..grid.radial import RadialFunction, dilate

# tolerated deviation of the profile mass from 1
UNIT_MASS_TOL = 1e-6


class ProfileTerms(NamedTuple):
    a: float
    b: float
    c: float
    d: float


class DilationOptimum(NamedTuple):
    ell: float
    value: float
    attained: bool


def dilate_state(u: RadialFunction | Field3, ell: float) -> RadialFunction | Field3:
    """l^(3/2) u(l x) in either representation."""
    if isinstance(u, RadialFunction):
        return dilate(u, ell)
    return dilate_field(u, ell)


def profile_terms(u: RadialFunction | Field3, constants: Constants) -> ProfileTerms:
    """(A_u, B_u, C_u, D_u) of a unit-mass profile.

    Raises:
        DomainError: if the mass of u is not 1.
    """
    u.check_finite()
    mass = u.grid.integrate(u.values ** 2)
    if abs(mass - 1) > UNIT_MASS_TOL:
        raise DomainError(f"profile must have unit mass, got {mass:.10g}")
    k = Constants(constants.c_tf, constants.c_d, constants.c_w)
    terms = Functional(u.grid, NoPotential(), k).energy(u.values)
    return ProfileTerms(terms.weizsacker, terms.thomas_fermi, terms.dirac, terms.hartree)


def parabola_minimum(a: float, b: float) -> DilationOptimum:
    """inf over l >= 0 of l^2 a - l b."""
    assert a > 0, "the quadratic coefficient of a nonzero state is positive"
    if b > 0:
        return DilationOptimum(b / (2 * a), -b * b / (4 * a), True)
    return DilationOptimum(0.0, 0.0, False)


def coefficients(terms: ProfileTerms, m: float) -> tuple[float, float]:
    """(a, b) = (m^3 A + m^(11/3) B, m^(7/3) C - m^3 D)."""
    return (m ** 3 * terms.a + m ** (11 / 3) * terms.b,
            m ** (7 / 3) * terms.c - m ** 3 * terms.d)


def optimal_dilation(u: RadialFunction | Field3, m: float, constants: Constants) -> DilationOptimum:
    """Best dilation of a unit-mass profile at mass m.

    Returns:
        DilationOptimum: l* = b / (2a) and value -b^2 / (4a) when b > 0; otherwise (0, 0, False).
    """
    if not m > 0:
        raise DomainError(f"mass must be positive, got {m}")
    return parabola_minimum(*coefficients(profile_terms(u, constants), m))


def dilation_bound(u: RadialFunction | Field3, m: float, constants: Constants) -> float:
    """-m^(5/3) (C_u - m^(2/3) D_u)_+^2 / (4 (A_u + m^(2/3) B_u)), an upper bound on I_0(m)."""
    t = profile_terms(u, constants)
    s = m ** (2 / 3)
    return -m ** (5 / 3) * max(t.c - s * t.d, 0.0) ** 2 / (4 * (t.a + s * t.b))


def rescale_to_mass(u: RadialFunction | Field3, m: float, ell: float) -> RadialFunction | Field3:
    """m^2 l^(3/2) u(m l x), i.e. sqrt(m) times u dilated by m l."""
    v = dilate_state(u, m * ell)
    return v.with_values(np.sqrt(m) * v.values)


def h_values(terms: ProfileTerms, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(s, dtype=float)
    a, b, c, d = terms
    q = a + s * b
    p = np.maximum(c - s * d, 0.0)
    h = s * p ** 2 / q
    dh = p * (a * c - 3 * s * a * d - 2 * s ** 2 * b * d) / q ** 2
    return h, dh


def h_curve(u: RadialFunction | Field3, s_values, constants: Constants) -> np.ndarray:
    """Samples of (s, h_u(s), h_u'(s)) as the columns of an array.

    Raises:
        DomainError: if some s is not positive, or u does not have unit mass.
    """
    s = np.asarray(s_values, dtype=float)
    if np.any(s <= 0):
        raise DomainError("h_u is sampled at positive s only")
    h, dh = h_values(profile_terms(u, constants), s)
    return np.column_stack([s, h, dh])


def increasing_range(u: RadialFunction | Field3, constants: Constants) -> float:
    """Largest s0 such that h_u is strictly increasing on (0, s0).

    This is the smaller of C_u / D_u and the positive root of A C - 3 s A D - 2 s^2 B D.
    """
    a, b, c, d = profile_terms(u, constants)
    if d == 0:
        return np.inf
    root = (-3 * a * d + np.sqrt(9 * a * a * d * d + 8 * a * b * c * d)) / (4 * b * d) if b > 0 else c / (3 * d)
    return float(min(root, c / d))
