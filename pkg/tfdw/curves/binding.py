"""Binding inequality and gap checks on computed curves.

Only exact samples are compared: interpolating a curve could fabricate violations.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError, DomainError
from .curve import EnergyCurve


@dataclass(frozen=True)
class BindingResidual:
    """[I_V(m') + I~_0(m - m')] - I_V(m); nonnegative when binding holds."""

    m: float
    m_prime: float
    residual: float


def _check_compatible(curve_v: EnergyCurve, curve_0: EnergyCurve) -> None:
    if curve_v.physics_hash != curve_0.physics_hash:
        raise ConfigurationError("curves were computed with different constants or grids")


def split_pairs(masses) -> list[tuple[float, float]]:
    """All (m, m') with m' and m - m' on the mass grid (or zero)."""
    masses = sorted(float(m) for m in masses)
    grid = [0.0] + masses
    pairs = []
    for m in masses:
        for m_prime in grid:
            if m_prime <= m and any(np.isclose(m - m_prime, x, rtol=1e-12, atol=1e-15) for x in grid):
                pairs.append((m, m_prime))
    return pairs


def binding_check(curve_v: EnergyCurve, curve_0: EnergyCurve, pairs) -> list[BindingResidual]:
    """Residuals of I_V(m) <= I_V(m') + I_0(m - m') on the requested splits.

    Raises:
        ConfigurationError: if the curves do not share constants and grids.
        DomainError: if a pair does not satisfy 0 <= m' <= m.
        MissingSampleError: if a needed mass was not sampled.
    """
    _check_compatible(curve_v, curve_0)
    residuals = []
    for m, m_prime in pairs:
        m, m_prime = float(m), float(m_prime)
        if not 0 <= m_prime <= m:
            raise DomainError(f"split ({m}, {m_prime}) needs 0 <= m' <= m")
        rest = m - m_prime
        if np.isclose(rest, 0.0, atol=1e-15 * max(m, 1.0)):
            rest = 0.0
        value = curve_v.value(m_prime) + curve_0.value(_snap(curve_0, rest)) - curve_v.value(m)
        residuals.append(BindingResidual(m, m_prime, value))
    return residuals


def _snap(curve: EnergyCurve, m: float) -> float:
    """Maps a difference of sampled masses onto the sampled mass it equals up to rounding."""
    if m == 0:
        return 0.0
    for s in curve.samples:
        if np.isclose(s.m, m, rtol=1e-12, atol=0.0):
            return s.m
    return m


def gap_curve(curve_v: EnergyCurve, curve_0: EnergyCurve) -> list[tuple[float, float, float]]:
    """(m, gap, normalized gap) with gap = I~_0(m) - I_V(m) and normalized gap = gap / (2 Z sqrt(m T_V(m))).

    The Hardy inequality bounds the normalized gap by 1 (up to the radial-ansatz error in I~_0).
    The first row is the convention (0, 0, 0).

    Raises:
        DomainError: if the potential carries no charge.
        MissingSampleError: if curve_0 lacks a mass of curve_v.
    """
    _check_compatible(curve_v, curve_0)
    z = curve_v.potential.total_charge()
    if not z > 0:
        raise DomainError("the gap bound needs a potential with positive total charge")
    rows = [(0.0, 0.0, 0.0)]
    for s in curve_v.samples:
        gap = curve_0.value(s.m) - s.energy
        scale = 2 * z * np.sqrt(s.m * s.kinetic)
        rows.append((s.m, gap, gap / scale if scale > 0 else np.inf))
    return rows


def per_mass_check(curve_0: EnergyCurve) -> list[tuple[float, float, float]]:
    """(m, I(m)/m, drop) rows with drop = I(m_prev)/m_prev - I(m)/m; binding of small masses makes drops positive."""
    rows = []
    previous = None
    for s in curve_0.samples:
        ratio = s.energy / s.m
        rows.append((s.m, ratio, None if previous is None else previous - ratio))
        previous = ratio
    return rows
