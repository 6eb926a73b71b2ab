"""Smooth radial partitions of unity.

The pair is f = cos(theta), g = sin(theta) with theta = (pi/2) S(t), where S is a C^3 ramp from 0 (t <= 0)
to 1 (t >= 1). Its slope is v psi(t / delta) on [0, delta], v on [delta, 1 - delta] and v psi((1 - t) / delta)
on [1 - delta, 1], with psi the quintic smoothstep and v = 1 / (1 - delta). Hence f^2 + g^2 = 1 exactly
and |f'|, |g'| <= (pi/2) / (1 - delta) < 2.

chi_R(x) = f(|x| - R) and eta_R(x) = g(|x| - R).
"""

from dataclasses import dataclass

import numpy as np

from ..constants import CUTOFF_PLATEAU, CUTOFF_SLOPE_BOUND
from ..energy.couplings import Constants
from ..errors import DomainError


def _ramp(x: np.ndarray) -> np.ndarray:
    """Antiderivative of the quintic smoothstep, vanishing at 0."""
    return x ** 6 - 3 * x ** 5 + 2.5 * x ** 4


def _smoothstep(x: np.ndarray) -> np.ndarray:
    return x ** 3 * (10 - 15 * x + 6 * x ** 2)


@dataclass(frozen=True)
class CutoffPair:
    """Partition of unity (chi_R, eta_R) cut at radius R.

    Attributes:
        R (float): chi_R = 1 for |x| <= R and chi_R = 0 for |x| >= R + 1.
        delta (float): length of the curved ends of the ramp.
    """

    R: float = 0.0
    delta: float = CUTOFF_PLATEAU

    def __post_init__(self):
        if self.R < 0:
            raise DomainError(f"cut radius must be nonnegative, got {self.R}")
        if not 0 < self.delta <= 0.5:
            raise DomainError(f"ramp ends must have length in (0, 1/2], got {self.delta}")

    @property
    def max_slope(self) -> float:
        return np.pi / 2 / (1 - self.delta)

    @property
    def slope_bound(self) -> float:
        """Declared bound on |f'| and |g'| used by the localization constants."""
        return CUTOFF_SLOPE_BOUND

    def angle(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """theta(t) and theta'(t)."""
        t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
        d, v = self.delta, 1 / (1 - self.delta)
        low, high = t < d, t > 1 - d
        s = np.where(low, v * d * _ramp(t / d),
                     np.where(high, 1 - v * d * _ramp((1 - t) / d), v * (t - d / 2)))
        ds = np.where(low, v * _smoothstep(t / d), np.where(high, v * _smoothstep((1 - t) / d), v))
        return np.pi / 2 * s, np.pi / 2 * ds

    def profiles(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """f(t), g(t), f'(t), g'(t)."""
        t = np.asarray(t, dtype=float)
        theta, dtheta = self.angle(t)
        f, g = np.cos(theta), np.sin(theta)
        inside, outside = t <= 0, t >= 1
        f = np.where(inside, 1.0, np.where(outside, 0.0, f))
        g = np.where(inside, 0.0, np.where(outside, 1.0, g))
        ramp = ~(inside | outside)
        return f, g, np.where(ramp, -g * dtheta, 0.0), np.where(ramp, f * dtheta, 0.0)

    def fields(self, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """chi_R and eta_R at distances r from the center."""
        f, g, _, _ = self.profiles(np.asarray(r) - self.R)
        return f, g

    def gradient_squared(self, r: np.ndarray) -> np.ndarray:
        """|grad chi_R|^2 + |grad eta_R|^2 at distances r."""
        _, _, df, dg = self.profiles(np.asarray(r) - self.R)
        return df ** 2 + dg ** 2

    def transition(self, r: np.ndarray) -> np.ndarray:
        """Mask of the region {0 < chi_R < 1} = {R < |x| < R + 1}."""
        r = np.asarray(r)
        return (r > self.R) & (r < self.R + 1)


def make_cutoff(R: float) -> CutoffPair:
    return CutoffPair(R=float(R))


def localization_constant(constants: Constants, cutoff: CutoffPair | None = None) -> float:
    """C_2 = c_D^2 / (4 c_TF) + c_W (|grad chi|_inf^2 + |grad eta|_inf^2), with the declared slope bound."""
    bound = (cutoff or CutoffPair()).slope_bound
    return constants.square_constant + constants.c_w * 2 * bound ** 2


def annulus_constant(constants: Constants) -> float:
    """C_3 = 8 c_W + c_D^2 / (4 c_TF)."""
    return 8 * constants.c_w + constants.square_constant
