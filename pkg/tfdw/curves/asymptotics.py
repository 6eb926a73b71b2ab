"""Small-mass behaviour of the free curve: I_0(m) / m^(5/3) -> -(c_D^2 / (4 c_W)) S and I_0(m) / m -> 0."""

import numpy as np
import pandas as pd

from ..energy.couplings import Constants
from .curve import EnergyCurve

SLOPE_COLUMNS = ["m", "ratio", "limit", "deviation", "per_mass"]


def slope_limit(S: float, constants: Constants) -> float:
    return -constants.c_d ** 2 / (4 * constants.c_w) * S


def small_m_slope(curve_0: EnergyCurve, S: float, constants: Constants) -> pd.DataFrame:
    """Compares I_0(m) / m^(5/3) with its small-mass limit.

    Returns:
        pd.DataFrame: columns m, ratio = I_0(m) / m^(5/3), limit, deviation = |ratio - limit| / |limit|,
            per_mass = I_0(m) / m; rows by decreasing mass.
    """
    limit = slope_limit(S, constants)
    rows = []
    for s in sorted(curve_0.samples, key=lambda s: -s.m):
        ratio = s.energy / s.m ** (5 / 3)
        deviation = abs(ratio - limit) / abs(limit) if limit != 0 else np.inf
        rows.append((s.m, ratio, limit, deviation, s.energy / s.m))
    return pd.DataFrame(rows, columns=SLOPE_COLUMNS)
