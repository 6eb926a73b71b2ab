"""useful constants"""

from typing import Final

# a small number
EPSILON: Final = 1e-8

# densities below -DENSITY_TOL * max|rho| are rejected
DENSITY_TOL: Final = 1e-12

# default radial grid
RADIAL_KIND: Final = "logarithmic"
RADIAL_R_MIN: Final = 1e-4
RADIAL_R_MAX: Final = 40.0
RADIAL_N: Final = 2000
RADIAL_MIN_POINTS: Final = 16

# default box grid
BOX_LENGTH: Final = 16.0
BOX_N: Final = 48
BOX_MIN_N: Final = 16
BOX_MAX_N: Final = 96
SMEARING_CELLS: Final = 2.0     # nuclear smearing width in units of h

# solver defaults
MAX_ITER: Final = 3000
GRADIENT_TOL: Final = 1e-6
STEP_RULE_BB: Final = "bb"
STEP_RULE_FIXED: Final = "fixed"
INITIAL_STEP: Final = 0.5
MIN_STEP: Final = 1e-12
MAX_STEP: Final = 1e6
ARMIJO: Final = 1e-4
MAX_BACKTRACK: Final = 40
BOUNDARY_SHELL: Final = 0.05    # outermost fraction of r_max counted as boundary
DIVERGENCE_FACTOR: Final = 10.0
EXTENT_WIDTHS: Final = 10.0
SEED_GAUSSIAN: Final = "gaussian"
SEED_EXPONENTIAL: Final = "exponential"
MASS_RTOL: Final = 1e-10

# localization
CUTOFF_PLATEAU: Final = 0.2
CUTOFF_SLOPE_BOUND: Final = 2.0
ANNULUS_FACTOR: Final = 12.0
SPLIT_CANDIDATES: Final = 201
SPLIT_TIE: Final = 1e-12
ESCAPE_TOL_FACTOR: Final = 3.0
ESCAPE_BOUNDARY_FRACTION: Final = 0.01
CONCENTRATION_OFFSETS: Final = 400

# Built-In potential variants
POTENTIAL_NONE: Final = "none"
POTENTIAL_ATOMIC: Final = "atomic"
POTENTIAL_MOLECULAR: Final = "molecular"
POTENTIAL_RADIAL_TABLE: Final = "radial_table"

# Run Config Keys - top level
CONSTANTS: Final = "constants"
POTENTIAL: Final = "potential"
GRID: Final = "grid"
BOX: Final = "box"
SOLVE: Final = "solve"
CURVE: Final = "curve"
BINDING: Final = "binding"
DIAGNOSE: Final = "diagnose"
ASYMPTOTICS: Final = "asymptotics"
OUTPUT: Final = "output"
SEED: Final = "seed"

# Run Config Keys - shared
TYPE: Final = "type"
M_VALUES: Final = "m_values"

# environment
OUTPUT_ENV: Final = "TFDW_OUT"

# exit codes
EXIT_OK: Final = 0
EXIT_CONFIG: Final = 2
EXIT_NOT_CONVERGED: Final = 3

# export
CURVE_COLUMNS: Final = ("m", "energy", "residual", "converged")
CONCENTRATION_COLUMNS: Final = ("R", "M_R")
HASH_LENGTH: Final = 12
