"""Representations of trial states.

Modules:
    radial: spherically symmetric states on radial grids.
    cartesian: states on a cubic lattice for non-radial potentials.
    state_file: JSON state files for both representations.
"""

__all__ = ['radial', 'cartesian', 'state_file']


def __dir__():
    return sorted(__all__)
