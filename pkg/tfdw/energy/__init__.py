"""The TFDW energy.

Modules:
    couplings: coupling constants and term toggles.
    potential: external potentials and their sampling on grids.
    functional: energy breakdown, gradient and the explicit lower-bound constants.
"""

__all__ = ['couplings', 'potential', 'functional']


def __dir__():
    return sorted(__all__)
