"""Energy-curve experiments.

Modules:
    curve: sweeps m -> I_V(m) into EnergyCurve objects.
    binding: binding inequality, gap and per-mass checks.
    asymptotics: small-mass slope against the Gagliardo-Nirenberg limit.
    export: CSV / JSON / gnuplot artifacts and curve loading.
"""

__all__ = ['curve', 'binding', 'asymptotics', 'export']


def __dir__():
    return sorted(__all__)
