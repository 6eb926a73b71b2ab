"""Constrained minimization.

Modules:
    descent: Riemannian descent engine on the sphere int |u|^2 = m.
    minimize: mass-constrained minimization of the energy.
    dilation: dilation reduction of the free problem and the h_u curve.
    gagliardo_nirenberg: best constant of the quotient governing small masses.
"""

__all__ = ['descent', 'minimize', 'dilation', 'gagliardo_nirenberg']


def __dir__():
    return sorted(__all__)
