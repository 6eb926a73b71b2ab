"""Localization diagnostics.

Modules:
    cutoff: smooth partitions of unity chi_R, eta_R.
    localization: IMS defect, basic localization gap and annulus residual.
    radius: half-mass radius, split point and concentration function.
    escape: escape detection over nested domains.
    report: LocalizationReport of a minimizer.
"""

__all__ = ['cutoff', 'localization', 'radius', 'escape', 'report']


def __dir__():
    return sorted(__all__)
