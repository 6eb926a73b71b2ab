"""Exceptions raised by tfdw.

Each class maps onto one failure kind of the laboratory, so callers (and the command line front end)
can react to the kind rather than to the message.
"""


class TfdwError(Exception):
    """Base class for all tfdw errors."""


class InvalidStateError(TfdwError, ValueError):
    """A state has non-finite samples, or a state file is malformed."""


class ConfigurationError(TfdwError, ValueError):
    """A grid, potential, solver or run configuration is invalid or inconsistent."""


class DomainError(TfdwError, ValueError):
    """An argument lies outside the domain of an operation."""


class DegenerateInputError(TfdwError, ValueError):
    """A quotient is undefined for the given input."""


class UnsupportedError(TfdwError, NotImplementedError):
    """The requested quantity is not computable for this input."""


class SolverFailure(TfdwError, RuntimeError):
    """The descent diverged.

    Attributes:
        m (float): target mass of the failed solve.
    """

    def __init__(self, message: str, m: float | None = None):
        super().__init__(message)
        self.m = m


class MissingSampleError(TfdwError, LookupError):
    """A curve lacks an exact sample at a requested mass."""
