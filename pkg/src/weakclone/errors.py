"""Exception types shared across the package.

Two families matter to callers: configuration problems (bad user input,
mapped to exit code 2 by the command line tools) and numerical
precondition violations (a computation that cannot be carried out safely
at the requested settings, mapped to exit code 3).
"""


class ConfigError(ValueError):
    """Invalid configuration or user input."""


class NumericalPreconditionError(RuntimeError):
    """A numerical safety precondition does not hold."""


class CapacityError(NumericalPreconditionError):
    """Requested state exceeds the amplitude budget."""


class GridCoverageError(NumericalPreconditionError):
    """Grid too small to hold the requested wave function."""


class BandwidthError(NumericalPreconditionError):
    """Requested momentum shift exceeds the grid's spectral bandwidth."""


class LeakageError(NumericalPreconditionError):
    """Wave function has leaked to the grid boundary (wraparound risk)."""


class VanishingOverlapError(NumericalPreconditionError):
    """Pre/post selection overlap is numerically zero; weak value undefined."""


class RepresentationError(NumericalPreconditionError):
    """Requested state representation cannot support the operation."""


class ZeroWeightError(NumericalPreconditionError):
    """State weight is numerically zero; normalized moments undefined."""


class DegenerateFitError(NumericalPreconditionError):
    """Too few usable points remain for a convergence fit."""
