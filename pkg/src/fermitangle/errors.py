"""Exception hierarchy shared by every fermitangle module."""


class FermiTangleError(Exception):
    """Base class for all library errors."""


class InvalidSubset(FermiTangleError, ValueError):
    pass


class LinearlyDependentFactors(FermiTangleError, ValueError):
    pass


class DimensionMismatch(FermiTangleError, ValueError):
    pass


class NotUnitary(FermiTangleError, ValueError):
    pass


class UnsupportedN(FermiTangleError, ValueError):
    pass


class UnsupportedDims(FermiTangleError, ValueError):
    pass


class DoubleOccupancy(FermiTangleError, ValueError):
    pass


class UnknownName(FermiTangleError, KeyError):
    pass


class InvalidState(FermiTangleError, ValueError):
    pass


class BadM(FermiTangleError, ValueError):
    pass


class BadArgs(FermiTangleError, ValueError):
    pass


class NonConvergence(FermiTangleError, RuntimeError):
    pass


class DegeneracyResolutionFailure(FermiTangleError, RuntimeError):
    pass


class GridTooCoarse(FermiTangleError, ValueError):
    pass


class StateFileError(FermiTangleError, ValueError):
    """Malformed or unreadable state file."""


class NormDeviation(StateFileError):
    """State file norm is off by more than the loader accepts."""


class InvariantViolation(FermiTangleError, AssertionError):
    """A computed report contradicts its own bounds."""
