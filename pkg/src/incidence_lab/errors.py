"""Exception types shared across the package."""


class IncidenceLabError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(IncidenceLabError, ValueError):
    """A scalar parameter is outside its documented domain."""


class InputError(IncidenceLabError, ValueError):
    """Malformed input data (non-finite vectors, duplicate points, ...)."""


class CapacityError(IncidenceLabError, ValueError):
    """The request would exceed the documented size limits."""


class DivergenceError(ParameterError):
    """The requested integral or sum does not converge."""
