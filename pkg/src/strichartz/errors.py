"""Exception hierarchy shared by all modules."""


class StrichartzError(Exception):
    """Base class for every error raised by this package."""


class RepresentationError(StrichartzError, ValueError):
    """A field was passed in the wrong (space/frequency) representation."""


class DomainError(StrichartzError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class ParameterError(StrichartzError, ValueError):
    pass


class SingularMultiplierError(ParameterError):
    """A negative-order multiplier met a nonzero zero-frequency mode."""


class PreconditionError(StrichartzError, ValueError):
    pass


class ClassificationError(DomainError):
    """An exponent pair is not admissible for the requested experiment."""


class ResolutionError(StrichartzError):
    """The grid does not resolve the requested scale."""


class FitError(ResolutionError):
    """Not enough (or degenerate) data for a power-law fit."""
