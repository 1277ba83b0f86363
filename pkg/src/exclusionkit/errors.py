"""Exception hierarchy shared by all exclusionkit modules."""


class ExclusionKitError(Exception):
    """Base class for all toolkit errors."""


class DomainError(ExclusionKitError, ValueError):
    """An argument lies outside the admissible domain of an operation."""


class RangeError(ExclusionKitError, ValueError):
    """An argument is inside the mathematical domain but beyond the supported range."""


class RootSearchError(ExclusionKitError, RuntimeError):
    """A root could not be bracketed or refined to the requested tolerance."""


class RefinementError(ExclusionKitError, ValueError):
    """The discretization is too coarse for the requested parameters."""


class DegenerateCover(ExclusionKitError):
    """The density carries too little mass for any B-square to exist."""


class PreconditionError(ExclusionKitError, ValueError):
    """A stated hypothesis of a bound is violated by the inputs."""


class ValidationError(ExclusionKitError, ValueError):
    """Input data failed a consistency check."""


class ConfigError(ExclusionKitError, ValueError):
    """A configuration file or key is invalid."""
