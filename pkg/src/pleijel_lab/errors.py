"""Exception types shared across the package."""


class PleijelLabError(Exception):
    """Base class for all package errors."""


class DomainError(PleijelLabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConsistencyError(PleijelLabError):
    """Two independent evaluations of the same quantity disagree."""


class ConfigurationError(PleijelLabError, ValueError):
    """A grid, partition or sweep configuration is unusable."""


class InternalError(PleijelLabError, RuntimeError):
    """A numerical routine failed where it is expected to succeed."""


class RangeError(PleijelLabError, ValueError):
    """A query falls outside the range covered by a computed table."""


class ClassificationError(PleijelLabError):
    """A nodal domain could not be assigned to the annulus partition."""


class ResolutionError(PleijelLabError):
    """A grid-based count failed to converge under refinement."""
