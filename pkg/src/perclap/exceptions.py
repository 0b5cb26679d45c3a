"""Exception types shared across the package."""


class PerclapError(Exception):
    """Base class for all package errors."""


class ConfigurationError(PerclapError):
    """Invalid run configuration or malformed config file."""


class DomainError(PerclapError):
    """Arguments outside the mathematical domain of an operation."""


class NumericError(PerclapError):
    """An eigensolver or factorization failed to produce a usable result."""


class UnsupportedSizeError(PerclapError):
    """Cluster too large for an exhaustive computation."""


class PrecisionError(PerclapError):
    """A truncated series cannot reach the requested accuracy."""


class InsufficientDataError(PerclapError):
    """Too few usable data points for a fit."""
