"""Exception types shared across the package."""


class KickentError(Exception):
    """Base class for package errors."""


class DomainError(KickentError, ValueError):
    """Input outside the documented domain of an operation."""


class BudgetError(KickentError):
    """Requested allocation exceeds the configured memory budget."""


class DimensionError(KickentError, ValueError):
    """Inconsistent or unsupported array dimensions."""


class DegenerateStateError(KickentError):
    """State norm too small for a meaningful Schmidt decomposition."""


class ConfigError(KickentError, ValueError):
    """Invalid or contradictory run configuration."""
