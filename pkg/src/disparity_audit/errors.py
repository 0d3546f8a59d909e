"""Exception hierarchy shared across the package."""


class AuditError(Exception):
    """Base class for all disparity-audit errors."""


class ConfigError(AuditError):
    """Invalid or inconsistent run configuration."""


class DataError(AuditError):
    """Malformed, inconsistent, or unresolvable input data."""


class InvariantError(AuditError):
    """An internal consistency check failed; indicates a bug, not bad input."""
