"""Exception hierarchy shared by the chansim modules and CLI."""


class ChansimError(Exception):
    """Base class for all chansim-specific errors."""


class ConfigError(ChansimError):
    """Invalid scenario configuration (bad value, bad key, bad combination)."""


class TraceError(ChansimError):
    """Malformed or inconsistent multipath trace input."""


class NumericError(ChansimError):
    """A numerical procedure could not produce a trustworthy result."""


class ElevationFloorError(ValueError):
    """Elevation angle below the configured floor for 1/sin(psi) terms."""
