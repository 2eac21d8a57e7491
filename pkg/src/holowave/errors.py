"""Exception types raised by holowave."""


class HolowaveError(Exception):
    """Base class for all holowave errors."""


class NonZeroMean(HolowaveError, ValueError):
    """An inverse or negative-order multiplier was applied to a field with a mean."""


class GridMismatch(HolowaveError, ValueError):
    """Two fields living on different grids were combined."""


class InterfaceSingularity(HolowaveError, ValueError):
    """inf |1 + W_alpha| fell to or below the configured threshold."""


class StabilityViolation(HolowaveError, ValueError):
    """Time step exceeds the explicit stability bound."""


class NaNDetected(HolowaveError, FloatingPointError):
    """A non-finite value appeared during time integration."""


class ConfigError(HolowaveError, ValueError):
    """Experiment configuration could not be parsed or validated."""
