"""Exception types shared across the toolkit."""


class LevyClockError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(LevyClockError, ValueError):
    """A numeric argument is out of its documented domain (non-finite,
    wrong sign, etc.)."""


class HypothesisError(LevyClockError):
    """A theorem hypothesis (Feller condition, exponential-moment bound,
    moment finiteness) fails for the requested operation."""


class ConfigError(LevyClockError, ValueError):
    """A config document failed schema validation. ``field`` carries the
    dotted path of the offending entry when known."""

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class DegenerateSampleError(LevyClockError, ValueError):
    """A statistical routine received a sample with no usable spread."""
