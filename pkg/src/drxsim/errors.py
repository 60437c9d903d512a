"""Exception hierarchy shared by the simulator and the analysis pipeline."""


class DrxSimError(Exception):
    """Base class for all errors raised by drxsim."""


class InvalidInputError(DrxSimError, ValueError):
    """An argument violates an operation's preconditions."""


class ConfigError(DrxSimError, ValueError):
    """A configuration document is malformed or references unknown fields.

    ``field`` holds the dotted path of the offending key when known.
    """

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class ParseError(DrxSimError, ValueError):
    """A CSV input could not be parsed; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class WorkloadOverlapError(DrxSimError):
    """A request cycle did not finish before the next one was due."""


class InvalidComparisonError(DrxSimError, ValueError):
    """Reports cannot be compared (missing baseline, unequal horizons)."""


class EmptySeriesError(DrxSimError, ValueError):
    """An operation left, or was given, no samples to work with."""


class InsufficientDataError(DrxSimError, ValueError):
    """Not even one full analysis slot fits in the series."""
