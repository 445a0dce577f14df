"""
Exception hierarchy shared by every module.

ForecastingError covers bad data and bad configuration (CLI exit code 2).
UsageError covers command-line misuse (CLI exit code 1).
"""


class ForecastingError(ValueError):
    """Root of all data / validation errors"""


class UsageError(Exception):
    """Command line was malformed"""


# Series container and diagnostics

class SeriesValidationError(ForecastingError):
    """TimeSeries or SiteRecord invariant violated"""


class ZeroVarianceError(ForecastingError):
    """All values are equal"""


class LagTooLargeError(ForecastingError):
    pass


class DegenerateSplitError(ForecastingError):
    pass


class EmptyWindowError(ForecastingError):
    pass


# Metrics

class LengthMismatchError(ForecastingError):
    pass


class EmptyInputError(ForecastingError):
    pass


class AllActualsZeroError(ForecastingError):
    pass


# Models

class EmptySeriesError(ForecastingError):
    pass


class AlphaOutOfRangeError(ForecastingError):
    pass


class SeriesTooShortError(ForecastingError):
    pass


class UninitializedError(ForecastingError):
    pass


class EmptyDataError(ForecastingError):
    pass


class DimensionMismatchError(ForecastingError):
    pass


class WindowLengthMismatchError(ForecastingError):
    pass


class InsufficientDataError(ForecastingError):
    pass


class InvalidConfigError(ForecastingError):
    pass


# CSV ingestion

class MalformedHeaderError(ForecastingError):
    pass


class _LineError(ForecastingError):
    """Error tied to a 1-based line of an input file"""

    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class BadRowError(_LineError):
    pass


class NonMonotonicDatesError(_LineError):
    def __init__(self, line, reason="date is not after the previous row"):
        super().__init__(line, reason)


class ConsistencyViolationError(_LineError):
    pass


# Reports

class EmptyReportsError(ForecastingError):
    pass


class MismatchedActualsError(ForecastingError):
    pass
