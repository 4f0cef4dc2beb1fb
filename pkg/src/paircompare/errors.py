"""Exception types shared across the toolkit."""


class PairCompareError(Exception):
    """Base class for all toolkit errors."""


class DataError(PairCompareError):
    """Input could not be parsed or fails structural validation."""


class DegenerateDataError(PairCompareError):
    """Sample is statistically degenerate for the requested operation.

    Raised for zero-variance samples, too few observations, all differences
    equal to the hypothesized value, and similar conditions under which the
    requested statistic is undefined.
    """


class CeilingExceededError(PairCompareError):
    """A required sample size exceeds the configured ceiling.

    The size is reported in the message rather than computed exactly.
    """

    def __init__(self, message: str, ceiling: int):
        super().__init__(message)
        self.ceiling = ceiling
