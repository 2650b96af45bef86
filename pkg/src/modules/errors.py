from typing import Optional


class ChannelEstimationError(Exception):
    """Base class for every error raised by the simulator modules."""


class InvalidSparsityError(ChannelEstimationError, ValueError):
    pass


class DimensionError(ChannelEstimationError, ValueError):
    pass


class BlockPartitionError(ChannelEstimationError, ValueError):
    """The ADC branch count does not divide the channel length."""


class PatternCapacityError(ChannelEstimationError, ValueError):
    """More virtual measurements were requested than distinct patterns exist."""


class UndefinedStatisticError(ChannelEstimationError, ValueError):
    pass


class OracleBudgetError(ChannelEstimationError, ValueError):
    """Exhaustive search would enumerate too many supports."""


class InvalidConfigError(ChannelEstimationError, ValueError):
    """Bad experiment or solver configuration; `key` names the offending field."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class ResultFormatError(ChannelEstimationError, ValueError):
    """Malformed result CSV; `line_number` is 1-based and counts the header."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        super().__init__(message)
        self.line_number = line_number
