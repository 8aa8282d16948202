"""Exception hierarchy shared across the package."""


class FDPError(Exception):
    """Base class for every error raised by this package."""


class DataError(FDPError):
    pass


class ParseError(DataError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class LabelError(DataError):
    pass


class UniquenessError(DataError):
    pass


class IndicatorError(FDPError):
    pass


class SampleSizeError(IndicatorError):
    pass


class CollinearityError(IndicatorError):
    pass


class DomainError(FDPError, ValueError):
    pass


class ImputationError(DataError):
    pass


class ParameterError(FDPError):
    pass


class StratificationError(FDPError):
    pass


class ArgumentError(FDPError, ValueError):
    pass


class ShapeError(FDPError, ValueError):
    pass


class ClassError(FDPError):
    """Raised when a binary learner receives a single class."""


class ConvergenceError(FDPError):
    pass


class DivergenceError(FDPError):
    pass


class JoinError(DataError):
    def __init__(self, missing_ids):
        self.missing_ids = list(missing_ids)
        super().__init__("no matching rows for sample ids: " + ", ".join(self.missing_ids))


class ConfigError(FDPError):
    pass
