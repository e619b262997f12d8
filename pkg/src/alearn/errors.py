"""Exception types raised across the package."""


class AlearnError(Exception):
    pass


class ValidationError(AlearnError, ValueError):
    """Input array violates a shape or probability-simplex contract."""


class ShapeError(ValidationError):
    pass


class ConfigError(AlearnError, ValueError):
    """Invalid configuration. ``path`` names the offending field when known."""

    def __init__(self, message, path=None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class BudgetError(AlearnError, ValueError):
    pass


class DoubleLabelError(AlearnError, ValueError):
    pass


class LabelIndexError(AlearnError, IndexError):
    pass


class TrainingError(AlearnError, RuntimeError):
    pass


class FormatError(AlearnError, ValueError):
    """A file does not follow its expected binary or text layout."""


class ConsistencyError(AlearnError, ValueError):
    pass


class TruncatedFileError(AlearnError, OSError):
    pass


class AlignmentError(AlearnError, ValueError):
    pass
