"""Exception hierarchy for morphboost."""


class MorphBoostError(Exception):
    """Base class for all morphboost errors."""


class ValidationError(MorphBoostError, ValueError):
    """An input array or argument failed validation."""


class ConfigError(MorphBoostError, ValueError):
    """A configuration field violates its documented bounds."""


class ParseError(MorphBoostError):
    """A CSV cell could not be parsed as a finite float.

    ``row`` and ``column`` are 1-based file coordinates of the offending
    cell (the header line, when present, counts as row 1).
    """

    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        self.row = row
        self.column = column
        if row is not None and column is not None:
            message = f"{message} (row {row}, column {column})"
        super().__init__(message)


class SchemaError(MorphBoostError):
    """The CSV shape is unusable: missing target column or no features."""


class SplitError(MorphBoostError):
    """Stratified splitting is impossible, e.g. a class with one sample."""


class DegenerateTargetError(MorphBoostError):
    """All target values are identical; no task can be learned."""


class DimensionError(MorphBoostError):
    """Feature count of the input does not match the model or tree."""


class TaskError(MorphBoostError):
    """The requested operation does not apply to the model's task."""


class FormatError(MorphBoostError):
    """A model file is corrupt or has an unsupported format version."""


class EmptyModelError(MorphBoostError):
    """The model has neither trees nor a base score to predict from."""


class SpecError(MorphBoostError):
    """A synthetic dataset spec has inconsistent parameters."""
