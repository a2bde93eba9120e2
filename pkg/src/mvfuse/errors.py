"""Exception hierarchy shared by every subpackage.

The CLI maps these onto exit codes, so the grouping matters:
``ConfigError`` -> 1, ``IntegrityError`` -> 2, ``TrainingError`` -> 3.
"""


class MvfuseError(Exception):
    """Base class for all library errors."""


class ContractError(MvfuseError, ValueError):
    """A documented precondition was violated by the caller."""


class DimensionError(ContractError):
    """Operand shapes are incompatible."""


class DomainError(MvfuseError, ValueError):
    """A numeric operation was applied outside its domain."""


class NumericalError(DomainError):
    """An operation produced NaN or infinite values."""


class TrainingError(MvfuseError, RuntimeError):
    """Optimisation failed; carries the epoch/batch where it happened."""

    def __init__(self, message, epoch=None, batch=None):
        where = []
        if epoch is not None:
            where.append(f"epoch {epoch}")
        if batch is not None:
            where.append(f"batch {batch}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.epoch = epoch
        self.batch = batch


class IntegrityError(MvfuseError, ValueError):
    """Input data is inconsistent (row counts, ids, NaNs, empty files)."""


class ParseError(IntegrityError):
    """A text file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SchemaError(IntegrityError):
    """A declared column is missing from a dataset file."""


class MappingError(IntegrityError):
    """A raw label has no entry in the label mapping."""


class StratificationError(ContractError):
    """A class is too small to be split."""


class FormatError(MvfuseError, ValueError):
    """A serialized model file is malformed."""


class ConfigError(MvfuseError, ValueError):
    """A run configuration is invalid."""
