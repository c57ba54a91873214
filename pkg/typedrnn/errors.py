"""Exception hierarchy and CLI exit codes."""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class TypedRNNError(Exception):
    """Base class for every error raised by the package."""

    exit_code: int = EXIT_USAGE


class ConfigError(TypedRNNError, ValueError):
    """Invalid configuration value or missing configured path."""


class UsageError(TypedRNNError, ValueError):
    """Operation called with arguments it cannot work with."""


class CompatibilityError(TypedRNNError, ValueError):
    """Checkpoint does not fit the task, shapes or vocabulary at hand."""


class DataFormatError(TypedRNNError, ValueError):
    """Input file does not follow its expected format."""

    exit_code = EXIT_DATA


class MalformedTreeError(DataFormatError):
    """A CoNLL-U sentence block does not describe a single rooted tree."""

    def __init__(self, sentence: int, reason: str):
        self.sentence = sentence
        self.reason = reason
        super().__init__(f"sentence {sentence}: {reason}")


class EmbeddingFormatError(DataFormatError):
    """Bad line in a GloVe text file."""

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class RecordError(DataFormatError):
    """A SICK record carries an invalid value."""

    def __init__(self, pair_id: int | str, reason: str):
        self.pair_id = pair_id
        self.reason = reason
        super().__init__(f"pair {pair_id}: {reason}")


class NumericError(TypedRNNError):
    """Numerical failure: bad shapes, invalid domains, non-finite losses."""

    exit_code = EXIT_NUMERIC


class DimensionError(NumericError, ValueError):
    """Operand shapes do not agree."""


class ShapeError(DimensionError):
    """Operand has the wrong rank."""


class DomainError(NumericError, ValueError):
    """Value outside the domain an operation is defined on."""


class DegenerateInputError(NumericError, ValueError):
    """Statistic undefined for the given input (e.g. a constant sequence)."""


class GraphStateError(NumericError, RuntimeError):
    """Autodiff graph or optimizer used in an invalid order."""


class RelationshipError(UsageError):
    """Node arguments are not in the required tree relationship."""
