"""Exception hierarchy shared across the engine."""


class EarshotError(Exception):
    """Base class for all engine errors."""


class FormatError(EarshotError):
    """Malformed container or file structure."""


class UnsupportedFormatError(EarshotError):
    """Well-formed input whose parameters the engine does not accept."""

    def __init__(self, field, expected, actual):
        self.field = field
        self.expected = expected
        self.actual = actual
        super().__init__(f"unsupported {field}: expected {expected}, got {actual}")


class SchemaError(EarshotError):
    """Knowledge-base manifest failed validation."""

    def __init__(self, field_path, message):
        self.field_path = field_path
        super().__init__(f"{field_path}: {message}")


class ValidationError(EarshotError):
    """Invalid user-supplied value."""


class NotFoundError(EarshotError):
    """Referenced class or record does not exist."""


class ConflictError(EarshotError):
    """Mutation collides with an existing name."""


class TrainingError(EarshotError):
    """Classifier cannot be trained from the current knowledge base."""


class RecognitionError(EarshotError):
    """Recognition cannot proceed (empty KB, empty environment filter, ...)."""
