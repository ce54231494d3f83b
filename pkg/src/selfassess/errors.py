"""Exception hierarchy shared across the platform."""
from __future__ import annotations


class AssessmentError(Exception):
    """Base class for every domain error raised by this package."""

    code = "error"


class DuplicateId(AssessmentError):
    code = "duplicate_id"


class UnknownParent(AssessmentError):
    code = "unknown_parent"


class CycleDetected(AssessmentError):
    code = "cycle_detected"


class UnknownTopic(AssessmentError):
    code = "unknown_topic"


class UnknownQuestion(AssessmentError):
    code = "unknown_question"


class MalformedKey(AssessmentError):
    code = "malformed_key"


class NonPositiveWeight(AssessmentError):
    code = "non_positive_weight"


class ParseError(AssessmentError):
    """Document could not be parsed at all; carries a location when known."""

    code = "parse_error"

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        super().__init__(message)
        self.line = line
        self.field = field


class ValidationError(AssessmentError):
    """Aggregates every violation found in a document."""

    code = "validation_error"

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = list(problems)


class ShapeMismatch(AssessmentError):
    code = "shape_mismatch"


class MissingProfile(AssessmentError):
    code = "missing_profile"


class OutOfRange(AssessmentError):
    code = "out_of_range"


class SessionNotFinal(AssessmentError):
    code = "session_not_final"


class EmptyInput(AssessmentError):
    code = "empty_input"


class InsufficientData(AssessmentError):
    code = "insufficient_data"
