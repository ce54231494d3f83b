"""Ordinal scales and enumerations used throughout the platform."""
from __future__ import annotations

import enum

from .errors import OutOfRange


class Difficulty(enum.IntEnum):
    EASY = 1
    MEDIUM = 2
    DIFFICULT = 3

    @classmethod
    def from_label(cls, label: str) -> "Difficulty":
        try:
            return _DIFFICULTY_BY_LABEL[label]
        except KeyError:
            raise OutOfRange(f"unknown difficulty {label!r}") from None

    @property
    def label(self) -> str:
        return self.name.lower()


_DIFFICULTY_BY_LABEL = {d.name.lower(): d for d in Difficulty}


class KnowledgeLevel(enum.IntEnum):
    LOW = 1
    GOOD = 2
    HIGH = 3

    @classmethod
    def from_label(cls, label: str) -> "KnowledgeLevel":
        try:
            return _KNOWLEDGE_BY_LABEL[label]
        except KeyError:
            raise OutOfRange(f"unknown knowledge level {label!r}") from None

    @property
    def label(self) -> str:
        return self.name.lower()


_KNOWLEDGE_BY_LABEL = {k.name.lower(): k for k in KnowledgeLevel}


def knowledge_to_difficulty(level: KnowledgeLevel) -> Difficulty:
    """low/good/high map rank-for-rank onto easy/medium/difficult."""
    return Difficulty(int(level))


def difficulty_to_knowledge(difficulty: Difficulty) -> KnowledgeLevel:
    return KnowledgeLevel(int(difficulty))


class Relation(enum.Enum):
    """Ordinal comparison applied by selection rules: <, <=, =, >=, >."""

    BELOW = "below"
    AT_MOST = "at_most"
    MATCH = "match"
    AT_LEAST = "at_least"
    ABOVE = "above"

    def holds(self, left: int, right: int) -> bool:
        if self is Relation.BELOW:
            return left < right
        if self is Relation.AT_MOST:
            return left <= right
        if self is Relation.MATCH:
            return left == right
        if self is Relation.AT_LEAST:
            return left >= right
        return left > right

    @classmethod
    def from_label(cls, label: str) -> "Relation":
        try:
            return cls(label)
        except ValueError:
            raise OutOfRange(f"unknown relation {label!r}") from None


class QuestionType(str, enum.Enum):
    MULTIPLE_CHOICE = "multiple_choice"
    MULTIPLE_RESPONSE = "multiple_response"
    TRUE_FALSE = "true_false"
    FILL_BLANKS = "fill_blanks"
    MATCHING = "matching"
    SEQUENCE = "sequence"
    HOTSPOT = "hotspot"
    DRAG_DROP = "drag_drop"
    SELECT_LISTS = "select_lists"
    LIKERT = "likert"


#: Question types that carry an answer key and take part in scoring.
#: Likert items are opinion scales: recorded, never graded.
KEYED_TYPES = frozenset(t for t in QuestionType if t is not QuestionType.LIKERT)

EDUCATION_MIN_RANK = 1
EDUCATION_MAX_RANK = 5

#: Default display labels for the five education ranks; deployments may
#: substitute their own ladder without any schema change.
DEFAULT_EDUCATION_LABELS = {
    1: "primary",
    2: "lower secondary",
    3: "upper secondary",
    4: "post-secondary",
    5: "tertiary",
}


def validate_education_rank(rank: int) -> int:
    if not isinstance(rank, int) or isinstance(rank, bool):
        raise OutOfRange(f"education rank must be an integer, got {rank!r}")
    if not EDUCATION_MIN_RANK <= rank <= EDUCATION_MAX_RANK:
        raise OutOfRange(
            f"education rank must be in {EDUCATION_MIN_RANK}..{EDUCATION_MAX_RANK}, got {rank}"
        )
    return rank


class EducationLevel:
    """A schooling tier: 1..5 rank plus a deployment-configurable label."""

    __slots__ = ("rank", "label")

    def __init__(self, rank: int, label: str | None = None):
        self.rank = validate_education_rank(rank)
        self.label = label if label is not None else DEFAULT_EDUCATION_LABELS[self.rank]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EducationLevel) and other.rank == self.rank

    def __hash__(self) -> int:
        return hash(self.rank)

    def __repr__(self) -> str:
        return f"EducationLevel({self.rank}, {self.label!r})"
