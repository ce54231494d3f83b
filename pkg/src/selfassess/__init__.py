"""Formative self-assessment toolkit: item bank, criteria-driven selection,
per-type grading, knowledge-level inference, and the evaluation instruments,
with an HTTP service and an operator CLI on top."""
from __future__ import annotations

from .analytics import (
    EngagementCounters,
    TTestResult,
    engagement_counters,
    regularized_incomplete_beta,
    student_t_two_tailed_p,
    sus_mean,
    sus_score,
    t_test_two_sample,
)
from .bank import (
    Question,
    QuestionBank,
    Stem,
    TopicHierarchy,
    TopicNode,
    build_bank,
    validate_question,
)
from .bankio import (
    bank_from_document,
    bank_to_document,
    export_bank,
    import_bank,
    load_bank,
    question_from_document,
    question_to_document,
    save_bank,
)
from .errors import (
    AssessmentError,
    CycleDetected,
    DuplicateId,
    EmptyInput,
    InsufficientData,
    MalformedKey,
    MissingProfile,
    NonPositiveWeight,
    OutOfRange,
    ParseError,
    SessionNotFinal,
    ShapeMismatch,
    UnknownParent,
    UnknownQuestion,
    UnknownTopic,
    ValidationError,
)
from .grading import (
    Answer,
    ItemScore,
    TopicResult,
    aggregate_topics,
    grade_item,
    grade_session,
    overall_percent,
    validate_answer_payload,
)
from .profiles import (
    GOOD_HIGH_THRESHOLD,
    LOW_GOOD_THRESHOLD,
    LearnerProfile,
    SessionRecord,
    WeaknessReport,
    infer_level,
    update_profile,
    weakness_report,
)
from .selection import (
    Auto,
    ByDifficulty,
    ByEducation,
    ByKnowledge,
    LearnerContext,
    SelectionCriteria,
    SelectionResult,
    criteria_from_document,
    criteria_to_document,
    select,
    select_auto,
)
from .types import (
    Difficulty,
    EducationLevel,
    KnowledgeLevel,
    QuestionType,
    Relation,
    difficulty_to_knowledge,
    knowledge_to_difficulty,
)

__version__ = "0.1.0"

__all__ = [
    "AssessmentError",
    "Answer",
    "Auto",
    "ByDifficulty",
    "ByEducation",
    "ByKnowledge",
    "CycleDetected",
    "Difficulty",
    "DuplicateId",
    "EducationLevel",
    "EmptyInput",
    "EngagementCounters",
    "GOOD_HIGH_THRESHOLD",
    "InsufficientData",
    "ItemScore",
    "KnowledgeLevel",
    "LOW_GOOD_THRESHOLD",
    "LearnerContext",
    "LearnerProfile",
    "MalformedKey",
    "MissingProfile",
    "NonPositiveWeight",
    "OutOfRange",
    "ParseError",
    "Question",
    "QuestionBank",
    "QuestionType",
    "Relation",
    "SelectionCriteria",
    "SelectionResult",
    "SessionNotFinal",
    "SessionRecord",
    "ShapeMismatch",
    "Stem",
    "TTestResult",
    "TopicHierarchy",
    "TopicNode",
    "TopicResult",
    "UnknownParent",
    "UnknownQuestion",
    "UnknownTopic",
    "ValidationError",
    "WeaknessReport",
    "aggregate_topics",
    "bank_from_document",
    "bank_to_document",
    "build_bank",
    "criteria_from_document",
    "criteria_to_document",
    "difficulty_to_knowledge",
    "engagement_counters",
    "export_bank",
    "grade_item",
    "grade_session",
    "import_bank",
    "infer_level",
    "knowledge_to_difficulty",
    "load_bank",
    "overall_percent",
    "question_from_document",
    "question_to_document",
    "regularized_incomplete_beta",
    "save_bank",
    "select",
    "select_auto",
    "student_t_two_tailed_p",
    "sus_mean",
    "sus_score",
    "t_test_two_sample",
    "update_profile",
    "validate_answer_payload",
    "validate_question",
    "weakness_report",
]
