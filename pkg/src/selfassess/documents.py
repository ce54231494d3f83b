"""Response-document builders shared by the HTTP layer and by tests.

Handlers do nothing but compose core calls and pass the result through these
builders, then serialize with to_json_bytes. Tests rebuild the same documents
straight from the core modules and compare bytes, which pins the service to
being a thin adapter.

Learner-facing question documents never carry the answer key or the
explanations; explanations surface only in submit results, on items that
lost points.
"""
from __future__ import annotations

import json
from typing import Iterable, Mapping, Sequence

from .bank import Question, QuestionBank, TopicHierarchy, TopicNode
from .bankio import question_to_document
from .grading import ItemScore, TopicResult
from .profiles import LearnerProfile, SessionRecord, WeaknessReport, record_to_document
from .selection import SelectionCriteria, SelectionResult, criteria_to_document


def to_json_bytes(doc) -> bytes:
    return json.dumps(doc, ensure_ascii=False, sort_keys=True, separators=(",", ":")).encode()


def topic_document(node: TopicNode) -> dict:
    doc = {"id": node.id, "name": node.name}
    if node.parent is not None:
        doc["parent"] = node.parent
    return doc


def topics_document(topics: TopicHierarchy) -> dict:
    return {"topics": [topic_document(topics.get(tid)) for tid in sorted(topics.ids())]}


def question_public_document(question: Question) -> dict:
    """What a test taker may see: the full authoring document minus key and
    explanations."""
    doc = question_to_document(question)
    doc.pop("key", None)
    doc.pop("explanations", None)
    return doc


def question_authoring_document(question: Question) -> dict:
    return question_to_document(question)


def session_created_document(
    session_id: str,
    criteria: SelectionCriteria,
    result: SelectionResult,
) -> dict:
    return {
        "session_id": session_id,
        "state": "created",
        "criteria": criteria_to_document(criteria),
        "questions": [question_public_document(q) for q in result.questions],
        "clusters": [
            {"topic_id": c.topic_id, "question_ids": list(c.question_ids)}
            for c in result.clusters
        ],
    }


def item_document(question: Question, item: ItemScore) -> dict:
    doc: dict = {
        "question_id": item.question_id,
        "graded": item.graded,
        "score": item.score,
        "weighted": item.weighted,
    }
    if item.graded and item.score is not None and item.score < 1.0 and question.explanations:
        doc["explanations"] = dict(sorted(question.explanations.items()))
    return doc


def topic_result_document(result: TopicResult) -> dict:
    return {
        "topic_id": result.topic_id,
        "percent": result.percent,
        "item_count": result.item_count,
        "inferred_level": result.inferred_level.label,
    }


def weakness_document(report: WeaknessReport) -> dict:
    return {
        "entries": [
            {"topic_id": e.topic_id, "percent": e.percent, "level": e.level.label}
            for e in report.entries
        ],
        "erroneous": [
            {
                "question_id": e.question_id,
                "score": e.score,
                "concepts": list(e.concepts),
            }
            for e in report.erroneous
        ],
    }


def submit_result_document(
    session_id: str,
    bank: QuestionBank,
    scores: Sequence[ItemScore],
    topic_results: Sequence[TopicResult],
    weakness: WeaknessReport,
    overall: float | None,
) -> dict:
    return {
        "session_id": session_id,
        "state": "finalized",
        "overall_percent": overall,
        "items": [item_document(bank.get(s.question_id), s) for s in scores],
        "topics": [topic_result_document(r) for r in topic_results],
        "weakness": weakness_document(weakness),
    }


def profile_document(profile: LearnerProfile) -> dict:
    return {
        "learner_id": profile.learner_id,
        "education_level": profile.education_level,
        "knowledge": {tid: lvl.label for tid, lvl in sorted(profile.knowledge.items())},
    }


def history_document(records: Iterable[SessionRecord]) -> dict:
    """Newest first, per the reading order of an assessment history."""
    ordered = sorted(records, key=lambda r: r.timestamp, reverse=True)
    return {"sessions": [record_to_document(r) for r in ordered]}


def error_document(code: str, message: str, details: Mapping | Sequence | None = None) -> dict:
    return {"code": code, "message": message, "details": details}
