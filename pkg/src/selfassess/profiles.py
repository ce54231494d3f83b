"""Learner profiles: threshold-based level inference, per-topic knowledge,
and the append-only assessment history.

Percent bands: [0, 50) is low, [50, 75] is good, (75, 100] is high — both
boundaries land in the good band, the only reading consistent with all three
threshold phrasings at once.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Iterable, Mapping

from .errors import OutOfRange, SessionNotFinal
from .types import KnowledgeLevel, validate_education_rank

if TYPE_CHECKING:
    from .bank import QuestionBank
    from .grading import ItemScore, TopicResult

LOW_GOOD_THRESHOLD = 50.0
GOOD_HIGH_THRESHOLD = 75.0


def infer_level(percent: float) -> KnowledgeLevel:
    """Map a weight-normalized topic percent onto the three-band scale."""
    if not 0.0 <= percent <= 100.0:
        raise OutOfRange(f"percent must be in [0, 100], got {percent!r}")
    if percent < LOW_GOOD_THRESHOLD:
        return KnowledgeLevel.LOW
    if percent <= GOOD_HIGH_THRESHOLD:
        return KnowledgeLevel.GOOD
    return KnowledgeLevel.HIGH


@dataclass(frozen=True)
class SessionRecord:
    """Immutable trace of one finalized assessment session."""

    session_id: str
    timestamp: str
    criteria: Mapping
    topic_results: tuple
    levels: Mapping[str, str]
    final: bool = True


@dataclass(frozen=True)
class LearnerProfile:
    learner_id: str
    education_level: int
    knowledge: Mapping[str, KnowledgeLevel] = field(default_factory=dict)
    history: tuple[SessionRecord, ...] = ()


def update_profile(profile: LearnerProfile, record: SessionRecord) -> LearnerProfile:
    """Fold a finalized session into the profile.

    Last write wins per topic: each assessed topic takes this session's
    inferred level; untouched topics keep theirs. The record is appended to
    the history, which no operation ever shortens.
    """
    if not record.final:
        raise SessionNotFinal(f"session {record.session_id!r} is not finalized")
    knowledge = dict(profile.knowledge)
    for result in record.topic_results:
        knowledge[result.topic_id] = result.inferred_level
    return replace(profile, knowledge=knowledge, history=profile.history + (record,))


@dataclass(frozen=True)
class WeaknessEntry:
    topic_id: str
    percent: float
    level: KnowledgeLevel


@dataclass(frozen=True)
class ErroneousItem:
    """A graded item the learner got (partly) wrong, with the concepts it
    covers so the report can point back at the material to study."""

    question_id: str
    score: float
    concepts: tuple[str, ...]


@dataclass(frozen=True)
class WeaknessReport:
    entries: tuple[WeaknessEntry, ...]
    erroneous: tuple[ErroneousItem, ...]


def weakness_report(
    topic_results: Iterable["TopicResult"],
    item_scores: Iterable["ItemScore"] = (),
    bank: "QuestionBank | None" = None,
) -> WeaknessReport:
    """Order topics weakest first and list the erroneous items' concepts."""
    entries = tuple(
        WeaknessEntry(topic_id=r.topic_id, percent=r.percent, level=r.inferred_level)
        for r in sorted(topic_results, key=lambda r: (r.percent, r.topic_id))
    )
    erroneous = []
    for score in item_scores:
        if not score.graded or score.score >= 1.0:
            continue
        concepts: tuple[str, ...] = ()
        if bank is not None:
            concepts = tuple(sorted(bank.get(score.question_id).topics))
        erroneous.append(
            ErroneousItem(question_id=score.question_id, score=score.score, concepts=concepts)
        )
    erroneous.sort(key=lambda e: (e.score, e.question_id))
    return WeaknessReport(entries=entries, erroneous=tuple(erroneous))


# ---------------------------------------------------------------------------
# Document serialization (profile store: one document per learner)
# ---------------------------------------------------------------------------

def record_to_document(record: SessionRecord) -> dict:
    return {
        "session_id": record.session_id,
        "timestamp": record.timestamp,
        "criteria": record.criteria,
        "topic_results": [
            {
                "topic_id": r.topic_id,
                "percent": r.percent,
                "item_count": r.item_count,
                "inferred_level": r.inferred_level.label,
            }
            for r in record.topic_results
        ],
        "levels": dict(record.levels),
    }


def profile_to_document(profile: LearnerProfile) -> dict:
    return {
        "learner_id": profile.learner_id,
        "education_level": profile.education_level,
        "knowledge": {tid: lvl.label for tid, lvl in sorted(profile.knowledge.items())},
        "history": [record_to_document(r) for r in profile.history],
    }


def record_from_document(doc: dict) -> SessionRecord:
    from .grading import TopicResult

    return SessionRecord(
        session_id=doc["session_id"],
        timestamp=doc["timestamp"],
        criteria=doc.get("criteria", {}),
        topic_results=tuple(
            TopicResult(
                topic_id=r["topic_id"],
                percent=r["percent"],
                item_count=r["item_count"],
                inferred_level=KnowledgeLevel.from_label(r["inferred_level"]),
            )
            for r in doc.get("topic_results", [])
        ),
        levels=doc.get("levels", {}),
    )


def profile_from_document(doc: dict) -> LearnerProfile:
    return LearnerProfile(
        learner_id=doc["learner_id"],
        education_level=validate_education_rank(doc["education_level"]),
        knowledge={
            tid: KnowledgeLevel.from_label(lvl) for tid, lvl in doc.get("knowledge", {}).items()
        },
        history=tuple(record_from_document(r) for r in doc.get("history", [])),
    )
