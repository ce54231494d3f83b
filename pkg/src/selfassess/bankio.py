"""Bank file format: one UTF-8 JSON document, round-trip exact.

Top-level fields: format_version (currently 1), topics, questions. Per-type
body/key shapes are documented in docs/format.md and enforced by bank
validation. Import aggregates every violation instead of stopping at the
first, so an operator sees the whole damage in one pass.
"""
from __future__ import annotations

import json
from typing import Any

from .bank import Question, QuestionBank, Stem, TopicHierarchy, TopicNode, validate_question
from .errors import AssessmentError, ParseError, ValidationError
from .types import Difficulty, QuestionType, validate_education_rank

FORMAT_VERSION = 1


def question_to_document(q: Question) -> dict:
    doc: dict[str, Any] = {
        "id": q.id,
        "type": q.type.value,
        "stem": {"text": q.stem.text},
        "body": q.body,
        "difficulty": q.difficulty.label,
        "education_level": q.education_level,
        "weight": q.weight,
        "topics": sorted(q.topics),
    }
    if q.stem.media is not None:
        doc["stem"]["media"] = q.stem.media
    if q.key is not None:
        doc["key"] = q.key
    if q.explanations is not None:
        doc["explanations"] = dict(q.explanations)
    return doc


def bank_to_document(bank: QuestionBank) -> dict:
    topics = []
    for node in bank.topics:
        entry: dict[str, Any] = {"id": node.id, "name": node.name}
        if node.parent is not None:
            entry["parent"] = node.parent
        topics.append(entry)
    return {
        "format_version": FORMAT_VERSION,
        "topics": topics,
        "questions": [question_to_document(q) for q in bank.questions.values()],
    }


def export_bank(bank: QuestionBank) -> str:
    return json.dumps(bank_to_document(bank), ensure_ascii=False, indent=2) + "\n"


def _question_from_entry(entry: dict, index: int, problems: list[str]) -> Question | None:
    where = f"questions[{index}]"
    if not isinstance(entry, dict):
        problems.append(f"{where}: must be an object")
        return None
    qid = entry.get("id")
    if not isinstance(qid, str) or not qid:
        problems.append(f"{where}: missing or invalid id")
        return None
    where = f"question {qid!r}"

    try:
        qtype = QuestionType(entry.get("type"))
    except ValueError:
        problems.append(f"{where}: unknown type {entry.get('type')!r}")
        return None

    stem_doc = entry.get("stem")
    if not isinstance(stem_doc, dict) or not isinstance(stem_doc.get("text"), str):
        problems.append(f"{where}: stem.text is required")
        return None
    media = stem_doc.get("media")
    if media is not None and not isinstance(media, str):
        problems.append(f"{where}: stem.media must be a string URI")
        return None

    try:
        difficulty = Difficulty.from_label(entry.get("difficulty"))
    except AssessmentError:
        problems.append(f"{where}: difficulty must be one of easy|medium|difficult")
        return None

    try:
        education = validate_education_rank(entry.get("education_level"))
    except AssessmentError as exc:
        problems.append(f"{where}: {exc}")
        return None

    weight = entry.get("weight", 1.0)
    topics = entry.get("topics")
    if not isinstance(topics, list) or not all(isinstance(t, str) for t in topics):
        problems.append(f"{where}: topics must be a list of topic ids")
        return None

    return Question(
        id=qid,
        type=qtype,
        stem=Stem(text=stem_doc["text"], media=media),
        body=entry.get("body") if isinstance(entry.get("body"), dict) else {},
        key=entry.get("key"),
        difficulty=difficulty,
        education_level=education,
        topics=frozenset(topics),
        weight=weight,
        explanations=entry.get("explanations"),
    )


def question_from_document(doc: dict, topics: TopicHierarchy) -> Question:
    """Parse and validate one question document against a hierarchy."""
    problems: list[str] = []
    q = _question_from_entry(doc, 0, problems)
    if q is not None:
        try:
            validate_question(q, topics)
        except AssessmentError as exc:
            problems.append(str(exc))
    if problems:
        raise ValidationError(problems)
    return q


def bank_from_document(doc: dict) -> QuestionBank:
    """Build a validated bank from a parsed document, aggregating all problems."""
    problems: list[str] = []
    if not isinstance(doc, dict):
        raise ValidationError(["document root must be an object"])
    if doc.get("format_version") != FORMAT_VERSION:
        problems.append(f"format_version must be {FORMAT_VERSION}, got {doc.get('format_version')!r}")

    nodes: dict[str, TopicNode] = {}
    topics_doc = doc.get("topics")
    if not isinstance(topics_doc, list):
        problems.append("topics must be a list")
        topics_doc = []
    for i, entry in enumerate(topics_doc):
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), str) or not entry["id"]:
            problems.append(f"topics[{i}]: missing or invalid id")
            continue
        tid = entry["id"]
        if tid in nodes:
            problems.append(f"topics[{i}]: duplicate topic id {tid!r}")
            continue
        if not isinstance(entry.get("name"), str):
            problems.append(f"topic {tid!r}: name is required")
            continue
        parent = entry.get("parent")
        if parent is not None and not isinstance(parent, str):
            problems.append(f"topic {tid!r}: parent must be a topic id")
            continue
        nodes[tid] = TopicNode(id=tid, name=entry["name"], parent=parent)

    for node in nodes.values():
        if node.parent is not None and node.parent not in nodes:
            problems.append(f"topic {node.id!r}: unknown parent {node.parent!r}")
    # Keep only nodes whose whole ancestor chain resolves, so question
    # validation can still run against a consistent sub-forest.
    kept = dict(nodes)
    changed = True
    while changed:
        changed = False
        for tid, node in list(kept.items()):
            if node.parent is not None and node.parent not in kept:
                del kept[tid]
                changed = True
    hierarchy = TopicHierarchy(kept)
    if not hierarchy.is_forest():
        problems.append("topic hierarchy contains a cycle")
        hierarchy = TopicHierarchy.empty()

    questions: dict[str, Question] = {}
    questions_doc = doc.get("questions")
    if not isinstance(questions_doc, list):
        problems.append("questions must be a list")
        questions_doc = []
    for i, entry in enumerate(questions_doc):
        q = _question_from_entry(entry, i, problems)
        if q is None:
            continue
        if q.id in questions:
            problems.append(f"question {q.id!r}: duplicate id")
            continue
        try:
            validate_question(q, hierarchy)
        except AssessmentError as exc:
            problems.append(str(exc))
            continue
        questions[q.id] = q

    if problems:
        raise ValidationError(problems)
    return QuestionBank(topics=hierarchy, questions=questions, version=0)


def import_bank(text: str) -> QuestionBank:
    """Parse and validate a bank document from its JSON text."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                         line=exc.lineno) from exc
    return bank_from_document(doc)


def load_bank(path) -> QuestionBank:
    with open(path, encoding="utf-8") as fh:
        return import_bank(fh.read())


def save_bank(bank: QuestionBank, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(export_bank(bank))
