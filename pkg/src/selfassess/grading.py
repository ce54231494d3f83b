"""Grading: per-item scores in [0, 1] and weight-normalized topic percents.

Scoring rules by type:
  multiple_choice, true_false  binary
  multiple_response            max(0, (hits - false picks) / |key|)
  fill_blanks                  fraction of blanks matching an accepted string
                               (case-insensitive, whitespace-trimmed)
  matching, drag_drop,
  select_lists                 fraction of positions/pairs correct
  sequence                     fraction of elements at their keyed position
  hotspot                      1 if the click is inside the region
                               (boundary-inclusive), else 0
  likert                       recorded, never scored

All graders are pure functions: same (question, answer) gives the same score,
bit-identical, so grading items in parallel cannot change results.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .bank import Question, QuestionBank
from .errors import ShapeMismatch, UnknownQuestion
from .profiles import infer_level
from .types import KnowledgeLevel, QuestionType


@dataclass(frozen=True)
class Answer:
    """A learner's response; payload None means an explicit skip."""

    question_id: str
    payload: Mapping | None


@dataclass(frozen=True)
class ItemScore:
    question_id: str
    score: float | None
    weighted: float | None
    graded: bool


@dataclass(frozen=True)
class TopicResult:
    topic_id: str
    percent: float
    item_count: int
    inferred_level: KnowledgeLevel


def _fail(qid: str, msg: str) -> None:
    raise ShapeMismatch(f"answer for question {qid!r}: {msg}")


def _check(cond: bool, qid: str, msg: str) -> None:
    if not cond:
        _fail(qid, msg)


def _option_ids(body: Mapping, field: str = "options") -> list[str]:
    return [o["id"] for o in body[field]]


def _validate_mc(q: Question, p: Mapping) -> None:
    _check(isinstance(p.get("option"), str), q.id, "payload.option must be an option id")
    _check(p["option"] in _option_ids(q.body), q.id, f"undeclared option {p['option']!r}")


def _grade_mc(q: Question, p: Mapping) -> float:
    return 1.0 if p["option"] == q.key["option"] else 0.0


def _validate_mr(q: Question, p: Mapping) -> None:
    sel = p.get("options")
    _check(isinstance(sel, list) and all(isinstance(s, str) for s in sel), q.id,
           "payload.options must be a list of option ids")
    _check(len(set(sel)) == len(sel), q.id, "payload.options must not repeat")
    declared = set(_option_ids(q.body))
    _check(all(s in declared for s in sel), q.id, "payload.options must be declared option ids")


def _grade_mr(q: Question, p: Mapping) -> float:
    selected = set(p["options"])
    key = set(q.key["options"])
    hits = len(selected & key)
    misses = len(selected - key)
    return max(0.0, (hits - misses) / len(key))


def _validate_tf(q: Question, p: Mapping) -> None:
    _check(isinstance(p.get("value"), bool), q.id, "payload.value must be a boolean")


def _grade_tf(q: Question, p: Mapping) -> float:
    return 1.0 if p["value"] == q.key["value"] else 0.0


def _validate_fill(q: Question, p: Mapping) -> None:
    given = p.get("blanks")
    _check(isinstance(given, dict), q.id, "payload.blanks must be an object")
    declared = set(q.body["blanks"])
    for bid, text in given.items():
        _check(bid in declared, q.id, f"undeclared blank {bid!r}")
        _check(isinstance(text, str), q.id, f"blank {bid!r} must be a string")


def _normalize_blank(text: str) -> str:
    return text.strip().casefold()


def _grade_fill(q: Question, p: Mapping) -> float:
    given = p["blanks"]
    blanks = q.body["blanks"]
    correct = 0
    for bid in blanks:
        accepted = {_normalize_blank(a) for a in q.key["blanks"][bid]}
        if bid in given and _normalize_blank(given[bid]) in accepted:
            correct += 1
    return correct / len(blanks)


def _validate_matching(q: Question, p: Mapping) -> None:
    pairs = p.get("pairs")
    _check(isinstance(pairs, dict), q.id, "payload.pairs must be an object")
    left = set(_option_ids(q.body, "left"))
    right = set(_option_ids(q.body, "right"))
    for lid, rid in pairs.items():
        _check(lid in left, q.id, f"undeclared left id {lid!r}")
        _check(rid in right, q.id, f"undeclared right id {rid!r}")


def _grade_matching(q: Question, p: Mapping) -> float:
    pairs = p["pairs"]
    key = q.key["pairs"]
    left = _option_ids(q.body, "left")
    correct = sum(1 for lid in left if pairs.get(lid) == key[lid])
    return correct / len(left)


def _validate_sequence(q: Question, p: Mapping) -> None:
    order = p.get("order")
    declared = _option_ids(q.body, "items")
    _check(isinstance(order, list), q.id, "payload.order must be a list")
    _check(sorted(order) == sorted(declared), q.id,
           "payload.order must be a permutation of the item ids")


def _grade_sequence(q: Question, p: Mapping) -> float:
    order = p["order"]
    key = q.key["order"]
    correct = sum(1 for got, want in zip(order, key) if got == want)
    return correct / len(key)


def _validate_hotspot(q: Question, p: Mapping) -> None:
    for axis in ("x", "y"):
        v = p.get(axis)
        _check(
            isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v),
            q.id,
            f"payload.{axis} must be a finite number",
        )


def _point_in_rect(x: float, y: float, region: Mapping) -> bool:
    return (
        region["x"] <= x <= region["x"] + region["w"]
        and region["y"] <= y <= region["y"] + region["h"]
    )


def _point_in_polygon(x: float, y: float, points: Sequence[Sequence[float]]) -> bool:
    n = len(points)
    # boundary first: the contract is boundary-inclusive
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        cross = (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1)
        if cross == 0 and min(x1, x2) <= x <= max(x1, x2) and min(y1, y2) <= y <= max(y1, y2):
            return True
    inside = False
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            x_at = x1 + (x2 - x1) * (y - y1) / (y2 - y1)
            if x < x_at:
                inside = not inside
    return inside


def _grade_hotspot(q: Question, p: Mapping) -> float:
    region = q.key["region"]
    x, y = p["x"], p["y"]
    if region["shape"] == "rect":
        return 1.0 if _point_in_rect(x, y, region) else 0.0
    return 1.0 if _point_in_polygon(x, y, region["points"]) else 0.0


def _validate_drag_drop(q: Question, p: Mapping) -> None:
    placements = p.get("placements")
    _check(isinstance(placements, dict), q.id, "payload.placements must be an object")
    items = set(_option_ids(q.body, "items"))
    zones = {z["id"] for z in q.body["zones"]}
    for iid, zid in placements.items():
        _check(iid in items, q.id, f"undeclared item {iid!r}")
        _check(zid in zones, q.id, f"undeclared zone {zid!r}")


def _grade_drag_drop(q: Question, p: Mapping) -> float:
    placements = p["placements"]
    key = q.key["placements"]
    items = _option_ids(q.body, "items")
    correct = sum(1 for iid in items if placements.get(iid) == key[iid])
    return correct / len(items)


def _validate_select_lists(q: Question, p: Mapping) -> None:
    choices = p.get("choices")
    _check(isinstance(choices, dict), q.id, "payload.choices must be an object")
    options_by_select = {s["id"]: {o["id"] for o in s["options"]} for s in q.body["selects"]}
    for sid, oid in choices.items():
        _check(sid in options_by_select, q.id, f"undeclared select {sid!r}")
        _check(oid in options_by_select[sid], q.id,
               f"choice for select {sid!r} must be a declared option")


def _grade_select_lists(q: Question, p: Mapping) -> float:
    choices = p["choices"]
    key = q.key["choices"]
    selects = [s["id"] for s in q.body["selects"]]
    correct = sum(1 for sid in selects if choices.get(sid) == key[sid])
    return correct / len(selects)


def _validate_likert(q: Question, p: Mapping) -> None:
    v = p.get("value")
    scale = q.body.get("scale", 5)
    _check(
        isinstance(v, int) and not isinstance(v, bool) and 1 <= v <= scale,
        q.id,
        f"payload.value must be an integer in 1..{scale}",
    )


_VALIDATORS = {
    QuestionType.MULTIPLE_CHOICE: _validate_mc,
    QuestionType.MULTIPLE_RESPONSE: _validate_mr,
    QuestionType.TRUE_FALSE: _validate_tf,
    QuestionType.FILL_BLANKS: _validate_fill,
    QuestionType.MATCHING: _validate_matching,
    QuestionType.SEQUENCE: _validate_sequence,
    QuestionType.HOTSPOT: _validate_hotspot,
    QuestionType.DRAG_DROP: _validate_drag_drop,
    QuestionType.SELECT_LISTS: _validate_select_lists,
    QuestionType.LIKERT: _validate_likert,
}

_GRADERS = {
    QuestionType.MULTIPLE_CHOICE: _grade_mc,
    QuestionType.MULTIPLE_RESPONSE: _grade_mr,
    QuestionType.TRUE_FALSE: _grade_tf,
    QuestionType.FILL_BLANKS: _grade_fill,
    QuestionType.MATCHING: _grade_matching,
    QuestionType.SEQUENCE: _grade_sequence,
    QuestionType.HOTSPOT: _grade_hotspot,
    QuestionType.DRAG_DROP: _grade_drag_drop,
    QuestionType.SELECT_LISTS: _grade_select_lists,
}


def validate_answer_payload(question: Question, payload: Mapping) -> None:
    """Raise ShapeMismatch unless the payload fits the question's type."""
    if not isinstance(payload, Mapping):
        _fail(question.id, "payload must be an object")
    _VALIDATORS[question.type](question, payload)


def grade_item(question: Question, answer: Answer | None) -> ItemScore:
    """Score one response. A missing answer or a None payload is an explicit
    skip: keyed types earn 0, likert items stay ungraded either way."""
    if answer is not None and answer.question_id != question.id:
        _fail(question.id, f"answer addressed to {answer.question_id!r}")
    if question.type is QuestionType.LIKERT:
        if answer is not None and answer.payload is not None:
            validate_answer_payload(question, answer.payload)
        return ItemScore(question_id=question.id, score=None, weighted=None, graded=False)
    if answer is None or answer.payload is None:
        return ItemScore(question_id=question.id, score=0.0, weighted=0.0, graded=True)
    validate_answer_payload(question, answer.payload)
    score = _GRADERS[question.type](question, answer.payload)
    return ItemScore(
        question_id=question.id,
        score=score,
        weighted=score * question.weight,
        graded=True,
    )


def grade_session(
    bank: QuestionBank,
    question_ids: Sequence[str],
    answers: Mapping[str, Mapping | None],
) -> list[ItemScore]:
    """Grade a whole submission; questions without an answer become skips."""
    for qid in answers:
        if qid not in question_ids:
            raise UnknownQuestion(f"answer references question {qid!r} outside the session")
    scores = []
    for qid in question_ids:
        question = bank.get(qid)
        payload = answers.get(qid)
        answer = Answer(question_id=qid, payload=payload) if payload is not None else None
        scores.append(grade_item(question, answer))
    return scores


def aggregate_topics(
    bank: QuestionBank,
    scores: Iterable[ItemScore],
    assessed_topics: Iterable[str] | None = None,
) -> list[TopicResult]:
    """Weight-normalized percent per topic, rolled up through ancestors.

    An item contributes to each of its declared topics inside the assessed
    subtrees and, by roll-up, to every ancestor of those inside the assessed
    subtrees — but only once per topic, even when tagged at several
    descendants of the same ancestor. Topics with no graded items are
    omitted: absence of evidence is not failure.
    """
    if assessed_topics is None:
        admissible: frozenset[str] | None = None
    else:
        allowed: set[str] = set()
        for tid in assessed_topics:
            allowed |= bank.topics.subtree(tid)
        admissible = frozenset(allowed)

    sums: dict[str, list] = {}
    for item in scores:
        question = bank.get(item.question_id)
        if not item.graded:
            continue
        targets: set[str] = set()
        for tid in question.topics:
            if admissible is not None and tid not in admissible:
                continue
            targets.add(tid)
            for ancestor in bank.topics.ancestors(tid):
                if admissible is None or ancestor in admissible:
                    targets.add(ancestor)
        for tid in targets:
            bucket = sums.setdefault(tid, [0.0, 0.0, 0])
            bucket[0] += question.weight
            bucket[1] += item.weighted
            bucket[2] += 1

    results = []
    for tid in sorted(sums):
        total_weight, total_weighted, count = sums[tid]
        # ratio first: the weighted sum never exceeds the weight sum, so the
        # quotient stays <= 1.0 and the percent <= 100.0 in float arithmetic
        percent = 100.0 * (total_weighted / total_weight)
        results.append(
            TopicResult(
                topic_id=tid,
                percent=percent,
                item_count=count,
                inferred_level=infer_level(percent),
            )
        )
    return results


def overall_percent(bank: QuestionBank, scores: Iterable[ItemScore]) -> float | None:
    """Weighted percent across every graded item, or None when nothing graded."""
    total_weight = 0.0
    total_weighted = 0.0
    for item in scores:
        if not item.graded:
            continue
        total_weight += bank.get(item.question_id).weight
        total_weighted += item.weighted
    if total_weight == 0.0:
        return None
    return 100.0 * (total_weighted / total_weight)
