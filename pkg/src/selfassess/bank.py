"""Item bank: topic hierarchy, questions, and their validation rules.

The hierarchy is a forest (one root per domain, attachable later). Banks are
immutable snapshots: every mutation returns a new bank with version + 1, so
snapshots can be shared freely across threads while a single writer swaps the
current one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .errors import (
    CycleDetected,
    DuplicateId,
    MalformedKey,
    NonPositiveWeight,
    UnknownParent,
    UnknownQuestion,
    UnknownTopic,
    ValidationError,
)
from .types import Difficulty, QuestionType, validate_education_rank


@dataclass(frozen=True)
class TopicNode:
    id: str
    name: str
    parent: str | None = None


class TopicHierarchy:
    """Immutable forest of topic nodes; tagging a question at a node makes it
    retrievable at every ancestor."""

    __slots__ = ("_nodes", "_children")

    def __init__(self, nodes: Mapping[str, TopicNode] | None = None):
        self._nodes: dict[str, TopicNode] = dict(nodes or {})
        children: dict[str, list[str]] = {tid: [] for tid in self._nodes}
        for node in self._nodes.values():
            if node.parent is not None and node.parent in children:
                children[node.parent].append(node.id)
        self._children = children

    @classmethod
    def empty(cls) -> "TopicHierarchy":
        return cls({})

    def __contains__(self, topic_id: str) -> bool:
        return topic_id in self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def __iter__(self):
        return iter(self._nodes.values())

    def get(self, topic_id: str) -> TopicNode:
        try:
            return self._nodes[topic_id]
        except KeyError:
            raise UnknownTopic(f"unknown topic {topic_id!r}") from None

    def ids(self) -> list[str]:
        return list(self._nodes)

    def roots(self) -> list[TopicNode]:
        return [n for n in self._nodes.values() if n.parent is None]

    def children(self, topic_id: str) -> list[str]:
        self.get(topic_id)
        return list(self._children[topic_id])

    def add(self, node: TopicNode) -> "TopicHierarchy":
        """Insert a new node, or update (rename / re-parent) an existing one.

        Re-parenting a node under its own subtree would create a cycle and is
        rejected.
        """
        if node.parent is not None:
            if node.parent not in self._nodes:
                raise UnknownParent(f"unknown parent {node.parent!r} for topic {node.id!r}")
            if node.id in self._nodes and (
                node.parent == node.id or node.parent in self.subtree(node.id)
            ):
                raise CycleDetected(
                    f"re-parenting {node.id!r} under {node.parent!r} would create a cycle"
                )
        nodes = dict(self._nodes)
        nodes[node.id] = node
        return TopicHierarchy(nodes)

    def ancestors(self, topic_id: str) -> list[str]:
        """Ancestor ids of a topic, nearest first, excluding the topic itself."""
        node = self.get(topic_id)
        out: list[str] = []
        while node.parent is not None:
            out.append(node.parent)
            node = self._nodes[node.parent]
        return out

    def subtree(self, topic_id: str) -> frozenset[str]:
        """The topic plus every descendant."""
        self.get(topic_id)
        seen: set[str] = set()
        stack = [topic_id]
        while stack:
            tid = stack.pop()
            if tid in seen:
                continue
            seen.add(tid)
            stack.extend(self._children.get(tid, ()))
        return frozenset(seen)

    def depth(self, topic_id: str) -> int:
        return len(self.ancestors(topic_id))

    def is_forest(self) -> bool:
        """True when every parent chain terminates at a root (no cycles)."""
        for tid in self._nodes:
            seen: set[str] = set()
            node = self._nodes[tid]
            while node.parent is not None:
                if node.parent in seen or node.parent == tid:
                    return False
                if node.parent not in self._nodes:
                    return False
                seen.add(node.parent)
                node = self._nodes[node.parent]
        return True


@dataclass(frozen=True)
class Stem:
    """Question prompt: text plus an optional opaque media URI (never fetched)."""

    text: str
    media: str | None = None


@dataclass(frozen=True)
class Question:
    id: str
    type: QuestionType
    stem: Stem
    body: Mapping
    key: Mapping | None
    difficulty: Difficulty
    education_level: int
    topics: frozenset[str]
    weight: float = 1.0
    explanations: Mapping[str, str] | None = None


# ---------------------------------------------------------------------------
# Per-type body / key shape rules
# ---------------------------------------------------------------------------

def _require(cond: bool, qid: str, msg: str) -> None:
    if not cond:
        raise MalformedKey(f"question {qid!r}: {msg}")


def _id_list(entries, qid: str, what: str) -> list[str]:
    _require(isinstance(entries, list) and len(entries) > 0, qid, f"{what} must be a non-empty list")
    ids = []
    for e in entries:
        _require(
            isinstance(e, dict) and isinstance(e.get("id"), str) and e["id"] != "",
            qid,
            f"every {what} entry needs a non-empty string id",
        )
        _require(isinstance(e.get("text"), str), qid, f"every {what} entry needs text")
        ids.append(e["id"])
    _require(len(set(ids)) == len(ids), qid, f"{what} ids must be unique")
    return ids


def _validate_multiple_choice(q: Question) -> None:
    options = _id_list(q.body.get("options"), q.id, "options")
    _require(len(options) >= 2, q.id, "needs at least 2 options")
    _require(isinstance(q.key, dict), q.id, "key must be an object")
    _require(
        q.key.get("option") in options,
        q.id,
        "key must name exactly one declared option id",
    )


def _validate_multiple_response(q: Question) -> None:
    options = _id_list(q.body.get("options"), q.id, "options")
    _require(len(options) >= 2, q.id, "needs at least 2 options")
    _require(isinstance(q.key, dict), q.id, "key must be an object")
    chosen = q.key.get("options")
    _require(isinstance(chosen, list) and len(chosen) > 0, q.id, "key.options must be a non-empty list")
    _require(len(set(chosen)) == len(chosen), q.id, "key.options must be unique")
    _require(all(c in options for c in chosen), q.id, "key.options must all be declared option ids")


def _validate_true_false(q: Question) -> None:
    _require(isinstance(q.key, dict), q.id, "key must be an object")
    _require(isinstance(q.key.get("value"), bool), q.id, "key.value must be a boolean")


def _validate_fill_blanks(q: Question) -> None:
    blanks = q.body.get("blanks")
    _require(
        isinstance(blanks, list) and len(blanks) > 0 and all(isinstance(b, str) and b for b in blanks),
        q.id,
        "body.blanks must be a non-empty list of blank ids",
    )
    _require(len(set(blanks)) == len(blanks), q.id, "blank ids must be unique")
    _require(isinstance(q.key, dict), q.id, "key must be an object")
    accepted = q.key.get("blanks")
    _require(isinstance(accepted, dict), q.id, "key.blanks must be an object")
    _require(set(accepted) == set(blanks), q.id, "key.blanks must cover exactly the declared blanks")
    for bid, answers in accepted.items():
        _require(
            isinstance(answers, list) and len(answers) > 0 and all(isinstance(a, str) and a.strip() for a in answers),
            q.id,
            f"key.blanks[{bid!r}] must list at least one acceptable string",
        )


def _validate_matching(q: Question) -> None:
    left = _id_list(q.body.get("left"), q.id, "left")
    right = _id_list(q.body.get("right"), q.id, "right")
    _require(len(left) == len(right), q.id, "left and right sides must have equal size")
    _require(isinstance(q.key, dict), q.id, "key must be an object")
    pairs = q.key.get("pairs")
    _require(isinstance(pairs, dict), q.id, "key.pairs must be an object")
    _require(set(pairs) == set(left), q.id, "key.pairs must assign every left id")
    _require(
        sorted(pairs.values()) == sorted(right),
        q.id,
        "key.pairs must be a bijection onto the right ids",
    )


def _validate_sequence(q: Question) -> None:
    items = _id_list(q.body.get("items"), q.id, "items")
    _require(len(items) >= 2, q.id, "needs at least 2 items")
    _require(isinstance(q.key, dict), q.id, "key must be an object")
    order = q.key.get("order")
    _require(isinstance(order, list), q.id, "key.order must be a list")
    _require(sorted(order) == sorted(items), q.id, "key.order must be a permutation of the item ids")


def _finite_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _validate_hotspot(q: Question) -> None:
    _require(isinstance(q.body.get("image"), str) and q.body["image"] != "", q.id, "body.image is required")
    for dim in ("width", "height"):
        _require(
            _finite_number(q.body.get(dim)) and q.body[dim] > 0,
            q.id,
            f"body.{dim} must be a positive number",
        )
    _require(isinstance(q.key, dict), q.id, "key must be an object")
    region = q.key.get("region")
    _require(isinstance(region, dict), q.id, "key.region must be an object")
    shape = region.get("shape")
    if shape == "rect":
        for f in ("x", "y", "w", "h"):
            _require(_finite_number(region.get(f)), q.id, f"rect region needs numeric {f}")
        _require(region["w"] > 0 and region["h"] > 0, q.id, "rect region must have positive extent")
    elif shape == "polygon":
        pts = region.get("points")
        _require(
            isinstance(pts, list) and len(pts) >= 3,
            q.id,
            "polygon region needs at least 3 points",
        )
        for p in pts:
            _require(
                isinstance(p, list) and len(p) == 2 and all(_finite_number(c) for c in p),
                q.id,
                "polygon points must be [x, y] number pairs",
            )
    else:
        _require(False, q.id, "key.region.shape must be 'rect' or 'polygon'")


def _validate_drag_drop(q: Question) -> None:
    zones = q.body.get("zones")
    _require(isinstance(zones, list) and len(zones) > 0, q.id, "zones must be a non-empty list")
    zone_ids = []
    for z in zones:
        _require(
            isinstance(z, dict) and isinstance(z.get("id"), str) and z["id"] != "",
            q.id,
            "every zone needs a non-empty string id",
        )
        _require(isinstance(z.get("label"), str), q.id, "every zone needs a label")
        zone_ids.append(z["id"])
    _require(len(set(zone_ids)) == len(zone_ids), q.id, "zone ids must be unique")
    items = _id_list(q.body.get("items"), q.id, "items")
    _require(isinstance(q.key, dict), q.id, "key must be an object")
    placements = q.key.get("placements")
    _require(isinstance(placements, dict), q.id, "key.placements must be an object")
    _require(set(placements) == set(items), q.id, "key.placements must place every item")
    _require(all(z in zone_ids for z in placements.values()), q.id, "placements must target declared zones")


def _validate_select_lists(q: Question) -> None:
    selects = q.body.get("selects")
    _require(isinstance(selects, list) and len(selects) > 0, q.id, "selects must be a non-empty list")
    options_by_select: dict[str, list[str]] = {}
    for s in selects:
        _require(
            isinstance(s, dict) and isinstance(s.get("id"), str) and s["id"] != "",
            q.id,
            "every select needs a non-empty string id",
        )
        opts = _id_list(s.get("options"), q.id, f"select {s.get('id')!r} options")
        _require(len(opts) >= 2, q.id, f"select {s['id']!r} needs at least 2 options")
        options_by_select[s["id"]] = opts
    _require(len(options_by_select) == len(selects), q.id, "select ids must be unique")
    _require(isinstance(q.key, dict), q.id, "key must be an object")
    choices = q.key.get("choices")
    _require(isinstance(choices, dict), q.id, "key.choices must be an object")
    _require(set(choices) == set(options_by_select), q.id, "key.choices must answer every select")
    for sid, opt in choices.items():
        _require(opt in options_by_select[sid], q.id, f"choice for select {sid!r} must be a declared option")


def _validate_likert(q: Question) -> None:
    # Likert items are unkeyed by definition; a key present is malformed.
    _require(q.key is None, q.id, "likert items carry no answer key")
    scale = q.body.get("scale", 5)
    _require(
        isinstance(scale, int) and not isinstance(scale, bool) and scale >= 2,
        q.id,
        "body.scale must be an integer >= 2",
    )
    labels = q.body.get("labels")
    if labels is not None:
        _require(
            isinstance(labels, list) and len(labels) == scale and all(isinstance(l, str) for l in labels),
            q.id,
            "body.labels must list one label per scale point",
        )


_TYPE_VALIDATORS = {
    QuestionType.MULTIPLE_CHOICE: _validate_multiple_choice,
    QuestionType.MULTIPLE_RESPONSE: _validate_multiple_response,
    QuestionType.TRUE_FALSE: _validate_true_false,
    QuestionType.FILL_BLANKS: _validate_fill_blanks,
    QuestionType.MATCHING: _validate_matching,
    QuestionType.SEQUENCE: _validate_sequence,
    QuestionType.HOTSPOT: _validate_hotspot,
    QuestionType.DRAG_DROP: _validate_drag_drop,
    QuestionType.SELECT_LISTS: _validate_select_lists,
    QuestionType.LIKERT: _validate_likert,
}


def validate_question(q: Question, topics: TopicHierarchy) -> None:
    """Check every Question invariant; raises the first violation found."""
    if not isinstance(q.weight, (int, float)) or isinstance(q.weight, bool) or not q.weight > 0:
        raise NonPositiveWeight(f"question {q.id!r}: weight must be > 0, got {q.weight!r}")
    if not math.isfinite(q.weight):
        raise NonPositiveWeight(f"question {q.id!r}: weight must be finite")
    if not q.topics:
        raise UnknownTopic(f"question {q.id!r}: topics must be non-empty")
    for tid in q.topics:
        if tid not in topics:
            raise UnknownTopic(f"question {q.id!r}: unknown topic {tid!r}")
    if not isinstance(q.body, dict):
        raise MalformedKey(f"question {q.id!r}: body must be an object")
    if q.key is not None and not isinstance(q.key, dict):
        raise MalformedKey(f"question {q.id!r}: key must be an object when present")
    if q.type is not QuestionType.LIKERT and q.key is None:
        raise MalformedKey(f"question {q.id!r}: {q.type.value} requires an answer key")
    _TYPE_VALIDATORS[q.type](q)
    if q.explanations is not None:
        if not isinstance(q.explanations, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in q.explanations.items()
        ):
            raise MalformedKey(f"question {q.id!r}: explanations must map part ids to text")


@dataclass(frozen=True)
class QuestionBank:
    """A consistent snapshot of the topic hierarchy plus the question set."""

    topics: TopicHierarchy = field(default_factory=TopicHierarchy.empty)
    questions: Mapping[str, Question] = field(default_factory=dict)
    version: int = 0

    def add_topic(self, node: TopicNode) -> "QuestionBank":
        return replace(self, topics=self.topics.add(node), version=self.version + 1)

    def add_question(self, q: Question) -> "QuestionBank":
        if q.id in self.questions:
            raise DuplicateId(f"question id {q.id!r} already present")
        validate_question(q, self.topics)
        questions = dict(self.questions)
        questions[q.id] = q
        return replace(self, questions=questions, version=self.version + 1)

    def update_question(self, q: Question) -> "QuestionBank":
        if q.id not in self.questions:
            raise UnknownQuestion(f"unknown question {q.id!r}")
        validate_question(q, self.topics)
        questions = dict(self.questions)
        questions[q.id] = q
        return replace(self, questions=questions, version=self.version + 1)

    def remove_question(self, question_id: str) -> "QuestionBank":
        if question_id not in self.questions:
            raise UnknownQuestion(f"unknown question {question_id!r}")
        questions = dict(self.questions)
        del questions[question_id]
        return replace(self, questions=questions, version=self.version + 1)

    def remove_topic(self, topic_id: str) -> "QuestionBank":
        """Remove a leaf topic no question references."""
        self.topics.get(topic_id)
        if self.topics.children(topic_id):
            raise ValidationError([f"topic {topic_id!r} still has child topics"])
        holders = [q.id for q in self.questions.values() if topic_id in q.topics]
        if holders:
            raise ValidationError(
                [f"topic {topic_id!r} is referenced by question {qid!r}" for qid in holders]
            )
        nodes = {n.id: n for n in self.topics if n.id != topic_id}
        return replace(self, topics=TopicHierarchy(nodes), version=self.version + 1)

    def get(self, question_id: str) -> Question:
        try:
            return self.questions[question_id]
        except KeyError:
            raise UnknownQuestion(f"unknown question {question_id!r}") from None

    def topic_closure(self, topic_id: str) -> set[str]:
        """Ids of every question whose declared topics intersect the subtree
        rooted at topic_id (this is what makes a question visible at every
        ancestor of its tags)."""
        subtree = self.topics.subtree(topic_id)
        return {q.id for q in self.questions.values() if q.topics & subtree}


def build_bank(topics: Iterable[TopicNode], questions: Iterable[Question]) -> QuestionBank:
    """Convenience constructor used by tests and fixtures."""
    bank = QuestionBank()
    for node in topics:
        bank = bank.add_topic(node)
    for q in questions:
        bank = bank.add_question(q)
    return bank
