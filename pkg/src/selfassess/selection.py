"""Criteria-driven question selection.

Learners pick topics and one rule; the engine filters the topics' closure,
clusters the survivors by their narrowest declared subtopic, orders clusters
lexicographically and items by (difficulty, id), and, when more items match
than asked for, samples proportionally per cluster with a seeded generator.

Rule families:
  by_difficulty  compare question difficulty to a fixed pivot
  by_knowledge   pivot is the learner's level (declared, else profiled),
                 mapped low/good/high -> easy/medium/difficult
  by_education   compare the question's education rank to the learner's
  auto           per topic: education rank equal, difficulty mapped from the
                 profiled level for that topic (good when unrecorded)

Everything is a pure function over an immutable bank snapshot, so selections
are reproducible: identical (bank, criteria, seed) gives an identical list.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from .bank import Question, QuestionBank
from .errors import MissingProfile, OutOfRange, ValidationError
from .profiles import LearnerProfile
from .types import (
    Difficulty,
    KnowledgeLevel,
    QuestionType,
    Relation,
    knowledge_to_difficulty,
    validate_education_rank,
)


@dataclass(frozen=True)
class ByDifficulty:
    relation: Relation
    pivot: Difficulty

    kind = "by_difficulty"


@dataclass(frozen=True)
class ByKnowledge:
    """declared is the learner's self-assigned level; None defers to the profile."""

    relation: Relation
    declared: KnowledgeLevel | None = None

    kind = "by_knowledge"


@dataclass(frozen=True)
class ByEducation:
    relation: Relation

    kind = "by_education"


@dataclass(frozen=True)
class Auto:
    kind = "auto"


Rule = Union[ByDifficulty, ByKnowledge, ByEducation, Auto]

# "average difficulty" means the scale midpoint, not a bank statistic, so
# selections stay stable as the bank grows
AVERAGE_DIFFICULTY = Difficulty.MEDIUM

DEFAULT_KNOWLEDGE = KnowledgeLevel.GOOD


@dataclass(frozen=True)
class SelectionCriteria:
    topics: tuple[str, ...]
    rule: Rule
    count: int
    seed: int = 0
    include_likert: bool = False


@dataclass(frozen=True)
class LearnerContext:
    """What the engine may know about the requester.

    education_level is a declared rank (guests); profile is the stored record
    for registered learners. A declared value wins over the profile for the
    one request that carries it.
    """

    education_level: int | None = None
    profile: LearnerProfile | None = None


GUEST = LearnerContext()


@dataclass(frozen=True)
class Cluster:
    topic_id: str
    question_ids: tuple[str, ...]


@dataclass(frozen=True)
class SelectionResult:
    questions: tuple[Question, ...]
    clusters: tuple[Cluster, ...]
    diagnostic: str | None = None


def _item_order(question: Question) -> tuple[int, str]:
    return (int(question.difficulty), question.id)


def _narrowest_topic(bank: QuestionBank, question: Question, admissible: frozenset[str]) -> str:
    declared = [t for t in question.topics if t in admissible]
    declared.sort(key=lambda t: (-bank.topics.depth(t), t))
    return declared[0]


def _resolve_education(context: LearnerContext) -> int:
    if context.education_level is not None:
        return validate_education_rank(context.education_level)
    if context.profile is not None:
        return context.profile.education_level
    raise MissingProfile("education-based selection needs a declared or profiled education level")


def _knowledge_pivot(
    bank: QuestionBank,
    question: Question,
    rule: ByKnowledge,
    context: LearnerContext,
    requested: Sequence[str],
    subtrees: Mapping[str, frozenset[str]],
) -> KnowledgeLevel:
    if rule.declared is not None:
        return rule.declared
    if context.profile is None:
        raise MissingProfile(
            "knowledge-based selection needs a declared level or a registered profile"
        )
    # the deepest requested topic admitting the question decides which
    # profiled level applies; ties fall to topic-id order like clustering
    admitting = [t for t in requested if question.topics & subtrees[t]]
    admitting.sort(key=lambda t: (-bank.topics.depth(t), t))
    return context.profile.knowledge.get(admitting[0], DEFAULT_KNOWLEDGE)


def _sample_clusters(
    clustered: list[tuple[str, list[Question]]],
    count: int,
    seed: int,
) -> list[tuple[str, list[Question]]]:
    """Largest-remainder proportional allocation, then seeded per-cluster picks."""
    total = sum(len(items) for _, items in clustered)
    quotas = [count * len(items) / total for _, items in clustered]
    allocations = [int(q) for q in quotas]
    leftover = count - sum(allocations)
    by_remainder = sorted(
        range(len(clustered)),
        key=lambda i: (allocations[i] - quotas[i], clustered[i][0]),
    )
    for i in by_remainder[:leftover]:
        allocations[i] += 1

    sampled = []
    for (topic_id, items), take in zip(clustered, allocations):
        if take == 0:
            continue
        if take >= len(items):
            picked = items
        else:
            rng = random.Random(f"{seed}:{topic_id}")
            picked = sorted(rng.sample(items, take), key=_item_order)
        sampled.append((topic_id, picked))
    return sampled


def _assemble(
    bank: QuestionBank,
    candidates: list[Question],
    admissible: frozenset[str],
    count: int,
    seed: int,
    pool_size: int,
) -> SelectionResult:
    if not candidates:
        noun = "candidate question" if pool_size == 1 else "candidate questions"
        return SelectionResult(
            questions=(),
            clusters=(),
            diagnostic=f"0 of {pool_size} {noun} in the requested topics satisfy the rule",
        )

    groups: dict[str, list[Question]] = {}
    for question in candidates:
        groups.setdefault(_narrowest_topic(bank, question, admissible), []).append(question)
    clustered = [(tid, sorted(groups[tid], key=_item_order)) for tid in sorted(groups)]

    if len(candidates) > count:
        clustered = _sample_clusters(clustered, count, seed)

    questions: list[Question] = []
    clusters: list[Cluster] = []
    for topic_id, items in clustered:
        questions.extend(items)
        clusters.append(Cluster(topic_id=topic_id, question_ids=tuple(q.id for q in items)))
    return SelectionResult(questions=tuple(questions), clusters=tuple(clusters))


def select(
    bank: QuestionBank,
    criteria: SelectionCriteria,
    context: LearnerContext = GUEST,
) -> SelectionResult:
    """Apply one rule over the topics' closure; empty output is a diagnostic,
    not an error."""
    if not criteria.topics:
        raise ValidationError(["criteria.topics must name at least one topic"])
    if criteria.count < 1:
        raise OutOfRange(f"criteria.count must be positive, got {criteria.count}")

    rule = criteria.rule
    if isinstance(rule, Auto):
        if context.profile is None:
            raise MissingProfile("auto selection requires a registered profile")
        return select_auto(
            bank,
            context.profile,
            criteria.topics,
            criteria.count,
            seed=criteria.seed,
            include_likert=criteria.include_likert,
        )

    requested = sorted(set(criteria.topics))
    subtrees = {t: bank.topics.subtree(t) for t in requested}
    admissible = frozenset().union(*subtrees.values())

    pool = sorted(
        {qid for t in requested for qid in bank.topic_closure(t)},
    )
    questions = [bank.get(qid) for qid in pool]
    if not criteria.include_likert:
        questions = [q for q in questions if q.type is not QuestionType.LIKERT]
    pool_size = len(questions)

    if isinstance(rule, ByDifficulty):
        candidates = [q for q in questions if rule.relation.holds(int(q.difficulty), int(rule.pivot))]
    elif isinstance(rule, ByEducation):
        rank = _resolve_education(context)
        candidates = [q for q in questions if rule.relation.holds(q.education_level, rank)]
    elif isinstance(rule, ByKnowledge):
        candidates = []
        for q in questions:
            level = _knowledge_pivot(bank, q, rule, context, requested, subtrees)
            pivot = knowledge_to_difficulty(level)
            if rule.relation.holds(int(q.difficulty), int(pivot)):
                candidates.append(q)
    else:
        raise ValidationError([f"unknown rule {rule!r}"])

    return _assemble(bank, candidates, admissible, criteria.count, criteria.seed, pool_size)


def select_auto(
    bank: QuestionBank,
    profile: LearnerProfile,
    topics: Sequence[str],
    count: int,
    seed: int = 0,
    include_likert: bool = False,
) -> SelectionResult:
    """Profile-driven mode: per topic, education rank must match and the
    difficulty must map from the profiled level for that topic."""
    if profile is None:
        raise MissingProfile("auto selection requires a registered profile")
    if count < 1:
        raise OutOfRange(f"count must be positive, got {count}")

    requested = sorted(set(topics))
    subtrees = {t: bank.topics.subtree(t) for t in requested}
    admissible = frozenset().union(*subtrees.values())

    pool_ids: set[str] = set()
    chosen: dict[str, Question] = {}
    for t in requested:
        wanted = knowledge_to_difficulty(profile.knowledge.get(t, DEFAULT_KNOWLEDGE))
        for qid in bank.topic_closure(t):
            q = bank.get(qid)
            if q.type is QuestionType.LIKERT and not include_likert:
                continue
            pool_ids.add(qid)
            if q.education_level == profile.education_level and q.difficulty == wanted:
                chosen[qid] = q

    candidates = [chosen[qid] for qid in sorted(chosen)]
    return _assemble(bank, candidates, admissible, count, seed, len(pool_ids))


# --- wire format -----------------------------------------------------------
#
# {topics: [...], rule: {kind, relation?, pivot?}, count, seed?, include_likert?}
# shared by the HTTP API and the CLI.

_RULE_KINDS = ("by_difficulty", "by_knowledge", "by_education", "auto")


def rule_to_document(rule: Rule) -> dict:
    doc: dict = {"kind": rule.kind}
    if isinstance(rule, ByDifficulty):
        doc["relation"] = rule.relation.value
        doc["pivot"] = rule.pivot.label
    elif isinstance(rule, ByKnowledge):
        doc["relation"] = rule.relation.value
        if rule.declared is not None:
            doc["pivot"] = rule.declared.label
    elif isinstance(rule, ByEducation):
        doc["relation"] = rule.relation.value
    return doc


def criteria_to_document(criteria: SelectionCriteria) -> dict:
    doc = {
        "topics": sorted(criteria.topics),
        "rule": rule_to_document(criteria.rule),
        "count": criteria.count,
    }
    if criteria.seed:
        doc["seed"] = criteria.seed
    if criteria.include_likert:
        doc["include_likert"] = True
    return doc


def _rule_from_document(doc, problems: list[str]) -> Rule | None:
    if not isinstance(doc, dict):
        problems.append("rule must be an object")
        return None
    kind = doc.get("kind")
    if kind not in _RULE_KINDS:
        problems.append(f"rule.kind must be one of {', '.join(_RULE_KINDS)}")
        return None
    extra = set(doc) - {"kind", "relation", "pivot"}
    if extra:
        problems.append(f"rule has unknown fields: {', '.join(sorted(extra))}")
        return None

    if kind == "auto":
        if "relation" in doc or "pivot" in doc:
            problems.append("rule auto takes no relation or pivot")
            return None
        return Auto()

    try:
        relation = Relation.from_label(doc.get("relation"))
    except Exception:
        problems.append("rule.relation must be one of below, at_most, match, at_least, above")
        return None

    if kind == "by_difficulty":
        try:
            pivot = Difficulty.from_label(doc.get("pivot"))
        except Exception:
            problems.append("rule.pivot must be one of easy, medium, difficult")
            return None
        return ByDifficulty(relation=relation, pivot=pivot)
    if kind == "by_knowledge":
        declared = None
        if "pivot" in doc:
            try:
                declared = KnowledgeLevel.from_label(doc["pivot"])
            except Exception:
                problems.append("rule.pivot must be one of low, good, high")
                return None
        return ByKnowledge(relation=relation, declared=declared)
    if "pivot" in doc:
        problems.append("rule by_education takes no pivot")
        return None
    return ByEducation(relation=relation)


def criteria_from_document(doc) -> SelectionCriteria:
    """Parse the wire format, reporting every problem at once."""
    problems: list[str] = []
    if not isinstance(doc, dict):
        raise ValidationError(["criteria must be an object"])

    extra = set(doc) - {"topics", "rule", "count", "seed", "include_likert"}
    if extra:
        problems.append(f"criteria has unknown fields: {', '.join(sorted(extra))}")

    topics = doc.get("topics")
    if (
        not isinstance(topics, list)
        or not topics
        or not all(isinstance(t, str) and t for t in topics)
    ):
        problems.append("topics must be a non-empty list of topic ids")
        topics = []

    rule = _rule_from_document(doc.get("rule"), problems)

    count = doc.get("count")
    if not isinstance(count, int) or isinstance(count, bool) or count < 1:
        problems.append("count must be a positive integer")
        count = 1

    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        problems.append("seed must be an integer")
        seed = 0

    include_likert = doc.get("include_likert", False)
    if not isinstance(include_likert, bool):
        problems.append("include_likert must be a boolean")
        include_likert = False

    if problems:
        raise ValidationError(problems)
    return SelectionCriteria(
        topics=tuple(topics),
        rule=rule,
        count=count,
        seed=seed,
        include_likert=include_likert,
    )
