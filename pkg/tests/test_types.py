from __future__ import annotations

import pytest

from selfassess import (
    Difficulty,
    KnowledgeLevel,
    OutOfRange,
    Relation,
    difficulty_to_knowledge,
    knowledge_to_difficulty,
)
from selfassess.types import validate_education_rank


def test_difficulty_labels_round_trip():
    for d in Difficulty:
        assert Difficulty.from_label(d.label) is d


def test_knowledge_labels_round_trip():
    for k in KnowledgeLevel:
        assert KnowledgeLevel.from_label(k.label) is k


def test_unknown_labels_rejected():
    with pytest.raises(OutOfRange):
        Difficulty.from_label("impossible")
    with pytest.raises(OutOfRange):
        KnowledgeLevel.from_label("medium")
    with pytest.raises(OutOfRange):
        Relation.from_label("greater")


def test_knowledge_difficulty_bijection():
    assert knowledge_to_difficulty(KnowledgeLevel.LOW) is Difficulty.EASY
    assert knowledge_to_difficulty(KnowledgeLevel.GOOD) is Difficulty.MEDIUM
    assert knowledge_to_difficulty(KnowledgeLevel.HIGH) is Difficulty.DIFFICULT
    for k in KnowledgeLevel:
        assert difficulty_to_knowledge(knowledge_to_difficulty(k)) is k
    for d in Difficulty:
        assert knowledge_to_difficulty(difficulty_to_knowledge(d)) is d


def test_relation_semantics_exhaustive():
    table = {
        Relation.BELOW: lambda a, b: a < b,
        Relation.AT_MOST: lambda a, b: a <= b,
        Relation.MATCH: lambda a, b: a == b,
        Relation.AT_LEAST: lambda a, b: a >= b,
        Relation.ABOVE: lambda a, b: a > b,
    }
    for relation, expect in table.items():
        for a in range(1, 6):
            for b in range(1, 6):
                assert relation.holds(a, b) == expect(a, b)


def test_education_rank_validation():
    for rank in range(1, 6):
        assert validate_education_rank(rank) == rank
    for bad in (0, 6, -1, "3", 2.5, True, None):
        with pytest.raises(OutOfRange):
            validate_education_rank(bad)
