from __future__ import annotations

import dataclasses
import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selfassess import (
    Answer,
    Difficulty,
    KnowledgeLevel,
    Question,
    QuestionType,
    ShapeMismatch,
    Stem,
    TopicNode,
    UnknownQuestion,
    aggregate_topics,
    build_bank,
    grade_item,
    grade_session,
    overall_percent,
)

from helpers import correct_payload_for, random_payload_for, wrong_payload_for


def make_q(qid, qtype, body, key, weight=1.0, topics=("t",), difficulty="easy"):
    return Question(
        id=qid,
        type=QuestionType(qtype),
        stem=Stem(text=qid),
        body=body,
        key=key,
        difficulty=Difficulty.from_label(difficulty),
        education_level=3,
        topics=frozenset(topics),
        weight=weight,
    )


def opts(*ids):
    return [{"id": i, "text": i} for i in ids]


def zoo_questions():
    """One question per type with hand-checkable keys."""
    return [
        make_q("mc", "multiple_choice", {"options": opts("a", "b", "c")}, {"option": "b"}),
        make_q(
            "mr",
            "multiple_response",
            {"options": opts("a", "b", "c", "d")},
            {"options": ["a", "b"]},
        ),
        make_q("tf", "true_false", {}, {"value": True}),
        make_q(
            "fb",
            "fill_blanks",
            {"blanks": ["b1", "b2"]},
            {"blanks": {"b1": ["Paris", "paris city"], "b2": ["42"]}},
        ),
        make_q(
            "ma",
            "matching",
            {"left": opts("l1", "l2", "l3", "l4"), "right": opts("r1", "r2", "r3", "r4")},
            {"pairs": {"l1": "r1", "l2": "r2", "l3": "r3", "l4": "r4"}},
        ),
        make_q(
            "sq",
            "sequence",
            {"items": opts("s1", "s2", "s3", "s4")},
            {"order": ["s1", "s2", "s3", "s4"]},
        ),
        make_q(
            "hr",
            "hotspot",
            {"image": "asset://img", "width": 100, "height": 100},
            {"region": {"shape": "rect", "x": 10, "y": 20, "w": 30, "h": 40}},
        ),
        make_q(
            "hp",
            "hotspot",
            {"image": "asset://img", "width": 100, "height": 100},
            {"region": {"shape": "polygon", "points": [[0, 0], [10, 0], [0, 10]]}},
        ),
        make_q(
            "dd",
            "drag_drop",
            {
                "items": opts("i1", "i2", "i3"),
                "zones": [{"id": "z1", "label": "Z1"}, {"id": "z2", "label": "Z2"}],
            },
            {"placements": {"i1": "z1", "i2": "z2", "i3": "z1"}},
        ),
        make_q(
            "sl",
            "select_lists",
            {
                "selects": [
                    {"id": "s1", "options": opts("o1", "o2")},
                    {"id": "s2", "options": opts("o3", "o4")},
                ]
            },
            {"choices": {"s1": "o1", "s2": "o4"}},
        ),
        make_q("lk", "likert", {"scale": 5}, None),
    ]


@pytest.fixture(scope="module")
def zoo():
    bank = build_bank([TopicNode(id="t", name="t")], zoo_questions())
    return {q.id: q for q in bank.questions.values()}


def score_of(q, payload):
    return grade_item(q, Answer(question_id=q.id, payload=payload)).score


class TestPerTypeScores:
    def test_multiple_choice_binary(self, zoo):
        assert score_of(zoo["mc"], {"option": "b"}) == 1.0
        assert score_of(zoo["mc"], {"option": "a"}) == 0.0

    def test_multiple_response_enumeration(self, zoo):
        q = zoo["mr"]
        key = {"a", "b"}
        for r in range(5):
            for combo in itertools.combinations("abcd", r):
                selected = set(combo)
                hits = len(selected & key)
                misses = len(selected - key)
                want = max(0.0, (hits - misses) / len(key))
                assert score_of(q, {"options": sorted(selected)}) == want

    def test_true_false_binary(self, zoo):
        assert score_of(zoo["tf"], {"value": True}) == 1.0
        assert score_of(zoo["tf"], {"value": False}) == 0.0

    def test_fill_blanks_normalization(self, zoo):
        q = zoo["fb"]
        assert score_of(q, {"blanks": {"b1": "  PARIS ", "b2": "42"}}) == 1.0
        assert score_of(q, {"blanks": {"b1": "paris city", "b2": "forty-two"}}) == 0.5
        assert score_of(q, {"blanks": {"b1": "par is", "b2": ""}}) == 0.0
        assert score_of(q, {"blanks": {"b2": "42"}}) == 0.5

    def test_matching_all_permutations(self, zoo):
        q = zoo["ma"]
        lefts = ["l1", "l2", "l3", "l4"]
        rights = ["r1", "r2", "r3", "r4"]
        for perm in itertools.permutations(rights):
            pairs = dict(zip(lefts, perm))
            fixed = sum(1 for l, r in pairs.items() if r == f"r{l[1]}")
            assert score_of(q, {"pairs": pairs}) == fixed / 4

    def test_matching_partial_assignment(self, zoo):
        assert score_of(zoo["ma"], {"pairs": {"l1": "r1"}}) == 0.25
        assert score_of(zoo["ma"], {"pairs": {}}) == 0.0

    def test_sequence_positionwise(self, zoo):
        q = zoo["sq"]
        for perm in itertools.permutations(["s1", "s2", "s3", "s4"]):
            fixed = sum(1 for i, s in enumerate(perm) if s == f"s{i + 1}")
            assert score_of(q, {"order": list(perm)}) == fixed / 4
        assert score_of(q, {"order": ["s2", "s3", "s4", "s1"]}) == 0.0

    def test_hotspot_rect_boundary_inclusive(self, zoo):
        q = zoo["hr"]
        for x, y in [(10, 20), (40, 60), (10, 60), (40, 20), (25, 20), (10, 40), (25, 40)]:
            assert score_of(q, {"x": x, "y": y}) == 1.0, (x, y)
        for x, y in [(9.999, 20), (40.001, 60), (25, 19.999), (25, 60.001), (0, 0)]:
            assert score_of(q, {"x": x, "y": y}) == 0.0, (x, y)

    def test_hotspot_polygon_boundary_inclusive(self, zoo):
        q = zoo["hp"]
        for x, y in [(0, 0), (10, 0), (0, 10), (5, 5), (5, 0), (0, 5), (2, 2)]:
            assert score_of(q, {"x": x, "y": y}) == 1.0, (x, y)
        for x, y in [(6, 6), (-0.001, 0), (10.001, 0), (5, 5.001), (100, 100)]:
            assert score_of(q, {"x": x, "y": y}) == 0.0, (x, y)

    def test_drag_drop_fraction(self, zoo):
        q = zoo["dd"]
        assert score_of(q, {"placements": {"i1": "z1", "i2": "z2", "i3": "z1"}}) == 1.0
        assert score_of(q, {"placements": {"i1": "z1", "i2": "z1", "i3": "z2"}}) == 1 / 3
        assert score_of(q, {"placements": {"i1": "z2", "i2": "z1", "i3": "z2"}}) == 0.0
        assert score_of(q, {"placements": {"i1": "z1"}}) == 1 / 3

    def test_select_lists_fraction(self, zoo):
        q = zoo["sl"]
        assert score_of(q, {"choices": {"s1": "o1", "s2": "o4"}}) == 1.0
        assert score_of(q, {"choices": {"s1": "o2", "s2": "o4"}}) == 0.5
        assert score_of(q, {"choices": {"s1": "o2", "s2": "o3"}}) == 0.0
        assert score_of(q, {"choices": {"s2": "o4"}}) == 0.5

    def test_likert_recorded_never_scored(self, zoo):
        item = grade_item(zoo["lk"], Answer(question_id="lk", payload={"value": 3}))
        assert item.graded is False
        assert item.score is None
        assert item.weighted is None

    def test_likert_payload_still_validated(self, zoo):
        with pytest.raises(ShapeMismatch):
            grade_item(zoo["lk"], Answer(question_id="lk", payload={"value": 6}))

    def test_skip_scores_zero_for_keyed(self, zoo):
        for qid in ("mc", "ma", "hp"):
            for answer in (None, Answer(question_id=qid, payload=None)):
                item = grade_item(zoo[qid], answer)
                assert item.graded is True
                assert item.score == 0.0
                assert item.weighted == 0.0

    def test_skip_keeps_likert_ungraded(self, zoo):
        item = grade_item(zoo["lk"], None)
        assert item.graded is False


class TestShapeMismatch:
    CASES = [
        ("mc", {"option": "zz"}),
        ("mc", {"option": 3}),
        ("mc", {}),
        ("mr", {"options": ["a", "a"]}),
        ("mr", {"options": ["zz"]}),
        ("mr", {"options": "ab"}),
        ("tf", {"value": "yes"}),
        ("fb", {"blanks": {"nope": "x"}}),
        ("fb", {"blanks": {"b1": 7}}),
        ("fb", {"blanks": ["b1"]}),
        ("ma", {"pairs": {"zz": "r1"}}),
        ("ma", {"pairs": {"l1": "zz"}}),
        ("sq", {"order": ["s1", "s2", "s3"]}),
        ("sq", {"order": ["s1", "s1", "s2", "s3"]}),
        ("hr", {"x": 1}),
        ("hr", {"x": float("nan"), "y": 2}),
        ("hr", {"x": True, "y": 2}),
        ("dd", {"placements": {"zz": "z1"}}),
        ("dd", {"placements": {"i1": "zz"}}),
        ("sl", {"choices": {"zz": "o1"}}),
        ("sl", {"choices": {"s1": "o3"}}),
        ("lk", {"value": 0}),
        ("lk", {"value": "3"}),
    ]

    @pytest.mark.parametrize("qid,payload", CASES)
    def test_bad_payload_rejected(self, zoo, qid, payload):
        with pytest.raises(ShapeMismatch) as err:
            grade_item(zoo[qid], Answer(question_id=qid, payload=payload))
        assert qid in str(err.value)

    def test_misaddressed_answer_rejected(self, zoo):
        with pytest.raises(ShapeMismatch):
            grade_item(zoo["mc"], Answer(question_id="tf", payload={"option": "b"}))


class TestFuzz:
    def test_random_payloads_stay_in_unit_interval(self, zoo):
        rng = random.Random(4321)
        keyed = [q for q in zoo.values() if q.type is not QuestionType.LIKERT]
        for q in keyed:
            for _ in range(200):
                score = score_of(q, random_payload_for(q, rng))
                assert 0.0 <= score <= 1.0, q.id

    def test_correct_payload_scores_exactly_one(self, zoo, fixture_bank):
        keyed = [q for q in zoo.values() if q.type is not QuestionType.LIKERT]
        keyed += [
            q for q in fixture_bank.questions.values() if q.type is not QuestionType.LIKERT
        ]
        for q in keyed:
            assert score_of(q, correct_payload_for(q)) == 1.0, q.id

    def test_wrong_payload_scores_exactly_zero(self, zoo, fixture_bank):
        keyed = [q for q in zoo.values() if q.type is not QuestionType.LIKERT]
        keyed += [
            q for q in fixture_bank.questions.values() if q.type is not QuestionType.LIKERT
        ]
        for q in keyed:
            assert score_of(q, wrong_payload_for(q)) == 0.0, q.id


def two_topic_forest():
    return [
        TopicNode(id="p", name="p"),
        TopicNode(id="p.c1", name="c1", parent="p"),
        TopicNode(id="p.c2", name="c2", parent="p"),
    ]


def tf(qid, topics, weight=1.0):
    return make_q(qid, "true_false", {}, {"value": True}, weight=weight, topics=topics)


def answers_scoring(bank, wanted: dict):
    """Answers hitting an exact target score per question (0, .5, or 1)."""
    out = {}
    for qid, target in wanted.items():
        q = bank.get(qid)
        if target == 1.0:
            out[qid] = correct_payload_for(q)
        elif target == 0.0:
            out[qid] = wrong_payload_for(q)
        else:
            raise AssertionError("use a fractional type for mid scores")
    return out


class TestAggregation:
    def test_weighted_mean_example(self):
        # weight 1 scoring 1.0 plus weight 3 scoring 0.5 averages to 62.5
        half = make_q(
            "half",
            "matching",
            {"left": opts("l1", "l2"), "right": opts("r1", "r2")},
            {"pairs": {"l1": "r1", "l2": "r2"}},
            weight=3.0,
        )
        bank = build_bank([TopicNode(id="t", name="t")], [tf("full", ("t",)), half])
        scores = grade_session(
            bank,
            ["full", "half"],
            {
                "full": {"value": True},
                "half": {"pairs": {"l1": "r1", "l2": "r1"}},
            },
        )
        results = aggregate_topics(bank, scores)
        assert [r.topic_id for r in results] == ["t"]
        assert results[0].percent == pytest.approx(62.5)
        assert results[0].item_count == 2
        assert results[0].inferred_level is KnowledgeLevel.GOOD
        assert overall_percent(bank, scores) == pytest.approx(62.5)

    def test_parent_pools_children(self):
        bank = build_bank(
            two_topic_forest(), [tf("q1", ("p.c1",)), tf("q2", ("p.c2",))]
        )
        scores = grade_session(
            bank, ["q1", "q2"], {"q1": {"value": True}, "q2": {"value": False}}
        )
        by_topic = {r.topic_id: r for r in aggregate_topics(bank, scores)}
        assert by_topic["p.c1"].percent == 100.0
        assert by_topic["p.c2"].percent == 0.0
        assert by_topic["p"].percent == 50.0
        assert by_topic["p"].item_count == 2

    def test_multi_tag_counts_once_at_shared_ancestor(self):
        bank = build_bank(two_topic_forest(), [tf("q1", ("p.c1", "p.c2"))])
        scores = grade_session(bank, ["q1"], {"q1": {"value": True}})
        by_topic = {r.topic_id: r for r in aggregate_topics(bank, scores)}
        assert by_topic["p"].item_count == 1
        assert by_topic["p"].percent == 100.0

    def test_duplicated_item_equals_doubled_weight(self):
        nodes = two_topic_forest()
        dup = build_bank(
            nodes, [tf("a1", ("p.c1",)), tf("a2", ("p.c1",)), tf("b", ("p.c2",))]
        )
        dup_scores = grade_session(
            dup,
            ["a1", "a2", "b"],
            {"a1": {"value": False}, "a2": {"value": False}, "b": {"value": True}},
        )
        heavy = build_bank(nodes, [tf("a", ("p.c1",), weight=2.0), tf("b", ("p.c2",))])
        heavy_scores = grade_session(
            heavy, ["a", "b"], {"a": {"value": False}, "b": {"value": True}}
        )
        dup_result = {r.topic_id: r.percent for r in aggregate_topics(dup, dup_scores)}
        heavy_result = {r.topic_id: r.percent for r in aggregate_topics(heavy, heavy_scores)}
        assert dup_result == heavy_result
        assert overall_percent(dup, dup_scores) == overall_percent(heavy, heavy_scores)

    def test_ungraded_topics_are_omitted(self):
        lk = make_q("lk", "likert", {"scale": 5}, None, topics=("p.c2",))
        bank = build_bank(two_topic_forest(), [tf("q1", ("p.c1",)), lk])
        scores = grade_session(bank, ["q1", "lk"], {"q1": {"value": True}, "lk": {"value": 2}})
        topics = {r.topic_id for r in aggregate_topics(bank, scores)}
        assert topics == {"p", "p.c1"}

    def test_assessed_topics_restrict_roll_up(self):
        bank = build_bank(two_topic_forest(), [tf("q1", ("p.c1",))])
        scores = grade_session(bank, ["q1"], {"q1": {"value": True}})
        topics = {r.topic_id for r in aggregate_topics(bank, scores, ["p.c1"])}
        assert topics == {"p.c1"}

    def test_nothing_graded_gives_none_overall(self):
        lk = make_q("lk", "likert", {"scale": 5}, None, topics=("p",))
        bank = build_bank(two_topic_forest(), [lk])
        scores = grade_session(bank, ["lk"], {})
        assert aggregate_topics(bank, scores) == []
        assert overall_percent(bank, scores) is None

    def test_grade_session_rejects_foreign_answers(self):
        bank = build_bank(two_topic_forest(), [tf("q1", ("p.c1",))])
        with pytest.raises(UnknownQuestion):
            grade_session(bank, ["q1"], {"q9": {"value": True}})

    def test_unanswered_items_count_as_skips(self):
        bank = build_bank(two_topic_forest(), [tf("q1", ("p.c1",)), tf("q2", ("p.c1",))])
        scores = grade_session(bank, ["q1", "q2"], {"q1": {"value": True}})
        by_topic = {r.topic_id: r for r in aggregate_topics(bank, scores)}
        assert by_topic["p.c1"].percent == 50.0

    @settings(max_examples=30, deadline=None)
    @given(
        scale=st.floats(min_value=1e-6, max_value=1e6, allow_nan=False),
        seed=st.integers(0, 2**20),
    )
    def test_weight_scaling_invariance(self, scale, seed):
        rng = random.Random(seed)
        questions = [
            tf(f"q{i}", (rng.choice(["p", "p.c1", "p.c2"]),), weight=rng.uniform(0.1, 9))
            for i in range(6)
        ]
        bank = build_bank(two_topic_forest(), questions)
        answers = {
            q.id: {"value": rng.random() < 0.5} for q in questions if rng.random() < 0.8
        }
        scaled_bank = build_bank(
            two_topic_forest(),
            [dataclasses.replace(q, weight=q.weight * scale) for q in questions],
        )
        base = aggregate_topics(bank, grade_session(bank, [q.id for q in questions], answers))
        scaled = aggregate_topics(
            scaled_bank, grade_session(scaled_bank, [q.id for q in questions], answers)
        )
        assert [r.topic_id for r in base] == [r.topic_id for r in scaled]
        for lhs, rhs in zip(base, scaled):
            assert rhs.percent == pytest.approx(lhs.percent, rel=1e-12)
            assert lhs.inferred_level is rhs.inferred_level
