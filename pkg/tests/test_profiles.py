from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from selfassess import (
    KnowledgeLevel,
    LearnerProfile,
    OutOfRange,
    SessionNotFinal,
    SessionRecord,
    infer_level,
    update_profile,
    weakness_report,
)
from selfassess.grading import ItemScore, TopicResult
from selfassess.profiles import profile_from_document, profile_to_document


def result(topic_id, percent):
    return TopicResult(
        topic_id=topic_id,
        percent=percent,
        item_count=1,
        inferred_level=infer_level(percent),
    )


def record(session_id, results, timestamp="2026-03-01T10:00:00Z", final=True):
    return SessionRecord(
        session_id=session_id,
        timestamp=timestamp,
        criteria={"topics": ["t"]},
        topic_results=tuple(results),
        levels={r.topic_id: r.inferred_level.label for r in results},
        final=final,
    )


class TestThresholds:
    def test_canonical_points(self):
        cases = {
            0: "low",
            25: "low",
            49.999: "low",
            50: "good",
            62.5: "good",
            75: "good",
            75.001: "high",
            100: "high",
        }
        for percent, label in cases.items():
            assert infer_level(percent).label == label, percent

    def test_sweep_gives_three_contiguous_bands(self):
        # walk 0..100 in half-point steps: the level must step up exactly
        # twice, at 50 and just past 75
        points = [i / 2 for i in range(201)]
        labels = [infer_level(p).label for p in points]
        changes = [
            (points[i], labels[i - 1], labels[i])
            for i in range(1, len(labels))
            if labels[i] != labels[i - 1]
        ]
        assert changes == [(50.0, "low", "good"), (75.5, "good", "high")]

    @given(st.floats(min_value=0, max_value=100, allow_nan=False))
    def test_total_on_the_interval(self, percent):
        assert infer_level(percent) in KnowledgeLevel

    @given(
        st.floats(min_value=0, max_value=100),
        st.floats(min_value=0, max_value=100),
    )
    def test_monotone(self, a, b):
        lo, hi = sorted((a, b))
        assert infer_level(lo) <= infer_level(hi)

    def test_out_of_range_rejected(self):
        for percent in (-0.001, 100.001, float("nan"), float("inf")):
            with pytest.raises(OutOfRange):
                infer_level(percent)


class TestProfileUpdates:
    def test_reassessment_overwrites_level(self):
        profile = LearnerProfile(learner_id="len", education_level=3)
        profile = update_profile(profile, record("s1", [result("t", 40.0)]))
        assert profile.knowledge["t"] is KnowledgeLevel.LOW
        profile = update_profile(profile, record("s2", [result("t", 60.0)]))
        assert profile.knowledge["t"] is KnowledgeLevel.GOOD
        assert [r.session_id for r in profile.history] == ["s1", "s2"]

    def test_untouched_topics_keep_their_level(self):
        profile = LearnerProfile(
            learner_id="len",
            education_level=3,
            knowledge={"other": KnowledgeLevel.HIGH},
        )
        profile = update_profile(profile, record("s1", [result("t", 10.0)]))
        assert profile.knowledge["other"] is KnowledgeLevel.HIGH
        assert profile.knowledge["t"] is KnowledgeLevel.LOW

    def test_non_final_record_rejected(self):
        profile = LearnerProfile(learner_id="len", education_level=3)
        with pytest.raises(SessionNotFinal):
            update_profile(profile, record("s1", [result("t", 90.0)], final=False))
        assert profile.history == ()

    def test_update_does_not_mutate_input(self):
        profile = LearnerProfile(learner_id="len", education_level=3)
        update_profile(profile, record("s1", [result("t", 90.0)]))
        assert profile.knowledge == {}
        assert profile.history == ()


class TestWeakness:
    def test_topics_ordered_weakest_first(self):
        results = [result("A", 30.0), result("B", 80.0), result("C", 55.0)]
        report = weakness_report(results)
        assert [e.topic_id for e in report.entries] == ["A", "C", "B"]
        assert [e.level.label for e in report.entries] == ["low", "good", "high"]

    def test_percent_ties_break_on_topic_id(self):
        results = [result("z", 50.0), result("a", 50.0)]
        report = weakness_report(results)
        assert [e.topic_id for e in report.entries] == ["a", "z"]

    def test_erroneous_lists_imperfect_graded_items(self, fixture_bank):
        scores = [
            ItemScore(question_id="mc-01", score=0.0, weighted=0.0, graded=True),
            ItemScore(question_id="fb-01", score=0.5, weighted=0.5, graded=True),
            ItemScore(question_id="tf-01", score=1.0, weighted=1.0, graded=True),
            ItemScore(question_id="lk-01", score=None, weighted=None, graded=False),
        ]
        report = weakness_report([], scores, fixture_bank)
        assert [e.question_id for e in report.erroneous] == ["mc-01", "fb-01"]
        assert report.erroneous[0].concepts == tuple(sorted(fixture_bank.get("mc-01").topics))

    def test_erroneous_ordered_by_score_then_id(self, fixture_bank):
        scores = [
            ItemScore(question_id="tf-01", score=0.5, weighted=0.5, graded=True),
            ItemScore(question_id="mc-01", score=0.5, weighted=0.5, graded=True),
            ItemScore(question_id="fb-01", score=0.0, weighted=0.0, graded=True),
        ]
        report = weakness_report([], scores, fixture_bank)
        assert [e.question_id for e in report.erroneous] == ["fb-01", "mc-01", "tf-01"]


class TestSerialization:
    def test_round_trip(self):
        profile = LearnerProfile(learner_id="len", education_level=4)
        profile = update_profile(profile, record("s1", [result("t", 40.0)]))
        profile = update_profile(
            profile, record("s2", [result("t", 80.0), result("u", 75.0)])
        )
        doc = profile_to_document(profile)
        back = profile_from_document(doc)
        assert back == profile
        assert profile_to_document(back) == doc

    def test_document_uses_labels(self):
        profile = LearnerProfile(
            learner_id="len",
            education_level=2,
            knowledge={"t": KnowledgeLevel.HIGH},
        )
        doc = profile_to_document(profile)
        assert doc["knowledge"] == {"t": "high"}
        assert doc["education_level"] == 2
