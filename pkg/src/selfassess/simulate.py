"""Scripted cohorts through the real pipeline: select, answer, grade, infer.

Each simulated student answers every item correctly with a per-difficulty
probability, so cohort contrasts are shaped by policy rather than fabricated
scores. Everything derives from one seed: student i uses
random.Random(f"{seed}/{i}"), which keeps reports byte-identical across runs
and lets independent students be simulated in any order.

Criteria that need a learner are run under a fixed synthetic context:
education rank 3 and no recorded knowledge, so profile-driven rules fall to
the documented good-level default.
"""
from __future__ import annotations

import json
import random
import statistics
from dataclasses import dataclass
from typing import Mapping

from .analytics import engagement_counters
from .bank import Question, QuestionBank
from .errors import OutOfRange, ValidationError
from .grading import aggregate_topics, grade_session, overall_percent
from .profiles import LearnerProfile
from .selection import LearnerContext, SelectionCriteria, criteria_to_document, select
from .types import Difficulty, QuestionType

SIMULATED_EDUCATION_RANK = 3
MAX_RUNS_PER_STUDENT = 10


@dataclass(frozen=True)
class SimulationPolicy:
    correct_probability: Mapping[Difficulty, float]
    rerun_probability: float = 0.0


def policy_from_document(doc) -> SimulationPolicy:
    """Accept a scalar probability or per-band {easy, medium, difficult}."""
    if not isinstance(doc, dict):
        raise ValidationError(["policy must be an object"])
    raw = doc.get("correct_probability")
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        bands = {d: float(raw) for d in Difficulty}
    elif isinstance(raw, dict):
        try:
            bands = {Difficulty.from_label(label): float(p) for label, p in raw.items()}
        except Exception:
            raise ValidationError(["correct_probability bands must be easy|medium|difficult"])
        for d in Difficulty:
            bands.setdefault(d, 0.5)
    else:
        raise ValidationError(["correct_probability must be a number or a per-band object"])
    for d, p in bands.items():
        if not 0.0 <= p <= 1.0:
            raise OutOfRange(f"correct_probability[{d.label}] must be in [0, 1], got {p}")
    rerun = doc.get("rerun_probability", 0.0)
    if isinstance(rerun, bool) or not isinstance(rerun, (int, float)) or not 0.0 <= rerun <= 1.0:
        raise OutOfRange(f"rerun_probability must be in [0, 1], got {rerun!r}")
    return SimulationPolicy(correct_probability=bands, rerun_probability=float(rerun))


def correct_payload(question: Question) -> dict:
    """An answer scoring exactly 1.0, built from the key."""
    q, key = question, question.key
    if q.type is QuestionType.MULTIPLE_CHOICE:
        return {"option": key["option"]}
    if q.type is QuestionType.MULTIPLE_RESPONSE:
        return {"options": list(key["options"])}
    if q.type is QuestionType.TRUE_FALSE:
        return {"value": key["value"]}
    if q.type is QuestionType.FILL_BLANKS:
        return {"blanks": {bid: accepted[0] for bid, accepted in key["blanks"].items()}}
    if q.type is QuestionType.MATCHING:
        return {"pairs": dict(key["pairs"])}
    if q.type is QuestionType.SEQUENCE:
        return {"order": list(key["order"])}
    if q.type is QuestionType.HOTSPOT:
        region = key["region"]
        if region["shape"] == "rect":
            return {"x": region["x"], "y": region["y"]}
        # any vertex lies on the boundary, which the region includes
        vx, vy = region["points"][0]
        return {"x": vx, "y": vy}
    if q.type is QuestionType.DRAG_DROP:
        return {"placements": dict(key["placements"])}
    if q.type is QuestionType.SELECT_LISTS:
        return {"choices": dict(key["choices"])}
    raise ValueError(f"no keyed payload for type {q.type.value}")


def _rotate(values: list, mapping: Mapping) -> dict:
    """Remap every entry to the next distinct value; all-wrong when possible."""
    if len(values) < 2:
        return dict(mapping)
    shifted = {v: values[(i + 1) % len(values)] for i, v in enumerate(values)}
    return {k: shifted[v] for k, v in mapping.items()}


def wrong_payload(question: Question, rng: random.Random) -> dict:
    """An answer scoring 0.0 wherever the type's shape permits one."""
    q, key = question, question.key
    if q.type is QuestionType.MULTIPLE_CHOICE:
        others = [o["id"] for o in q.body["options"] if o["id"] != key["option"]]
        return {"option": rng.choice(others)}
    if q.type is QuestionType.MULTIPLE_RESPONSE:
        others = [o["id"] for o in q.body["options"] if o["id"] not in set(key["options"])]
        return {"options": others}
    if q.type is QuestionType.TRUE_FALSE:
        return {"value": not key["value"]}
    if q.type is QuestionType.FILL_BLANKS:
        blanks = {}
        for bid, accepted in key["blanks"].items():
            rejected = {a.strip().casefold() for a in accepted}
            text = "x"
            while text in rejected:
                text += "x"
            blanks[bid] = text
        return {"blanks": blanks}
    if q.type is QuestionType.MATCHING:
        rights = [o["id"] for o in q.body["right"]]
        return {"pairs": _rotate(rights, key["pairs"])}
    if q.type is QuestionType.SEQUENCE:
        order = list(key["order"])
        return {"order": order[1:] + order[:1]}
    if q.type is QuestionType.HOTSPOT:
        region = key["region"]
        if region["shape"] == "rect":
            return {"x": region["x"] - 1, "y": region["y"] - 1}
        xs = [p[0] for p in region["points"]]
        ys = [p[1] for p in region["points"]]
        return {"x": min(xs) - 1, "y": min(ys) - 1}
    if q.type is QuestionType.DRAG_DROP:
        zones = [z["id"] for z in q.body["zones"]]
        return {"placements": _rotate(zones, key["placements"])}
    if q.type is QuestionType.SELECT_LISTS:
        choices = {}
        for sel in q.body["selects"]:
            options = [o["id"] for o in sel["options"]]
            keyed = key["choices"][sel["id"]]
            i = options.index(keyed)
            choices[sel["id"]] = options[(i + 1) % len(options)]
        return {"choices": choices}
    raise ValueError(f"no keyed payload for type {q.type.value}")


def _answer_run(questions, policy: SimulationPolicy, rng: random.Random) -> dict:
    answers = {}
    for q in questions:
        if q.type is QuestionType.LIKERT:
            answers[q.id] = {"value": rng.randint(1, q.body.get("scale", 5))}
        elif rng.random() < policy.correct_probability[q.difficulty]:
            answers[q.id] = correct_payload(q)
        else:
            answers[q.id] = wrong_payload(q, rng)
    return answers


def simulate(
    bank: QuestionBank,
    criteria: SelectionCriteria,
    students: int,
    policy: SimulationPolicy,
    seed: int = 0,
) -> dict:
    """Run the cohort and return the report document."""
    if students < 1:
        raise OutOfRange(f"students must be positive, got {students}")

    context = LearnerContext(
        profile=LearnerProfile(learner_id="simulated", education_level=SIMULATED_EDUCATION_RANK)
    )
    selected = select(bank, criteria, context)
    questions = selected.questions
    if not questions:
        raise ValidationError(
            [f"criteria select no questions: {selected.diagnostic or 'empty selection'}"]
        )
    question_ids = [q.id for q in questions]

    scores = []
    level_counts: dict[str, dict[str, int]] = {}
    events = []
    for i in range(students):
        student_id = f"student-{i + 1:03d}"
        rng = random.Random(f"{seed}/{i}")
        runs = 1
        while runs < MAX_RUNS_PER_STUDENT and rng.random() < policy.rerun_probability:
            runs += 1
        for run in range(runs):
            answers = _answer_run(questions, policy, rng)
            events.append((student_id, f"run-{run}"))
        item_scores = grade_session(bank, question_ids, answers)
        percent = overall_percent(bank, item_scores)
        scores.append(percent if percent is not None else 0.0)
        for result in aggregate_topics(bank, item_scores, criteria.topics):
            per_topic = level_counts.setdefault(
                result.topic_id, {"low": 0, "good": 0, "high": 0}
            )
            per_topic[result.inferred_level.label] += 1

    engagement = engagement_counters(events)
    return {
        "students": students,
        "seed": seed,
        "criteria": criteria_to_document(criteria),
        "question_count": len(question_ids),
        "scores": scores,
        "mean_score": statistics.fmean(scores),
        "topic_levels": {tid: level_counts[tid] for tid in sorted(level_counts)},
        "engagement": {
            "unique_takers": engagement.unique_takers,
            "total_runs": engagement.total_runs,
            "reruns": engagement.reruns,
        },
    }


def report_to_json(report: dict) -> str:
    return json.dumps(report, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def scores_to_csv(report: dict) -> str:
    return "\n".join(repr(float(s)) for s in report["scores"]) + "\n"
