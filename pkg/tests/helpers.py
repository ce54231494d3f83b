"""Shared generators and independent oracles.

The oracles here deliberately avoid the package's own enums and traversal
code: topic chains are walked over plain parent dicts and comparisons use
literal rank tables, so oracle agreement is a real dual-route check rather
than the implementation testing itself.
"""
from __future__ import annotations

import random

from selfassess import Question, QuestionType, Stem, TopicNode, build_bank
from selfassess.types import Difficulty

DIFF_RANK = {"easy": 1, "medium": 2, "difficult": 3}
KNOW_RANK = {"low": 1, "good": 2, "high": 3}
KNOW_TO_DIFF = {"low": "easy", "good": "medium", "high": "difficult"}
RELATIONS = {
    "below": lambda a, b: a < b,
    "at_most": lambda a, b: a <= b,
    "match": lambda a, b: a == b,
    "at_least": lambda a, b: a >= b,
    "above": lambda a, b: a > b,
}


def tf_question(qid, topics, difficulty="easy", education=3, weight=1.0):
    """Minimal keyed question for structural tests."""
    return Question(
        id=qid,
        type=QuestionType.TRUE_FALSE,
        stem=Stem(text=f"statement {qid}"),
        body={},
        key={"value": True},
        difficulty=Difficulty.from_label(difficulty),
        education_level=education,
        topics=frozenset(topics),
        weight=weight,
    )


def likert_question(qid, topics, difficulty="easy", education=3):
    return Question(
        id=qid,
        type=QuestionType.LIKERT,
        stem=Stem(text=f"opinion {qid}"),
        body={"scale": 5},
        key=None,
        difficulty=Difficulty.from_label(difficulty),
        education_level=education,
        topics=frozenset(topics),
    )


# --- oracle-side topic algebra (plain dicts, no package types) -------------

def chain_to_root(parents: dict, topic: str) -> list[str]:
    out = [topic]
    while parents.get(topic) is not None:
        topic = parents[topic]
        out.append(topic)
    return out


def oracle_closure(parents: dict, tags_by_question: dict, topic: str) -> set[str]:
    """Question ids visible at `topic`: any tag whose chain passes through it."""
    return {
        qid
        for qid, tags in tags_by_question.items()
        if any(topic in chain_to_root(parents, t) for t in tags)
    }


def oracle_depth(parents: dict, topic: str) -> int:
    return len(chain_to_root(parents, topic)) - 1


def oracle_predicate_scan(
    questions: list[dict],
    parents: dict,
    requested: list[str],
    kind: str,
    relation: str | None = None,
    pivot: str | None = None,
    education: int | None = None,
    knowledge: dict | None = None,
    include_likert: bool = False,
) -> set[str]:
    """Brute-force reimplementation of the selection predicate over plain
    question dicts: {id, type, difficulty, education_level, topics}."""
    tags = {q["id"]: q["topics"] for q in questions}
    pool = set()
    for t in requested:
        pool |= oracle_closure(parents, tags, t)
    knowledge = knowledge or {}

    out = set()
    for q in questions:
        if q["id"] not in pool:
            continue
        if q["type"] == "likert" and not include_likert:
            continue
        if kind == "by_difficulty":
            ok = RELATIONS[relation](DIFF_RANK[q["difficulty"]], DIFF_RANK[pivot])
        elif kind == "by_education":
            ok = RELATIONS[relation](q["education_level"], education)
        elif kind == "by_knowledge":
            if pivot is not None:
                level = pivot
            else:
                admitting = [
                    t
                    for t in requested
                    if any(t in chain_to_root(parents, tag) for tag in q["topics"])
                ]
                admitting.sort(key=lambda t: (-oracle_depth(parents, t), t))
                level = knowledge.get(admitting[0], "good")
            ok = RELATIONS[relation](
                DIFF_RANK[q["difficulty"]], DIFF_RANK[KNOW_TO_DIFF[level]]
            )
        elif kind == "auto":
            ok = any(
                any(t in chain_to_root(parents, tag) for tag in q["topics"])
                and q["education_level"] == education
                and q["difficulty"] == KNOW_TO_DIFF[knowledge.get(t, "good")]
                for t in requested
            )
        else:
            raise AssertionError(f"oracle got unknown kind {kind}")
        if ok:
            out.add(q["id"])
    return out


# --- generated banks --------------------------------------------------------

def three_level_tree():
    """Root, three branches, six leaves: ids sort in hierarchy-friendly order."""
    parents = {
        "r": None,
        "r.a": "r",
        "r.b": "r",
        "r.c": "r",
        "r.a.x": "r.a",
        "r.a.y": "r.a",
        "r.b.x": "r.b",
        "r.b.y": "r.b",
        "r.c.x": "r.c",
        "r.c.y": "r.c",
    }
    nodes = [TopicNode(id=tid, name=tid, parent=p) for tid, p in parents.items()]
    return parents, nodes


def generated_bank(n_questions=200, seed=20240):
    """Bank of n true_false questions spread over 3 difficulties, 5 education
    ranks, and a 3-level tree, plus the plain-dict view the oracles read."""
    rng = random.Random(seed)
    parents, nodes = three_level_tree()
    taggable = [t for t in parents if parents[t] is not None]
    question_dicts = []
    questions = []
    difficulties = ["easy", "medium", "difficult"]
    for i in range(n_questions):
        difficulty = difficulties[i % 3]
        education = (i // 3) % 5 + 1
        tags = rng.sample(taggable, rng.choice([1, 1, 1, 2]))
        qid = f"q{i:03d}"
        question_dicts.append(
            {
                "id": qid,
                "type": "true_false",
                "difficulty": difficulty,
                "education_level": education,
                "topics": list(tags),
            }
        )
        questions.append(tf_question(qid, tags, difficulty, education))
    bank = build_bank(nodes, questions)
    return bank, parents, question_dicts


def random_forest(rng: random.Random):
    """A random forest as (nodes, parents); 1..25 nodes, parents only among
    earlier nodes, so it is acyclic by construction."""
    n = rng.randint(1, 25)
    parents = {}
    nodes = []
    for i in range(n):
        tid = f"t{i:02d}"
        parent = None
        if i > 0 and rng.random() < 0.8:
            parent = f"t{rng.randrange(i):02d}"
        parents[tid] = parent
        nodes.append(TopicNode(id=tid, name=tid, parent=parent))
    return nodes, parents


def random_tagged_bank(rng: random.Random):
    """Random forest plus 0..40 questions tagged at 1..3 random topics."""
    nodes, parents = random_forest(rng)
    ids = list(parents)
    questions = []
    tags_by_question = {}
    for i in range(rng.randint(0, 40)):
        qid = f"q{i:02d}"
        tags = rng.sample(ids, min(len(ids), rng.randint(1, 3)))
        tags_by_question[qid] = list(tags)
        questions.append(tf_question(qid, tags))
    bank = build_bank(nodes, questions)
    return bank, parents, tags_by_question


# --- payload builders (test-side, written from the scoring contract) --------

def correct_payload_for(q):
    """A payload the contract says must score exactly 1.0."""
    t = q.type.value
    if t == "multiple_choice":
        return {"option": q.key["option"]}
    if t == "multiple_response":
        return {"options": sorted(q.key["options"])}
    if t == "true_false":
        return {"value": q.key["value"]}
    if t == "fill_blanks":
        return {"blanks": {bid: accepted[0] for bid, accepted in q.key["blanks"].items()}}
    if t == "matching":
        return {"pairs": dict(q.key["pairs"])}
    if t == "sequence":
        return {"order": list(q.key["order"])}
    if t == "hotspot":
        region = q.key["region"]
        if region["shape"] == "rect":
            return {"x": region["x"] + region["w"] / 2, "y": region["y"] + region["h"] / 2}
        xs = [p[0] for p in region["points"]]
        ys = [p[1] for p in region["points"]]
        return {"x": sum(xs) / len(xs), "y": sum(ys) / len(ys)}
    if t == "drag_drop":
        return {"placements": dict(q.key["placements"])}
    if t == "select_lists":
        return {"choices": dict(q.key["choices"])}
    raise AssertionError(f"no correct payload for type {t}")


def wrong_payload_for(q):
    """A payload the contract says must score exactly 0.0."""
    t = q.type.value
    if t == "multiple_choice":
        others = [o["id"] for o in q.body["options"] if o["id"] != q.key["option"]]
        return {"option": others[0]}
    if t == "multiple_response":
        complement = sorted(set(o["id"] for o in q.body["options"]) - set(q.key["options"]))
        return {"options": complement}
    if t == "true_false":
        return {"value": not q.key["value"]}
    if t == "fill_blanks":
        blanks = {}
        for bid, accepted in q.key["blanks"].items():
            rejected = {a.strip().casefold() for a in accepted}
            text = "x"
            while text in rejected:
                text += "x"
            blanks[bid] = text
        return {"blanks": blanks}
    if t == "matching":
        lefts = sorted(q.key["pairs"])
        if len(lefts) == 1:
            return {"pairs": {}}
        rights = [q.key["pairs"][l] for l in lefts]
        rotated = rights[1:] + rights[:1]
        return {"pairs": dict(zip(lefts, rotated))}
    if t == "sequence":
        order = list(q.key["order"])
        return {"order": order[1:] + order[:1]}
    if t == "hotspot":
        region = q.key["region"]
        if region["shape"] == "rect":
            return {"x": region["x"] - 5, "y": region["y"] - 5}
        xs = [p[0] for p in region["points"]]
        ys = [p[1] for p in region["points"]]
        return {"x": min(xs) - 5, "y": min(ys) - 5}
    if t == "drag_drop":
        zones = [z["id"] for z in q.body["zones"]]
        if len(zones) == 1:
            return {"placements": {}}
        placements = {}
        for iid, zid in q.key["placements"].items():
            placements[iid] = next(z for z in zones if z != zid)
        return {"placements": placements}
    if t == "select_lists":
        choices = {}
        for s in q.body["selects"]:
            want = q.key["choices"][s["id"]]
            choices[s["id"]] = next(o["id"] for o in s["options"] if o["id"] != want)
        return {"choices": choices}
    raise AssertionError(f"no wrong payload for type {t}")


def random_payload_for(q, rng: random.Random):
    """A shape-valid payload with arbitrary content; score must land in [0, 1]."""
    t = q.type.value
    if t == "multiple_choice":
        return {"option": rng.choice([o["id"] for o in q.body["options"]])}
    if t == "multiple_response":
        ids = [o["id"] for o in q.body["options"]]
        return {"options": rng.sample(ids, rng.randint(0, len(ids)))}
    if t == "true_false":
        return {"value": rng.random() < 0.5}
    if t == "fill_blanks":
        blanks = {}
        for bid in q.body["blanks"]:
            if rng.random() < 0.5:
                continue
            if rng.random() < 0.4:
                text = rng.choice(q.key["blanks"][bid])
                text = f"  {text.upper()}  " if rng.random() < 0.5 else text
            else:
                text = "".join(rng.choice("abc xyz") for _ in range(rng.randint(0, 6)))
            blanks[bid] = text
        return {"blanks": blanks}
    if t == "matching":
        lefts = [o["id"] for o in q.body["left"]]
        rights = [o["id"] for o in q.body["right"]]
        return {
            "pairs": {l: rng.choice(rights) for l in lefts if rng.random() < 0.8}
        }
    if t == "sequence":
        order = [o["id"] for o in q.body["items"]]
        rng.shuffle(order)
        return {"order": order}
    if t == "hotspot":
        return {
            "x": rng.uniform(-q.body["width"], 2 * q.body["width"]),
            "y": rng.uniform(-q.body["height"], 2 * q.body["height"]),
        }
    if t == "drag_drop":
        items = [o["id"] for o in q.body["items"]]
        zones = [z["id"] for z in q.body["zones"]]
        return {
            "placements": {i: rng.choice(zones) for i in items if rng.random() < 0.8}
        }
    if t == "select_lists":
        choices = {}
        for s in q.body["selects"]:
            if rng.random() < 0.9:
                choices[s["id"]] = rng.choice([o["id"] for o in s["options"]])
        return {"choices": choices}
    if t == "likert":
        return {"value": rng.randint(1, q.body.get("scale", 5))}
    raise AssertionError(f"no random payload for type {t}")
