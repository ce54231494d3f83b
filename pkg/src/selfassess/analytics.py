"""Evaluation instruments: SUS scoring, two-sample t-tests, engagement counts.

The t-distribution survival function is computed in-tree via the regularized
incomplete beta function (modified Lentz continued fraction), accurate to
well under 1e-9 over the ranges these tests produce, so the package carries
no numerical dependency.
"""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

from .errors import EmptyInput, InsufficientData, OutOfRange, ValidationError

SUS_ITEM_COUNT = 10


def sus_score(response: Sequence[int]) -> float:
    """Standard SUS rule: odd items score (v - 1), even items (5 - v),
    the sum scaled by 2.5 onto 0..100."""
    if len(response) != SUS_ITEM_COUNT:
        raise OutOfRange(f"a SUS response has {SUS_ITEM_COUNT} items, got {len(response)}")
    total = 0
    for position, value in enumerate(response, start=1):
        if isinstance(value, bool) or not isinstance(value, int) or not 1 <= value <= 5:
            raise OutOfRange(f"SUS item {position} must be an integer in 1..5, got {value!r}")
        total += value - 1 if position % 2 else 5 - value
    return total * 2.5


def sus_mean(responses: Sequence[Sequence[int]]) -> float:
    if not responses:
        raise EmptyInput("no SUS responses")
    return statistics.fmean(sus_score(r) for r in responses)


@dataclass(frozen=True)
class TTestResult:
    t_statistic: float
    degrees_of_freedom: float
    p_value: float
    variant: str


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """Modified Lentz evaluation of the incomplete-beta continued fraction."""
    tiny = 1e-300
    eps = 1e-15
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 400):
        m2 = 2 * m
        # even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        # odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(f"incomplete beta failed to converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise OutOfRange("beta parameters must be positive")
    if not 0.0 <= x <= 1.0:
        raise OutOfRange(f"x must be in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    # pick the representation whose continued fraction converges fast
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def student_t_two_tailed_p(t: float, df: float) -> float:
    """P(|T| >= |t|) for T ~ Student's t with df degrees of freedom."""
    if df <= 0:
        raise OutOfRange(f"degrees of freedom must be positive, got {df}")
    if math.isinf(t):
        return 0.0
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def _clean_sample(values: Sequence[float], name: str) -> list[float]:
    if len(values) < 2:
        raise InsufficientData(f"sample {name} needs at least 2 values, got {len(values)}")
    cleaned = [float(v) for v in values]
    if any(not math.isfinite(v) for v in cleaned):
        raise OutOfRange(f"sample {name} contains a non-finite value")
    return cleaned


def t_test_two_sample(
    a: Sequence[float],
    b: Sequence[float],
    variant: str = "pooled",
) -> TTestResult:
    """Two-tailed two-sample t-test.

    pooled assumes equal variances (df = n_a + n_b - 2); welch does not and
    uses the Welch-Satterthwaite df. Two constant samples are a degenerate
    but defined case: equal means give t = 0, p = 1; unequal means give an
    infinite statistic and p = 0.
    """
    if variant not in ("pooled", "welch"):
        raise ValidationError([f"variant must be pooled or welch, got {variant!r}"])
    xs = _clean_sample(a, "a")
    ys = _clean_sample(b, "b")
    na, nb = len(xs), len(ys)
    mean_a, mean_b = statistics.fmean(xs), statistics.fmean(ys)
    var_a, var_b = statistics.variance(xs), statistics.variance(ys)

    if var_a == 0.0 and var_b == 0.0:
        df = float(na + nb - 2)
        if mean_a == mean_b:
            return TTestResult(0.0, df, 1.0, variant)
        t = math.inf if mean_a > mean_b else -math.inf
        return TTestResult(t, df, 0.0, variant)

    if variant == "pooled":
        df = float(na + nb - 2)
        pooled_var = ((na - 1) * var_a + (nb - 1) * var_b) / df
        se = math.sqrt(pooled_var * (1.0 / na + 1.0 / nb))
    else:
        qa, qb = var_a / na, var_b / nb
        df = (qa + qb) ** 2 / (qa * qa / (na - 1) + qb * qb / (nb - 1))
        se = math.sqrt(qa + qb)

    t = (mean_a - mean_b) / se
    return TTestResult(t, df, student_t_two_tailed_p(t, df), variant)


@dataclass(frozen=True)
class EngagementCounters:
    unique_takers: int
    total_runs: int
    reruns: int


def engagement_counters(events: Iterable[Tuple[str, object]]) -> EngagementCounters:
    """Count run events (taker id, timestamp); reruns = total - unique."""
    takers = set()
    total = 0
    for taker, _timestamp in events:
        takers.add(taker)
        total += 1
    return EngagementCounters(
        unique_takers=len(takers),
        total_runs=total,
        reruns=total - len(takers),
    )
