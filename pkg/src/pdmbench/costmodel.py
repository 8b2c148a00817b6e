"""Business cost schedule, confusion tallies and evaluation metrics.

All currency is integer USD so costs and savings are exact.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class CostSchedule:
    tp_cost: int = 5_000
    fp_cost: int = 500
    fn_cost: int = 25_000
    tn_cost: int = 0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if int(value) != value:
                raise ValueError(f"{name} must be whole USD, got {value!r}")
            if value < 0:
                raise ValueError(f"{name} must be >= 0, got {value!r}")
            object.__setattr__(self, name, int(value))


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value < 0:
                raise ValueError(f"{name} must be non-negative, got {value}")

    @property
    def positives(self) -> int:
        return self.tp + self.fn

    @property
    def negatives(self) -> int:
        return self.fp + self.tn


@dataclass(frozen=True)
class EvaluationMetrics:
    total_cost: int
    savings_usd: int
    savings_pct: float
    recall: float
    precision: float
    f1: float


def confusion(predicted: Sequence[bool], actual: Sequence[bool]) -> ConfusionCounts:
    p = np.asarray(predicted, dtype=bool)
    a = np.asarray(actual, dtype=bool)
    if p.shape != a.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {a.shape}")
    return ConfusionCounts(
        tp=int(np.count_nonzero(p & a)),
        fp=int(np.count_nonzero(p & ~a)),
        fn=int(np.count_nonzero(~p & a)),
        tn=int(np.count_nonzero(~p & ~a)),
    )


def total_cost(counts: ConfusionCounts, schedule: CostSchedule = CostSchedule()) -> int:
    return (counts.tp * schedule.tp_cost + counts.fp * schedule.fp_cost
            + counts.fn * schedule.fn_cost + counts.tn * schedule.tn_cost)


def baseline_cost(test, schedule: CostSchedule = CostSchedule()) -> int:
    """Reactive-maintenance cost: every actual failure is missed.

    ``test`` may be labeled records or a sequence of booleans.
    """
    n_pos = sum(bool(getattr(r, "label", r)) for r in test)
    return n_pos * schedule.fn_cost


def savings(total: int, baseline: int) -> tuple[int, float]:
    if baseline == 0:
        raise ZeroDivisionError("savings ratio is undefined for a zero baseline")
    diff = baseline - total
    return diff, diff / baseline


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def classification_metrics(counts: ConfusionCounts) -> tuple[float, float, float]:
    """(recall, precision, f1); a zero denominator yields 0."""
    recall = _ratio(counts.tp, counts.tp + counts.fn)
    precision = _ratio(counts.tp, counts.tp + counts.fp)
    f1 = _ratio(2 * counts.tp, 2 * counts.tp + counts.fp + counts.fn)
    return recall, precision, f1


def evaluate_counts(counts: ConfusionCounts, baseline: int,
                    schedule: CostSchedule = CostSchedule()) -> EvaluationMetrics:
    cost = total_cost(counts, schedule)
    saved, pct = savings(cost, baseline)
    recall, precision, f1 = classification_metrics(counts)
    return EvaluationMetrics(cost, saved, pct, recall, precision, f1)
