from __future__ import annotations

import numpy as np

from .. import _kernels
from ..costmodel import CostSchedule


def threshold_grid(start: float = 0.01, stop: float = 0.99, step: float = 0.01) -> np.ndarray:
    """Inclusive grid built from integer multiples of ``step`` (0.11 is 11/100)."""
    k0 = int(round(start / step))
    k1 = int(round(stop / step))
    denom = round(1.0 / step)
    if abs(denom * step - 1.0) < 1e-12:
        return np.arange(k0, k1 + 1) / denom
    return np.arange(k0, k1 + 1) * step


DEFAULT_GRID = threshold_grid()


def grid_costs(scores, labels, schedule: CostSchedule = CostSchedule(), grid=DEFAULT_GRID) -> np.ndarray:
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels, dtype=bool)
    if scores.size == 0:
        raise ValueError("threshold search needs at least one score")
    if scores.shape != labels.shape:
        raise ValueError(f"length mismatch: {scores.shape} vs {labels.shape}")
    return _kernels.threshold_costs(scores, labels, np.asarray(grid, dtype=float),
                                    schedule.tp_cost, schedule.fp_cost,
                                    schedule.fn_cost, schedule.tn_cost)


def threshold_search(scores, labels, schedule: CostSchedule = CostSchedule(),
                     grid=DEFAULT_GRID) -> tuple[float, int]:
    """(threshold, cost) minimising the cost of ``score >= t``; ties go to the smallest t."""
    costs = grid_costs(scores, labels, schedule, grid)
    i = int(np.argmin(costs))
    return float(np.asarray(grid)[i]), int(costs[i])


def optimize_threshold(scores, labels, schedule: CostSchedule = CostSchedule(),
                       grid=DEFAULT_GRID) -> float:
    return threshold_search(scores, labels, schedule, grid)[0]
