"""Mechanistic alarm rules tuned by random search."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .. import _kernels
from ..causal.features import causal_feature_matrix
from ..costmodel import CostSchedule
from ..data import MACHINE_TYPES

PARAM_NAMES = ("wear_low", "wear_high", "hdf_temp_diff_max", "hdf_rpm_max",
               "power_min", "power_max", "overstrain_max_L", "overstrain_max_M",
               "overstrain_max_H")


@dataclass(frozen=True)
class RuleModel:
    wear_low: float
    wear_high: float
    hdf_temp_diff_max: float
    hdf_rpm_max: float
    power_min: float
    power_max: float
    overstrain_max: dict  # machine type -> limit
    train_cost: int = 0
    candidates_evaluated: int = 0

    def __post_init__(self):
        if self.wear_low > self.wear_high:
            raise ValueError("wear_low must not exceed wear_high")
        if self.power_min > self.power_max:
            raise ValueError("power_min must not exceed power_max")

    @property
    def params(self) -> np.ndarray:
        return np.array([self.wear_low, self.wear_high, self.hdf_temp_diff_max,
                         self.hdf_rpm_max, self.power_min, self.power_max,
                         self.overstrain_max["L"], self.overstrain_max["M"],
                         self.overstrain_max["H"]])

    def predict(self, records) -> np.ndarray:
        return _kernels.rule_fire(self.params, *rule_inputs(records))

    def as_dict(self) -> dict:
        d = asdict(self)
        d["overstrain_max"] = {k: float(v) for k, v in self.overstrain_max.items()}
        return d


def rule_inputs(records):
    """(wear, temp_diff, rpm, power, overstrain, type_index) arrays."""
    recs = [getattr(r, "record", r) for r in records]
    derived = causal_feature_matrix(recs)
    wear = np.array([r.tool_wear for r in recs], dtype=float)
    rpm = np.array([r.rot_speed for r in recs], dtype=float)
    tidx = np.array([MACHINE_TYPES.index(r.machine_type) for r in recs], dtype=np.int64)
    return wear, derived[:, 0], rpm, derived[:, 1], derived[:, 2], tidx


def sample_candidates(inputs, budget: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draws from each parameter's observed training range."""
    wear, temp_diff, rpm, power, overstrain, _ = inputs

    def uni(x, size):
        return rng.uniform(float(x.min()), float(x.max()), size=size)

    cand = np.empty((budget, 9))
    cand[:, 0:2] = np.sort(uni(wear, (budget, 2)), axis=1)
    cand[:, 2] = uni(temp_diff, budget)
    cand[:, 3] = uni(rpm, budget)
    cand[:, 4:6] = np.sort(uni(power, (budget, 2)), axis=1)
    cand[:, 6:9] = uni(overstrain, (budget, 3))
    return cand


def fit_rule_model(train, schedule: CostSchedule = CostSchedule(), budget: int = 2000,
                   seed: int = 0, include=()) -> RuleModel:
    """Random search over rule thresholds minimising training cost.

    ``include`` holds extra RuleModels (or 9-vectors) evaluated ahead of the
    random draws.  Candidates with no true negative (alarm on every training
    machine) are discarded.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if not train:
        raise ValueError("rule search needs training data")
    inputs = rule_inputs(train)
    labels = np.array([r.label for r in train], dtype=bool)
    rng = np.random.Generator(np.random.PCG64(seed))
    cand = sample_candidates(inputs, budget, rng)
    if len(include):
        extra = np.array([getattr(c, "params", c) for c in include], dtype=float).reshape(-1, 9)
        cand = np.vstack([extra, cand])
    costs, tns = _kernels.rule_costs(cand, *inputs, labels, schedule.tp_cost,
                                     schedule.fp_cost, schedule.fn_cost, schedule.tn_cost)
    ok = tns >= 1
    if not ok.any():
        raise ValueError("every sampled rule alarms on all training machines")
    masked = np.where(ok, costs, np.iinfo(np.int64).max)
    best = int(np.argmin(masked))
    p = cand[best]
    return RuleModel(wear_low=float(p[0]), wear_high=float(p[1]),
                     hdf_temp_diff_max=float(p[2]), hdf_rpm_max=float(p[3]),
                     power_min=float(p[4]), power_max=float(p[5]),
                     overstrain_max={"L": float(p[6]), "M": float(p[7]), "H": float(p[8])},
                     train_cost=int(costs[best]), candidates_evaluated=int(cand.shape[0]))
