"""Physically derived stress quantities."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

RPM_TO_RAD_S = 2.0 * math.pi / 60.0
CAUSAL_FEATURE_NAMES = ("temp_diff", "power", "overstrain")


@dataclass(frozen=True)
class CausalFeatures:
    temp_diff: float   # K, process minus air
    power: float       # W, torque x angular velocity
    overstrain: float  # min * Nm, tool wear x torque


def derive_causal_features(record) -> CausalFeatures:
    return CausalFeatures(
        temp_diff=record.process_temp - record.air_temp,
        power=record.torque * record.rot_speed * RPM_TO_RAD_S,
        overstrain=record.tool_wear * record.torque,
    )


def causal_feature_matrix(records) -> np.ndarray:
    """Stack of (temp_diff, power, overstrain) rows for records or labeled records."""
    out = np.empty((len(records), 3))
    for i, r in enumerate(records):
        rec = getattr(r, "record", r)
        f = derive_causal_features(rec)
        out[i] = (f.temp_diff, f.power, f.overstrain)
    return out
