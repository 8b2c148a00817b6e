"""Synthetic CNC records following the published AI4I 2020 generation rules.

The public dataset is itself simulated.  Its documentation describes:

* product quality L/M/H in proportions 50/30/20 percent;
* air temperature as a random walk normalised to sd 2 K around 300 K;
* process temperature as air temperature + 10 K plus a random walk of sd 1 K;
* rotational speed derived from a nominal power with Gaussian noise,
  torque ~ N(40, 10) Nm clipped at zero;
* tool wear growing by 5/3/2 minutes per process for H/M/L products;
* TWF: the tool is replaced or fails at a random wear time in 200-240 min;
* HDF: temperature differential below 8.6 K and speed below 1380 rpm;
* PWF: power below 3500 W or above 9000 W;
* OSF: tool wear x torque above 11,000 / 12,000 / 13,000 min Nm for L / M / H;
* RNF: a 0.1 percent failure chance regardless of the process.

This module is a stand-in for exercising the harness when the real file is
not at hand; it is not a reproduction of the published rows.
"""

from __future__ import annotations

import math

import numpy as np

from .data import MachineRecord

WEAR_STEP = {"L": 2, "M": 3, "H": 5}
OVERSTRAIN_LIMIT = {"L": 11_000.0, "M": 12_000.0, "H": 13_000.0}


def _random_walk(rng, n, sd):
    walk = np.cumsum(rng.standard_normal(n))
    # remove drift so the walk wanders around its centre
    walk -= np.linspace(walk[0], walk[-1], n)
    walk = (walk - walk.mean()) / (walk.std() or 1.0)
    return walk * sd


def simulate_records(n: int = 10_000, seed: int = 0, twf_fail_prob: float = 51 / 120,
                     rnf_prob: float = 0.001) -> list[MachineRecord]:
    rng = np.random.Generator(np.random.PCG64(seed))
    types = rng.choice(np.array(["L", "M", "H"]), size=n, p=[0.5, 0.3, 0.2])
    air = np.round(300.0 + _random_walk(rng, n, 2.0), 1)
    process = np.round(air + 10.0 + _random_walk(rng, n, 1.0), 1)
    torque = np.round(np.clip(rng.normal(40.0, 10.0, n), 3.0, None), 1)
    # speed falls with torque around a nominal operating point
    rpm = np.round(1538.0 * (40.0 / torque) ** 0.45 * np.exp(rng.normal(0.0, 0.05, n)))
    rpm = np.minimum(rpm, 2900.0)
    records = []
    wear = 0
    replace_at = rng.uniform(200.0, 240.0)
    for i in range(n):
        t = str(types[i])
        twf = False
        if wear >= replace_at:
            twf = bool(rng.uniform() < twf_fail_prob)
        w = wear
        diff = process[i] - air[i]
        power = torque[i] * rpm[i] * 2.0 * math.pi / 60.0
        hdf = diff < 8.6 and rpm[i] < 1380
        pwf = power < 3500.0 or power > 9000.0
        osf = w * torque[i] > OVERSTRAIN_LIMIT[t]
        rnf = bool(rng.uniform() < rnf_prob)
        failure = twf or hdf or pwf or osf or rnf
        records.append(MachineRecord(
            udi=i + 1, product_id=f"{t}{10000 + i + 1}", machine_type=t,
            air_temp=float(air[i]), process_temp=float(process[i]),
            rot_speed=float(rpm[i]), torque=float(torque[i]), tool_wear=float(w),
            machine_failure=bool(failure), twf=twf, hdf=bool(hdf), pwf=bool(pwf),
            osf=bool(osf), rnf=rnf))
        if w >= replace_at:
            wear = 0
            replace_at = rng.uniform(200.0, 240.0)
        else:
            wear += WEAR_STEP[t]
    return records
