"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The backend is chosen once at import time from ``PDMBENCH_BACKEND``
(``numba`` or ``numpy``).  When unset, numba is used if it imports.
Both backends live side by side in :data:`BACKENDS` so tests and the
benchmark script can compare them directly.
"""

import os

import numpy as np

from . import _numpy

GINI = _numpy.GINI
SSE = _numpy.SSE

BACKENDS = {"numpy": _numpy}

try:
    from . import _numba
except ImportError:  # numba is optional
    _numba = None
else:
    BACKENDS["numba"] = _numba


def _select():
    requested = os.environ.get("PDMBENCH_BACKEND", "").strip().lower()
    if requested:
        if requested not in ("numba", "numpy"):
            raise ValueError(f"PDMBENCH_BACKEND must be 'numba' or 'numpy', got {requested!r}")
        if requested not in BACKENDS:
            raise ImportError("PDMBENCH_BACKEND=numba but numba is not importable")
        return requested
    return "numba" if "numba" in BACKENDS else "numpy"


BACKEND = _select()
_impl = BACKENDS[BACKEND]


def best_split(xs, ys, min_leaf, criterion):
    return _impl.best_split(np.ascontiguousarray(xs, dtype=np.float64),
                            np.ascontiguousarray(ys, dtype=np.float64),
                            int(min_leaf), int(criterion))


def threshold_costs(scores, labels, grid, tp_cost, fp_cost, fn_cost, tn_cost):
    return _impl.threshold_costs(
        np.ascontiguousarray(scores, dtype=np.float64),
        np.ascontiguousarray(labels, dtype=np.bool_),
        np.ascontiguousarray(grid, dtype=np.float64),
        int(tp_cost), int(fp_cost), int(fn_cost), int(tn_cost))


def rule_fire(params, wear, temp_diff, rpm, power, overstrain, type_idx):
    f = np.ascontiguousarray
    return _impl.rule_fire(f(params, dtype=np.float64), f(wear, dtype=np.float64),
                           f(temp_diff, dtype=np.float64), f(rpm, dtype=np.float64),
                           f(power, dtype=np.float64), f(overstrain, dtype=np.float64),
                           f(type_idx, dtype=np.int64))


def rule_costs(candidates, wear, temp_diff, rpm, power, overstrain, type_idx,
               labels, tp_cost, fp_cost, fn_cost, tn_cost):
    f = np.ascontiguousarray
    return _impl.rule_costs(
        f(candidates, dtype=np.float64), f(wear, dtype=np.float64),
        f(temp_diff, dtype=np.float64), f(rpm, dtype=np.float64),
        f(power, dtype=np.float64), f(overstrain, dtype=np.float64),
        f(type_idx, dtype=np.int64), f(labels, dtype=np.bool_),
        int(tp_cost), int(fp_cost), int(fn_cost), int(tn_cost))


def logistic_loglik(X, y, theta):
    return float(_impl.logistic_loglik(np.ascontiguousarray(X, dtype=np.float64),
                                       np.ascontiguousarray(y, dtype=np.float64),
                                       np.ascontiguousarray(theta, dtype=np.float64)))
