import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdmbench import _kernels

numba_only = pytest.mark.skipif("numba" not in _kernels.BACKENDS, reason="numba not installed")
NP = _kernels.BACKENDS["numpy"]


def _nb():
    return _kernels.BACKENDS["numba"]


@numba_only
@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 15), st.floats(-3, 3)), min_size=1, max_size=60),
       st.integers(1, 6), st.sampled_from([_kernels.GINI, _kernels.SSE]), st.booleans())
def test_best_split_agrees(pairs, min_leaf, criterion, binary):
    pairs = sorted(pairs, key=lambda p: p[0])
    xs = np.array([p[0] for p in pairs], dtype=float)
    ys = np.array([float(p[1] > 0) if binary else p[1] for p in pairs])
    a = NP.best_split(xs, ys, min_leaf, criterion)
    b = _nb().best_split(xs, ys, min_leaf, criterion)
    assert a[2] == b[2]
    if a[2]:
        assert a[1] == b[1]
        assert np.isclose(a[0], b[0], rtol=1e-12, atol=1e-9)


@numba_only
@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1), st.booleans()), min_size=1, max_size=100),
       st.tuples(*(st.integers(0, 30_000) for _ in range(4))))
def test_threshold_costs_agree(pairs, costs):
    # shared implementation today; kept so a future compiled kernel is checked
    s = np.array([p[0] for p in pairs])
    y = np.array([p[1] for p in pairs])
    grid = np.arange(1, 100) / 100
    assert np.array_equal(NP.threshold_costs(s, y, grid, *costs),
                          _nb().threshold_costs(s, y, grid, *costs))


def _rule_data(rng, n):
    return (rng.uniform(0, 250, n), rng.uniform(5, 14, n), rng.uniform(1100, 2900, n),
            rng.uniform(1000, 11000, n), rng.uniform(0, 16000, n), rng.integers(0, 3, n))


@numba_only
@pytest.mark.parametrize("seed", range(5))
def test_rule_kernels_agree(seed):
    rng = np.random.default_rng(seed)
    data = _rule_data(rng, 400)
    labels = rng.uniform(size=400) < 0.1
    cand = np.column_stack([np.sort(rng.uniform(0, 250, (50, 2)), axis=1),
                            rng.uniform(5, 14, 50), rng.uniform(1100, 2900, 50),
                            np.sort(rng.uniform(1000, 11000, (50, 2)), axis=1),
                            rng.uniform(0, 16000, (50, 3))])
    for c in cand[:5]:
        assert np.array_equal(NP.rule_fire(c, *data), _nb().rule_fire(c, *data))
    ca, ta = NP.rule_costs(cand, *data, labels, 5000, 500, 25000, 0)
    cb, tb = _nb().rule_costs(cand, *data, labels, 5000, 500, 25000, 0)
    assert np.array_equal(ca, cb) and np.array_equal(ta, tb)
    # costs are the tallies of the fired alarms
    fire = NP.rule_fire(cand[0], *data)
    tp = np.sum(fire & labels)
    fp = np.sum(fire & ~labels)
    fn = np.sum(~fire & labels)
    assert ca[0] == tp * 5000 + fp * 500 + fn * 25000
    assert ta[0] == np.sum(~fire & ~labels)


@numba_only
@pytest.mark.parametrize("seed", range(5))
def test_loglik_agrees(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(100, 4))
    y = (rng.uniform(size=100) < 0.3).astype(float)
    theta = rng.normal(scale=3, size=5)
    a = NP.logistic_loglik(X, y, theta)
    b = _nb().logistic_loglik(X, y, theta)
    z = X @ theta[:-1] + theta[-1]
    ref = float(np.sum(y * z - np.logaddexp(0, z)))
    assert np.isclose(a, ref, rtol=1e-12) and np.isclose(b, ref, rtol=1e-12)


def _backend_in_subprocess(value):
    env = dict(os.environ, PDMBENCH_BACKEND=value)
    return subprocess.run([sys.executable, "-c", "from pdmbench import _kernels; print(_kernels.BACKEND)"],
                          env=env, capture_output=True, text=True)


def test_env_flag_selects_numpy():
    out = _backend_in_subprocess("numpy")
    assert out.returncode == 0 and out.stdout.strip() == "numpy"


def test_env_flag_rejects_unknown():
    out = _backend_in_subprocess("fortran")
    assert out.returncode != 0 and "PDMBENCH_BACKEND" in out.stderr


def test_wrappers_coerce_dtypes():
    costs = _kernels.threshold_costs([0.2, 0.8], [0, 1], [0.5], 5000, 500, 25000, 0)
    assert costs.dtype == np.int64 and costs.tolist() == [5000]
