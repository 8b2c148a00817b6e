"""Time each hot kernel under the numba and numpy backends.

    python benchmarks/bench_kernels.py [--repeat 5] [--end-to-end]

Inputs are sized like one benchmark cell on the 10k-row dataset (8,000
training rows, a 99-point threshold grid, 2,000 rule candidates).  Numba
functions are called once before timing so compilation is excluded.
``--end-to-end`` also times a one-seed default run in a subprocess per
backend, selected with ``PDMBENCH_BACKEND``.
"""

import argparse
import os
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from pdmbench import _kernels
from pdmbench.bench.rules import rule_inputs, sample_candidates
from pdmbench.data import build_labeled, serialize_dataset
from pdmbench.simulate import simulate_records


def make_cases(n=8_000, seed=0):
    rng = np.random.default_rng(seed)
    order = np.argsort(rng.uniform(0, 250, n))
    xs = np.sort(rng.uniform(0, 250, n))
    ys = (rng.uniform(size=n) < 0.03).astype(float)[order]
    scores = rng.uniform(size=n)
    labels = rng.uniform(size=n) < 0.03
    grid = np.arange(1, 100) / 100
    train = build_labeled(simulate_records(n, seed))
    inputs = rule_inputs(train)
    cand = sample_candidates(inputs, 2_000, np.random.default_rng(seed))
    rule_labels = np.array([r.label for r in train])
    X = rng.normal(size=(n, 8))
    theta = rng.normal(size=9)
    yl = (rng.uniform(size=n) < 0.03).astype(float)
    costs = (5_000, 500, 25_000, 0)
    return {
        "best_split (gini)": lambda k: k.best_split(xs, ys, 20, _kernels.GINI),
        "best_split (sse)": lambda k: k.best_split(xs, ys - 0.03, 20, _kernels.SSE),
        "threshold_costs": lambda k: k.threshold_costs(scores, labels, grid, *costs),
        "rule_costs x2000": lambda k: k.rule_costs(cand, *inputs, rule_labels, *costs),
        "logistic_loglik": lambda k: k.logistic_loglik(X, yl, theta),
    }


def time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernels(repeat):
    cases = make_cases()
    backends = sorted(_kernels.BACKENDS)
    for impl in _kernels.BACKENDS.values():  # warm up / compile
        for fn in cases.values():
            fn(impl)
    print(f"{'kernel':<20}" + "".join(f"{b + ' (ms)':>14}" for b in backends) + f"{'speedup':>10}")
    for name, fn in cases.items():
        t = {b: time_call(lambda: fn(_kernels.BACKENDS[b]), repeat) for b in backends}
        ratio = t["numpy"] / t["numba"] if "numba" in t else float("nan")
        print(f"{name:<20}" + "".join(f"{1e3 * t[b]:>14.3f}" for b in backends) + f"{ratio:>9.1f}x")


def bench_end_to_end():
    with tempfile.TemporaryDirectory() as tmp:
        data = Path(tmp) / "sim.csv"
        data.write_text(serialize_dataset(simulate_records(10_000, 0)))
        for backend in sorted(_kernels.BACKENDS):
            env = dict(os.environ, PDMBENCH_BACKEND=backend)
            start = time.perf_counter()
            subprocess.run([sys.executable, "-m", "pdmbench", "run", "--dataset", str(data),
                            "--seeds", "42", "--format", "json", "--out", str(Path(tmp) / backend)],
                           env=env, check=True, capture_output=True)
            print(f"end-to-end one seed, {backend}: {time.perf_counter() - start:.1f} s "
                  "(includes interpreter start and numba compilation)")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args()
    if "numba" not in _kernels.BACKENDS:
        print("numba is not installed; only the numpy backend is timed")
    bench_kernels(args.repeat)
    if args.end_to_end:
        bench_end_to_end()


if __name__ == "__main__":
    main()
