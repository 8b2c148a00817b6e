import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdmbench.bench import (ALL_PIPELINES, DEFAULT_THRESHOLD, BenchConfig, RuleModel,
                            evaluate_pipeline, fit_pipeline, fit_rule_model,
                            generalization_gap, grid_costs, optimize_threshold, run_benchmark,
                            threshold_grid, threshold_search)
from pdmbench import _kernels
from pdmbench.bench.rules import rule_inputs, sample_candidates
from pdmbench.costmodel import ConfusionCounts, CostSchedule
from pdmbench.data import LabeledRecord, SplitSpec, build_labeled, stratified_split
from pdmbench.learners import GbmConfig, McmcConfig

from conftest import make_record
from oracles import exhaustive_min_cost

FAST = BenchConfig(gbm=GbmConfig(n_trees=15), mcmc=McmcConfig(draws=200, tune=200),
                   rule_budget=300)


# --- thresholds

def test_grid_is_exact_hundredths():
    g = threshold_grid()
    assert len(g) == 99 and g[0] == 0.01 and g[-1] == 0.99 and g[10] == 0.11


def test_separable_pair_picks_smallest_zero_cost_t():
    t, cost = threshold_search([0.9, 0.1], [True, False])
    assert t == 0.11 and cost == 5_000


def test_all_negative_labels():
    scores = [0.05, 0.5, 0.97]
    t = optimize_threshold(scores, [False] * 3)
    assert t == 0.98
    costs = grid_costs(scores, [False] * 3)
    assert costs.min() == 0 and np.argmin(costs) == 97


def test_threshold_input_errors():
    with pytest.raises(ValueError):
        optimize_threshold([], [])
    with pytest.raises(ValueError):
        optimize_threshold([0.1], [True, False])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1), st.booleans()), min_size=1, max_size=80),
       st.tuples(*(st.integers(0, 30_000) for _ in range(4))))
def test_threshold_matches_oracle(pairs, costs):
    scores = [p[0] for p in pairs]
    labels = [p[1] for p in pairs]
    schedule = CostSchedule(*costs)
    grid = threshold_grid()
    best, per_t = exhaustive_min_cost(scores, labels, schedule, grid)
    t, cost = threshold_search(scores, labels, schedule)
    assert cost == best
    assert t == grid[per_t.index(best)]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1), st.booleans()), min_size=1, max_size=80),
       st.integers(1, 5_000))
def test_free_false_alarms_never_raise_threshold(pairs, fp_cost):
    scores = [p[0] for p in pairs]
    labels = [p[1] for p in pairs]
    t_paid = optimize_threshold(scores, labels, CostSchedule(fp_cost=fp_cost))
    t_free = optimize_threshold(scores, labels, CostSchedule(fp_cost=0))
    assert t_free <= t_paid


# --- rules

def _rule_world(n=1500, seed=0):
    rng = np.random.default_rng(seed)
    recs = []
    for i in range(n):
        t = "LMH"[rng.integers(3)]
        wear = float(rng.integers(0, 250))
        torque = float(np.round(rng.uniform(10, 70), 1))
        rpm = float(np.round(rng.uniform(1200, 2800)))
        air = float(np.round(rng.uniform(296, 304), 1))
        proc = float(np.round(air + rng.uniform(7, 12), 1))
        recs.append(make_record(i + 1, t, air, proc, rpm, torque, wear))
    return recs


# planted mechanism: wear band 200-240 or overstrain above 9000
PLANTED = RuleModel(200, 240, 0.0, 0.0, 0.0, 1e9, {"L": 9000.0, "M": 9000.0, "H": 9000.0})


def test_rule_model_validation():
    with pytest.raises(ValueError):
        RuleModel(10, 5, 0, 0, 0, 1, {"L": 0, "M": 0, "H": 0})
    with pytest.raises(ValueError):
        RuleModel(0, 5, 0, 0, 9, 1, {"L": 0, "M": 0, "H": 0})


def test_rule_search_recovers_planted_rule():
    recs = _rule_world()
    fire = PLANTED.predict(recs)
    train = [LabeledRecord(r, bool(f)) for r, f in zip(recs, fire)]
    labels = np.array([r.label for r in train])
    assert 0 < labels.sum() < len(labels)
    model = fit_rule_model(train, budget=500, seed=1, include=[PLANTED])
    pred = model.predict(train)
    assert pred[labels].all()  # recall 1.0 on train
    assert model.train_cost == labels.sum() * 5_000
    assert model.candidates_evaluated == 501


def test_rule_search_argmin_property():
    recs = _rule_world(seed=3)
    train = [LabeledRecord(r, bool(f)) for r, f in zip(recs, PLANTED.predict(recs))]
    best = fit_rule_model(train, budget=800, seed=5)
    inputs = rule_inputs(train)
    cand = sample_candidates(inputs, 800, np.random.Generator(np.random.PCG64(5)))
    labels = np.array([r.label for r in train])
    costs, tns = _kernels.rule_costs(cand, *inputs, labels, 5_000, 500, 25_000, 0)
    allowed = costs[tns >= 1]
    assert best.train_cost == allowed.min()
    if tns[0] >= 1:
        assert best.train_cost <= costs[0]


def test_rule_search_excludes_always_alarm(small_labeled):
    model = fit_rule_model(small_labeled, budget=500, seed=0)
    assert not model.predict(small_labeled).all()
    with pytest.raises(ValueError):
        fit_rule_model(small_labeled, budget=0)


def test_rule_inputs_columns():
    rec = make_record(torque=56.0, wear=215, machine_type="H")
    wear, diff, rpm, power, os_, tidx = rule_inputs([rec])
    assert os_[0] == 12_040 and tidx[0] == 2 and wear[0] == 215


# --- pipelines

@pytest.fixture(scope="module")
def split(small_labeled):
    return stratified_split(small_labeled, SplitSpec(0.2, 42))


def test_l0_and_l1_policies(split):
    l0 = fit_pipeline("L0", split.train)
    assert not l0.predict(split.test).any()
    counts, m = evaluate_pipeline(l0, split.test)
    pos = sum(r.label for r in split.test)
    assert counts == ConfusionCounts(0, 0, pos, len(split.test) - pos)
    assert m.total_cost == pos * 25_000 and m.savings_pct == 0.0
    assert (m.recall, m.precision, m.f1) == (0.0, 0.0, 0.0)
    l1 = fit_pipeline("L1", split.train, config=FAST)
    assert l1.threshold == DEFAULT_THRESHOLD == 0.5


@pytest.mark.parametrize("pid", ["L2", "L3", "L4", "L5"])
def test_cost_pipelines_learn_grid_thresholds(pid, split):
    p = fit_pipeline(pid, split.train, seed=42, config=FAST)
    assert 0.01 <= p.threshold <= 0.99
    s = p.score(split.test)
    assert np.all((s >= 0) & (s <= 1)) and np.all(np.isfinite(s))
    counts, _ = evaluate_pipeline(p, split.test)
    pos = sum(r.label for r in split.test)
    assert counts.tp + counts.fn == pos and counts.fp + counts.tn == len(split.test) - pos


def test_l5_diagnostics(split):
    p = fit_pipeline("L5", split.train, config=FAST)
    trace = p.diagnostics["loss_trace"]
    assert len(trace) == 16 and all(b <= a for a, b in zip(trace, trace[1:]))
    assert [r["treatment"] for r in p.diagnostics["causal_insights"]] == \
        ["tool_wear", "torque", "rot_speed"]


def test_perfect_scorer_evaluation(split):
    from pdmbench.bench import FittedPipeline
    p = FittedPipeline("L2", threshold=0.5,
                       scorer=lambda recs: np.array([float(r.label) for r in recs]))
    counts, m = evaluate_pipeline(p, split.test)
    assert counts.fp == counts.fn == 0
    assert m.savings_pct == pytest.approx(1 - 5_000 / 25_000)


def test_single_class_training_rejected():
    train = build_labeled([make_record(i) for i in range(1, 30)])
    for pid in ("L1", "L3", "L5"):
        with pytest.raises(ValueError, match="both classes"):
            fit_pipeline(pid, train)
    assert not fit_pipeline("L0", train).predict(train).any()


def test_generalization_gap():
    assert generalization_gap(72.8, 70.2) == pytest.approx(2.6)
    assert generalization_gap(55.0, 55.0) == 0.0
    assert round(generalization_gap(56.9, 55.0), 1) == 1.9
    with pytest.raises(ValueError):
        generalization_gap(float("nan"), 1.0)


# --- runner

@pytest.fixture(scope="module")
def small_report(small_labeled):
    return run_benchmark(small_labeled, ALL_PIPELINES, seeds=(42, 43), config=FAST)


def test_report_shape_and_order(small_report):
    assert [(r.pipeline, r.seed) for r in small_report.results] == \
        [(p, s) for p in ALL_PIPELINES for s in (42, 43)]
    assert not small_report.failed_cells
    assert small_report.config["cost_schedule"] == {"tp_cost": 5000, "fp_cost": 500,
                                                    "fn_cost": 25000, "tn_cost": 0}
    assert len(small_report.config["dag_sha256"]) == 64
    assert small_report.dataset["split_rng"] == "numpy.random.PCG64"


def test_averages_are_means_of_cells(small_report):
    avg = small_report.averages()
    for p in ALL_PIPELINES:
        cells = [small_report.cell(p, s).flat() for s in (42, 43)]
        for k, v in avg[p].items():
            if k != "n_seeds":
                assert v == np.mean([c[k] for c in cells])
    assert avg["L0"]["savings_pct"] == 0.0 and avg["L0"]["total_cost"] == avg["L0"]["baseline"]


def test_single_seed_average_equals_cell(small_labeled):
    rep = run_benchmark(small_labeled, ["L0", "L2"], seeds=[7], config=FAST)
    cell = rep.cell("L2", 7).flat()
    assert all(rep.averages()["L2"][k] == cell[k] for k in cell)


def test_failed_cell_is_recorded(small_labeled, monkeypatch):
    import pdmbench.bench.runner as runner

    real = runner.fit_pipeline

    def flaky(pid, *a, **kw):
        if pid == "L3":
            raise RuntimeError("boom")
        return real(pid, *a, **kw)

    monkeypatch.setattr(runner, "fit_pipeline", flaky)
    rep = run_benchmark(small_labeled, ["L0", "L3"], seeds=[42], config=FAST)
    assert rep.failed_cells == [("L3", 42)]
    assert "boom" in rep.cell("L3", 42).error
    assert rep.averages()["L3"]["n_seeds"] == 0 and rep.averages()["L3"]["f1"] is None
    assert rep.cell("L0", 42).ok


def test_report_roundtrip(small_report):
    from pdmbench.bench import BenchmarkReport
    again = BenchmarkReport.from_dict(small_report.to_dict())
    assert again.averages() == small_report.averages()
