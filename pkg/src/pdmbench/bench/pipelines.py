"""The seven benchmark pipelines, L0 through L6."""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Callable

import numpy as np

from ..causal import Dag, build_default_dag, causal_feature_matrix, causal_insights
from ..costmodel import ConfusionCounts, CostSchedule, EvaluationMetrics, confusion, evaluate_counts
from ..data import feature_matrix, label_vector
from ..learners import (GbmConfig, LogisticConfig, McmcConfig, TreeConstraints,
                        balanced_class_weights, fit_gbm, fit_logistic, fit_standardizer,
                        fit_tree, posterior_score, sample_posterior_logistic)
from .rules import RuleModel, fit_rule_model
from .thresholds import threshold_grid, threshold_search


class PipelineId(str, Enum):
    L0 = "L0"
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    L4 = "L4"
    L5 = "L5"
    L6 = "L6"


PIPELINE_NAMES = {
    "L0": "No-Skill",
    "L1": "Balanced LogReg",
    "L2": "Cost-Aware LogReg",
    "L3": "Cost-Aware Tree",
    "L4": "Bayesian LogReg",
    "L5": "Causal",
    "L6": "Rule-Based Causal",
}

ALL_PIPELINES = tuple(p.value for p in PipelineId)
DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class BenchConfig:
    logistic: LogisticConfig = LogisticConfig()
    tree: TreeConstraints = TreeConstraints()
    gbm: GbmConfig = GbmConfig()
    mcmc: McmcConfig = McmcConfig()
    prior_sd: float = 10.0
    rule_budget: int = 2000
    test_fraction: float = 0.20
    grid_start: float = 0.01
    grid_stop: float = 0.99
    grid_step: float = 0.01
    dag: Dag = field(default_factory=build_default_dag)

    @property
    def grid(self) -> np.ndarray:
        return threshold_grid(self.grid_start, self.grid_stop, self.grid_step)

    def echo(self) -> dict:
        return {
            "logistic": asdict(self.logistic),
            "tree": asdict(self.tree),
            "gbm": asdict(self.gbm),
            "mcmc": asdict(self.mcmc),
            "prior_sd": self.prior_sd,
            "rule_budget": self.rule_budget,
            "test_fraction": self.test_fraction,
            "threshold_grid": {"start": self.grid_start, "stop": self.grid_stop,
                               "step": self.grid_step},
            "dag_sha256": self.dag.digest(),
            "dag_edges": self.dag.to_edge_list().splitlines(),
        }


@dataclass
class FittedPipeline:
    pipeline_id: str
    threshold: float | None
    scorer: Callable[[Any], np.ndarray] | None = None
    policy: Callable[[Any], np.ndarray] | None = None
    model: Any = None
    diagnostics: dict = field(default_factory=dict)

    def score(self, records) -> np.ndarray:
        if self.scorer is None:
            raise TypeError(f"pipeline {self.pipeline_id} has no probability scorer")
        return self.scorer(records)

    def predict(self, records) -> np.ndarray:
        if self.policy is not None:
            return np.asarray(self.policy(records), dtype=bool)
        return self.score(records) >= self.threshold


def _sub_seed(seed: int, pipeline_id: str) -> int:
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, ord(pipeline_id[1])])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _l5_features(records) -> np.ndarray:
    return np.hstack([feature_matrix(records), causal_feature_matrix(records)])


def fit_pipeline(pipeline_id, train, seed: int = 42, schedule: CostSchedule = CostSchedule(),
                 config: BenchConfig | None = None) -> FittedPipeline:
    """Fit one pipeline on training records; thresholds come from training data only."""
    config = BenchConfig() if config is None else config
    pid = PipelineId(pipeline_id).value
    if pid == "L0":
        return FittedPipeline(pid, threshold=None,
                              policy=lambda recs: np.zeros(len(recs), dtype=bool))
    if not train:
        raise ValueError("training set is empty")
    y = label_vector(train)
    if y.all() or not y.any():
        raise ValueError(f"{pid} needs both classes in the training data")
    grid = config.grid
    diag: dict = {}
    caught: list = []

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if pid in ("L1", "L2", "L4"):
            std = fit_standardizer(feature_matrix(train))
            Xs = std.transform(feature_matrix(train))
            if pid == "L4":
                post = sample_posterior_logistic(Xs, y, prior_sd=config.prior_sd,
                                                 config=config.mcmc, seed=_sub_seed(seed, pid))
                model = post

                def scorer(recs, std=std, post=post):
                    return posterior_score(post, std.transform(feature_matrix(recs)))

                diag.update(kernel=post.kernel, rhat_max=float(post.rhat.max()),
                            converged=post.converged,
                            acceptance=[float(a) for a in post.acceptance],
                            n_draws=int(post.draws.shape[0]))
            else:
                cw = balanced_class_weights(y)
                model = fit_logistic(Xs, y, cw, config.logistic)

                def scorer(recs, std=std, model=model):
                    return model.score(std.transform(feature_matrix(recs)))

                diag.update(class_weights=list(cw), converged=model.converged,
                            n_iter=model.n_iter, grad_norm=model.grad_norm)
        elif pid == "L3":
            model = fit_tree(feature_matrix(train), y, config.tree)

            def scorer(recs, model=model):
                return model.predict(feature_matrix(recs))

            diag.update(depth=model.max_depth, n_leaves=model.n_leaves)
        elif pid == "L5":
            model = fit_gbm(_l5_features(train), y, config.gbm)

            def scorer(recs, model=model):
                return model.score(_l5_features(recs))

            diag.update(loss_trace=list(model.loss_trace), n_trees=len(model.trees),
                        causal_insights=causal_insights(train, config.dag))
        elif pid == "L6":
            rules = fit_rule_model(train, schedule, config.rule_budget, _sub_seed(seed, pid))
            diag.update(rules=rules.as_dict())
            fitted = FittedPipeline(pid, threshold=None, policy=rules.predict, model=rules,
                                    diagnostics=diag)
        else:  # pragma: no cover
            raise AssertionError(pid)

    if caught:
        diag["warnings"] = sorted({str(w.message) for w in caught})
    if pid == "L6":
        return fitted

    if pid == "L1":
        threshold = DEFAULT_THRESHOLD
    else:
        threshold, train_cost = threshold_search(scorer(train), y, schedule, grid)
        diag["threshold_train_cost"] = train_cost
    diag["threshold"] = threshold
    return FittedPipeline(pid, threshold=threshold, scorer=scorer, model=model, diagnostics=diag)


def evaluate_pipeline(pipeline: FittedPipeline, data, schedule: CostSchedule = CostSchedule(),
                      baseline: int | None = None) -> tuple[ConfusionCounts, EvaluationMetrics]:
    y = label_vector(data)
    if baseline is None:
        baseline = int(y.sum()) * schedule.fn_cost
    counts = confusion(pipeline.predict(data), y)
    return counts, evaluate_counts(counts, baseline, schedule)


def generalization_gap(train_savings_pct: float, test_savings_pct: float) -> float:
    """Train minus test savings, in percentage points when inputs are percentages."""
    if not (np.isfinite(train_savings_pct) and np.isfinite(test_savings_pct)):
        raise ValueError("savings percentages must be finite")
    return float(train_savings_pct - test_savings_pct)
