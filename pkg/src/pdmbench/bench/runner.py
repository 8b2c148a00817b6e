"""Multi-seed benchmark execution and report assembly."""

from __future__ import annotations

import logging
import traceback
from dataclasses import asdict, dataclass, field

import numpy as np

from .. import __version__
from ..causal import causal_insights
from ..costmodel import ConfusionCounts, CostSchedule, EvaluationMetrics
from ..data import SPLIT_RNG, LabeledRecord, SplitSpec, stratified_split
from .pipelines import (ALL_PIPELINES, BenchConfig, PipelineId, evaluate_pipeline, fit_pipeline,
                        generalization_gap)

log = logging.getLogger(__name__)

DEFAULT_SEEDS = (42, 43, 44, 45, 46)
REPORT_FORMAT_VERSION = 1

#: Per-seed quantities averaged into the per-pipeline summary.
AVERAGED_FIELDS = ("baseline", "total_cost", "savings_usd", "savings_pct", "recall", "precision",
                   "f1", "tp", "fp", "fn", "tn", "train_savings_pct", "test_savings_pct", "gap_pp")


@dataclass
class SeedResult:
    pipeline: str
    seed: int
    train_counts: ConfusionCounts | None = None
    test_counts: ConfusionCounts | None = None
    train_metrics: EvaluationMetrics | None = None
    test_metrics: EvaluationMetrics | None = None
    train_baseline: int | None = None
    test_baseline: int | None = None
    threshold: float | None = None
    gap_pp: float | None = None
    diagnostics: dict = field(default_factory=dict)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def flat(self) -> dict:
        """The scalar quantities that enter the seed averages."""
        t, m = self.test_counts, self.test_metrics
        return {
            "baseline": self.test_baseline, "total_cost": m.total_cost,
            "savings_usd": m.savings_usd, "savings_pct": m.savings_pct,
            "recall": m.recall, "precision": m.precision, "f1": m.f1,
            "tp": t.tp, "fp": t.fp, "fn": t.fn, "tn": t.tn,
            "train_savings_pct": self.train_metrics.savings_pct,
            "test_savings_pct": m.savings_pct, "gap_pp": self.gap_pp,
        }

    def to_dict(self) -> dict:
        out = {"pipeline": self.pipeline, "seed": self.seed, "error": self.error,
               "threshold": self.threshold, "gap_pp": self.gap_pp,
               "train_baseline": self.train_baseline, "test_baseline": self.test_baseline,
               "diagnostics": self.diagnostics}
        for name in ("train_counts", "test_counts", "train_metrics", "test_metrics"):
            v = getattr(self, name)
            out[name] = None if v is None else asdict(v)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "SeedResult":
        kw = dict(d)
        for name, typ in (("train_counts", ConfusionCounts), ("test_counts", ConfusionCounts),
                          ("train_metrics", EvaluationMetrics),
                          ("test_metrics", EvaluationMetrics)):
            kw[name] = None if d.get(name) is None else typ(**d[name])
        return cls(**kw)


@dataclass
class BenchmarkReport:
    results: list[SeedResult]
    pipelines: list[str]
    seeds: list[int]
    config: dict
    dataset: dict
    causal: list[dict]

    def cell(self, pipeline: str, seed: int) -> SeedResult:
        for r in self.results:
            if r.pipeline == pipeline and r.seed == seed:
                return r
        raise KeyError((pipeline, seed))

    def averages(self) -> dict[str, dict]:
        """Arithmetic means over the successful seeds of each pipeline."""
        out = {}
        for p in self.pipelines:
            rows = [r.flat() for r in self.results if r.pipeline == p and r.ok]
            entry = {"n_seeds": len(rows)}
            for k in AVERAGED_FIELDS:
                entry[k] = float(np.mean([row[k] for row in rows])) if rows else None
            out[p] = entry
        return out

    @property
    def failed_cells(self) -> list[tuple[str, int]]:
        return [(r.pipeline, r.seed) for r in self.results if not r.ok]

    def to_dict(self) -> dict:
        return {
            "format_version": REPORT_FORMAT_VERSION,
            "package_version": __version__,
            "pipelines": list(self.pipelines),
            "seeds": list(self.seeds),
            "config": self.config,
            "dataset": self.dataset,
            "causal_insights": self.causal,
            "results": [r.to_dict() for r in self.results],
            "averages": self.averages(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BenchmarkReport":
        return cls(results=[SeedResult.from_dict(r) for r in d["results"]],
                   pipelines=list(d["pipelines"]), seeds=list(d["seeds"]),
                   config=d["config"], dataset=d["dataset"], causal=d["causal_insights"])


def _run_cell(pid, seed, split, schedule, config) -> SeedResult:
    res = SeedResult(pipeline=pid, seed=seed)
    try:
        fitted = fit_pipeline(pid, split.train, seed=seed, schedule=schedule, config=config)
        res.train_baseline = sum(r.label for r in split.train) * schedule.fn_cost
        res.test_baseline = sum(r.label for r in split.test) * schedule.fn_cost
        res.train_counts, res.train_metrics = evaluate_pipeline(fitted, split.train, schedule,
                                                                res.train_baseline)
        res.test_counts, res.test_metrics = evaluate_pipeline(fitted, split.test, schedule,
                                                              res.test_baseline)
        res.threshold = fitted.threshold
        res.gap_pp = generalization_gap(100.0 * res.train_metrics.savings_pct,
                                        100.0 * res.test_metrics.savings_pct)
        res.diagnostics = fitted.diagnostics
    except Exception as exc:  # one bad cell must not sink the run
        log.warning("pipeline %s seed %s failed: %s", pid, seed, exc)
        res.error = "".join(traceback.format_exception_only(type(exc), exc)).strip()
        res.train_counts = res.test_counts = res.train_metrics = res.test_metrics = None
    return res


def run_benchmark(dataset: list[LabeledRecord], pipelines=ALL_PIPELINES, seeds=DEFAULT_SEEDS,
                  schedule: CostSchedule = CostSchedule(), config: BenchConfig | None = None,
                  dataset_info: dict | None = None) -> BenchmarkReport:
    """Split, fit and evaluate every (pipeline, seed) cell.

    Cells are executed seed by seed (one split per seed) and then merged in
    (pipeline, seed) order as given, so output order never depends on
    execution order.
    """
    config = BenchConfig() if config is None else config
    pipelines = [PipelineId(p).value for p in pipelines]
    seeds = [int(s) for s in seeds]
    if not pipelines or not seeds:
        raise ValueError("need at least one pipeline and one seed")
    results = []
    for seed in seeds:
        split = stratified_split(dataset, SplitSpec(config.test_fraction, seed))
        log.info("seed %d: %d train / %d test", seed, len(split.train), len(split.test))
        for pid in pipelines:
            log.info("fitting %s (seed %d)", pid, seed)
            results.append(_run_cell(pid, seed, split, schedule, config))
    results.sort(key=lambda r: (pipelines.index(r.pipeline), seeds.index(r.seed)))
    info = {"n_records": len(dataset), "n_positive": int(sum(r.label for r in dataset)),
            "split_rng": SPLIT_RNG}
    info.update(dataset_info or {})
    echo = {"cost_schedule": asdict(schedule), "seeds": seeds, "pipelines": pipelines}
    echo.update(config.echo())
    return BenchmarkReport(results=results, pipelines=pipelines, seeds=seeds, config=echo,
                           dataset=info, causal=causal_insights(dataset, config.dag))
