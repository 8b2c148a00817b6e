from .pipelines import (ALL_PIPELINES, DEFAULT_THRESHOLD, PIPELINE_NAMES, BenchConfig, FittedPipeline, PipelineId,
                        evaluate_pipeline, fit_pipeline, generalization_gap)
from .rules import RuleModel, fit_rule_model
from .runner import (DEFAULT_SEEDS, REPORT_FORMAT_VERSION, BenchmarkReport, SeedResult,
                     run_benchmark)
from .thresholds import DEFAULT_GRID, grid_costs, optimize_threshold, threshold_grid, threshold_search

__all__ = [
    "ALL_PIPELINES", "DEFAULT_THRESHOLD", "PIPELINE_NAMES", "BenchConfig", "FittedPipeline", "PipelineId",
    "evaluate_pipeline", "fit_pipeline", "generalization_gap",
    "RuleModel", "fit_rule_model",
    "DEFAULT_SEEDS", "REPORT_FORMAT_VERSION", "BenchmarkReport", "SeedResult", "run_benchmark",
    "DEFAULT_GRID", "grid_costs", "optimize_threshold", "threshold_grid", "threshold_search",
]
