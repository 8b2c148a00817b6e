"""Cost-sensitive benchmark of correlation-based and causal predictive-maintenance models."""

__version__ = "0.1.0"
