"""Gradient-boosted regression trees for binary log-loss."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .logistic import sigmoid
from .tree import TreeConstraints, TreeModel, fit_regression_tree


@dataclass(frozen=True)
class GbmConfig:
    n_trees: int = 100
    learning_rate: float = 0.1
    max_depth: int = 3
    min_samples_leaf: int = 20
    min_samples_split: int = 2


@dataclass(frozen=True)
class GbmModel:
    init_log_odds: float
    trees: tuple[TreeModel, ...]
    step_scales: tuple[float, ...]
    learning_rate: float
    config: GbmConfig
    loss_trace: tuple[float, ...] = field(default=())

    def decision(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        F = np.full(X.shape[0], self.init_log_odds)
        for tree, s in zip(self.trees, self.step_scales):
            F += self.learning_rate * s * tree.predict(X)
        return F

    def score(self, X) -> np.ndarray:
        return sigmoid(self.decision(X))


def log_loss(y, F) -> float:
    """Mean binary log-loss of raw scores ``F``."""
    return float(np.mean(np.logaddexp(0.0, F) - y * F))


def fit_gbm(X, y, config: GbmConfig = GbmConfig()) -> GbmModel:
    """Stagewise boosting of squared-error trees on log-loss residuals.

    Leaves hold one Newton step ``sum(r) / sum(p(1-p))``.  If a shrunken
    round would raise the training loss, its step is halved until it does
    not, so ``loss_trace`` is non-increasing.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    p = y.mean() if y.size else np.nan
    if not 0.0 < p < 1.0:
        raise ValueError("gradient boosting needs both classes in y")
    f0 = float(np.log(p / (1.0 - p)))
    F = np.full(y.shape[0], f0)
    constraints = TreeConstraints(max_depth=config.max_depth,
                                  min_samples_split=config.min_samples_split,
                                  min_samples_leaf=config.min_samples_leaf)
    trees, scales = [], []
    trace = [log_loss(y, F)]
    eta = config.learning_rate
    for _ in range(config.n_trees):
        prob = sigmoid(F)
        resid = y - prob
        hess = prob * (1.0 - prob)

        def newton(idx, resid=resid, hess=hess):
            h = hess[idx].sum()
            return float(resid[idx].sum() / h) if h > 1e-12 else 0.0

        tree = fit_regression_tree(X, resid, constraints, leaf_value=newton)
        update = tree.predict(X)
        scale = 1.0
        loss = log_loss(y, F + eta * update)
        while loss > trace[-1] and scale > 1e-6:
            scale *= 0.5
            loss = log_loss(y, F + eta * scale * update)
        if loss > trace[-1]:
            scale, loss = 0.0, trace[-1]
        F = F + eta * scale * update
        trees.append(tree)
        scales.append(scale)
        trace.append(loss)
    return GbmModel(init_log_odds=f0, trees=tuple(trees), step_scales=tuple(scales),
                    learning_rate=eta, config=config, loss_trace=tuple(trace))
