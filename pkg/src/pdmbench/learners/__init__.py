"""From-scratch learners sharing a ``score(X) -> probability`` contract."""

from .gbm import GbmConfig, GbmModel, fit_gbm, log_loss
from .logistic import (LogisticConfig, LogisticModel, balanced_class_weights,
                       fit_logistic, loss_and_grad, sigmoid)
from .posterior import (RHAT_LIMIT, McmcConfig, PosteriorSamples, posterior_score,
                        sample_posterior_logistic, split_rhat)
from .standardize import Standardizer, fit_standardizer, transform
from .tree import TreeConstraints, TreeModel, fit_regression_tree, fit_tree

__all__ = [
    "GbmConfig", "GbmModel", "fit_gbm", "log_loss",
    "LogisticConfig", "LogisticModel", "balanced_class_weights", "fit_logistic",
    "loss_and_grad", "sigmoid",
    "RHAT_LIMIT", "McmcConfig", "PosteriorSamples", "posterior_score",
    "sample_posterior_logistic", "split_rhat",
    "Standardizer", "fit_standardizer", "transform",
    "TreeConstraints", "TreeModel", "fit_regression_tree", "fit_tree",
]
