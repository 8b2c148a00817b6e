from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Standardizer:
    mean: np.ndarray
    scale: np.ndarray

    def transform(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return (X - self.mean) / self.scale


def fit_standardizer(X) -> Standardizer:
    """Per-column mean and population standard deviation.

    Constant columns get a divisor of 1 so they map to zeros.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("cannot fit a standardizer on an empty matrix")
    mean = X.mean(axis=0)
    sd = X.std(axis=0)
    # a constant column can still get a tiny nonzero sd from rounding in the mean
    constant = X.max(axis=0) == X.min(axis=0)
    scale = np.where(constant | (sd == 0), 1.0, sd)
    return Standardizer(mean=mean, scale=scale)


def transform(standardizer: Standardizer, X) -> np.ndarray:
    return standardizer.transform(X)
