"""Class-weighted, L2-regularised logistic regression."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LogisticConfig:
    l2_penalty: float = 1e-4
    max_iters: int = 5_000
    tolerance: float = 1e-6


@dataclass(frozen=True)
class LogisticModel:
    weights: np.ndarray
    intercept: float
    class_weights: tuple[float, float]
    converged: bool
    n_iter: int
    grad_norm: float

    def decision(self, X) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.weights + self.intercept

    def score(self, X) -> np.ndarray:
        return sigmoid(self.decision(X))


def sigmoid(z):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def balanced_class_weights(y) -> tuple[float, float]:
    """``n_total / (2 * n_class)`` for (negative, positive)."""
    y = np.asarray(y, dtype=bool)
    n = y.size
    n_pos = int(y.sum())
    n_neg = n - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("balanced weights need both classes present")
    return n / (2.0 * n_neg), n / (2.0 * n_pos)


def loss_and_grad(params, X, y, sample_weight, l2_penalty):
    """Mean weighted negative log-likelihood plus ``l2/2 * ||w||^2``.

    ``params`` is ``[w_1..w_d, b]``; the intercept is not penalised.
    """
    w, b = params[:-1], params[-1]
    z = X @ w + b
    n = X.shape[0]
    nll = np.logaddexp(0.0, z) - y * z
    loss = float(sample_weight @ nll) / n + 0.5 * l2_penalty * float(w @ w)
    r = sample_weight * (sigmoid(z) - y) / n
    grad = np.empty_like(params)
    grad[:-1] = X.T @ r + l2_penalty * w
    grad[-1] = r.sum()
    return loss, grad


def _hessian(params, X, sample_weight, l2_penalty):
    z = X @ params[:-1] + params[-1]
    p = sigmoid(z)
    h = sample_weight * p * (1.0 - p) / X.shape[0]
    Xa = np.hstack([X, np.ones((X.shape[0], 1))])
    H = (Xa * h[:, None]).T @ Xa
    H[:-1, :-1] += l2_penalty * np.eye(X.shape[1])
    return H


def fit_logistic(X, y, class_weights=(1.0, 1.0), config: LogisticConfig = LogisticConfig()):
    """Minimise the weighted penalised log-loss by damped Newton steps.

    Every accepted step satisfies an Armijo decrease condition, so the loss
    sequence is monotone.  Falls back to the gradient direction whenever the
    Newton system is singular or yields a non-descent direction.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(X)):
        raise ValueError("features contain non-finite values")
    w_neg, w_pos = class_weights
    if w_neg <= 0 or w_pos <= 0:
        raise ValueError("class weights must be positive")
    sw = np.where(y > 0.5, w_pos, w_neg)
    params = np.zeros(X.shape[1] + 1)
    loss, grad = loss_and_grad(params, X, y, sw, config.l2_penalty)
    converged = False
    it = 0
    for it in range(1, config.max_iters + 1):
        gnorm = float(np.linalg.norm(grad))
        if gnorm < config.tolerance:
            converged = True
            it -= 1
            break
        H = _hessian(params, X, sw, config.l2_penalty)
        try:
            direction = -np.linalg.solve(H, grad)
        except np.linalg.LinAlgError:
            direction = -grad
        slope = float(grad @ direction)
        if not np.isfinite(slope) or slope >= 0:
            direction = -grad
            slope = -gnorm * gnorm
        step = 1.0
        while True:
            cand = params + step * direction
            cand_loss, cand_grad = loss_and_grad(cand, X, y, sw, config.l2_penalty)
            if cand_loss <= loss + 1e-4 * step * slope or step < 1e-12:
                break
            step *= 0.5
        if cand_loss > loss:
            break
        params, loss, grad = cand, cand_loss, cand_grad
    gnorm = float(np.linalg.norm(grad))
    converged = converged or gnorm < config.tolerance
    if not converged:
        warnings.warn(f"logistic fit stopped after {it} iterations with |grad|={gnorm:.3g}",
                      RuntimeWarning, stacklevel=2)
    return LogisticModel(weights=params[:-1].copy(), intercept=float(params[-1]),
                         class_weights=(float(w_neg), float(w_pos)),
                         converged=converged, n_iter=it, grad_norm=gnorm)
