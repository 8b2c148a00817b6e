"""Metropolis-Hastings sampling of a Bayesian logistic regression posterior.

Every weight and the intercept get an independent Normal(0, prior_sd) prior.
Two proposal kernels are available:

``independence``
    Multivariate Student-t centred on the posterior mode with the Laplace
    covariance.  For this model the posterior is close to Gaussian, so
    acceptance is high and successive draws are nearly independent.
``random_walk``
    Gaussian random walk preconditioned by the Laplace covariance; the step
    size is adapted per chain during tuning towards ``target_accept``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .. import _kernels
from .logistic import sigmoid

RHAT_LIMIT = 1.05


@dataclass(frozen=True)
class McmcConfig:
    draws: int = 500
    tune: int = 300
    chains: int = 2
    kernel: str = "independence"
    proposal_df: float = 5.0
    target_accept: float = 0.35


@dataclass(frozen=True)
class PosteriorSamples:
    draws: np.ndarray          # (chains * draws, d + 1); last column is the intercept
    chain: np.ndarray          # chain index of every row
    rhat: np.ndarray           # split R-hat per parameter
    acceptance: tuple[float, ...]
    mode: np.ndarray
    kernel: str
    prior_sd: float

    @property
    def converged(self) -> bool:
        return bool(np.all(self.rhat < RHAT_LIMIT))

    @property
    def weights(self) -> np.ndarray:
        return self.draws[:, :-1]

    @property
    def intercepts(self) -> np.ndarray:
        return self.draws[:, -1]

    def score(self, X) -> np.ndarray:
        return posterior_score(self, X)


def log_posterior(theta, X, y, prior_sd) -> float:
    lp = -0.5 * float(theta @ theta) / prior_sd ** 2
    if X.shape[0]:
        lp += _kernels.logistic_loglik(X, y, theta)
    return lp


def _mode_and_cov(X, y, prior_sd, max_iter=100):
    """Newton iterations for the posterior mode; returns (mode, inverse Hessian)."""
    n, d = X.shape
    Xa = np.hstack([X, np.ones((n, 1))])
    theta = np.zeros(d + 1)
    prec = np.eye(d + 1) / prior_sd ** 2
    for _ in range(max_iter):
        p = sigmoid(Xa @ theta)
        grad = Xa.T @ (y - p) - prec @ theta
        H = (Xa * (p * (1 - p))[:, None]).T @ Xa + prec
        step = np.linalg.solve(H, grad)
        cur = log_posterior(theta, X, y, prior_sd)
        t = 1.0
        while log_posterior(theta + t * step, X, y, prior_sd) < cur and t > 1e-10:
            t *= 0.5
        theta = theta + t * step
        if np.max(np.abs(t * step)) < 1e-10:
            break
    p = sigmoid(Xa @ theta)
    H = (Xa * (p * (1 - p))[:, None]).T @ Xa + prec
    cov = np.linalg.inv(H)
    return theta, 0.5 * (cov + cov.T)


def split_rhat(chains: np.ndarray) -> np.ndarray:
    """Split R-hat for an array shaped (n_chains, n_draws, n_params)."""
    m, n, k = chains.shape
    half = n // 2
    if half < 2:
        raise ValueError("split R-hat needs at least 4 draws per chain")
    seqs = np.concatenate([chains[:, :half], chains[:, n - half:]], axis=0)
    means = seqs.mean(axis=1)
    W = seqs.var(axis=1, ddof=1).mean(axis=0)
    B = half * means.var(axis=0, ddof=1)
    var_plus = (half - 1) / half * W + B / half
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.sqrt(var_plus / W)
    return np.where(W > 0, r, 1.0)


def _t_logpdf_kernel(delta, prec, df):
    d = delta.shape[0]
    q = float(delta @ prec @ delta)
    return -0.5 * (df + d) * np.log1p(q / df)


def _run_chain(X, y, prior_sd, mode, cov, chol, prec, config, rng):
    dim = mode.shape[0]
    df = config.proposal_df

    def draw_t():
        z = chol @ rng.standard_normal(dim)
        return mode + z * np.sqrt(df / rng.chisquare(df))

    theta = draw_t()
    lp = log_posterior(theta, X, y, prior_sd)
    lq = _t_logpdf_kernel(theta - mode, prec, df)
    step = 2.38 / np.sqrt(dim)
    total = config.tune + config.draws
    out = np.empty((config.draws, dim))
    accepted = 0
    for i in range(total):
        if config.kernel == "independence":
            prop = draw_t()
            lq_prop = _t_logpdf_kernel(prop - mode, prec, df)
            lp_prop = log_posterior(prop, X, y, prior_sd)
            log_ratio = (lp_prop - lp) + (lq - lq_prop)
        else:
            prop = theta + step * (chol @ rng.standard_normal(dim))
            lp_prop = log_posterior(prop, X, y, prior_sd)
            lq_prop = 0.0
            log_ratio = lp_prop - lp
        accept = np.log(rng.uniform()) < log_ratio
        if accept:
            theta, lp, lq = prop, lp_prop, lq_prop
        if i < config.tune:
            if config.kernel == "random_walk":
                # Robbins-Monro on log step size
                rate = 1.0 / np.sqrt(i + 1.0)
                step *= np.exp(rate * ((1.0 if accept else 0.0) - config.target_accept))
        else:
            out[i - config.tune] = theta
            accepted += bool(accept)
    return out, accepted / max(config.draws, 1)


def sample_posterior_logistic(X, y, prior_sd: float = 10.0,
                              config: McmcConfig = McmcConfig(), seed: int = 0) -> PosteriorSamples:
    """Draw ``chains * draws`` posterior samples after ``tune`` discarded steps."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be 2-D")
    if config.chains < 2:
        raise ValueError("at least 2 chains are required for R-hat")
    if config.kernel not in ("independence", "random_walk"):
        raise ValueError(f"unknown kernel {config.kernel!r}")
    mode, cov = _mode_and_cov(X, y, prior_sd)
    chol = np.linalg.cholesky(cov)
    prec = np.linalg.inv(cov)
    streams = np.random.SeedSequence(seed).spawn(config.chains)
    chains, accept = [], []
    for ss in streams:
        draws, acc = _run_chain(X, y, prior_sd, mode, cov, chol, prec, config,
                                np.random.Generator(np.random.PCG64(ss)))
        chains.append(draws)
        accept.append(acc)
    stacked = np.stack(chains)
    rhat = split_rhat(stacked)
    result = PosteriorSamples(
        draws=stacked.reshape(-1, stacked.shape[-1]),
        chain=np.repeat(np.arange(config.chains), config.draws),
        rhat=rhat, acceptance=tuple(accept), mode=mode,
        kernel=config.kernel, prior_sd=prior_sd,
    )
    if not result.converged:
        warnings.warn(f"posterior sampler not converged: max R-hat {rhat.max():.3f}",
                      RuntimeWarning, stacklevel=2)
    return result


def posterior_score(samples: PosteriorSamples, X) -> np.ndarray:
    """Posterior-predictive failure probability: mean of per-draw sigmoids."""
    X = np.asarray(X, dtype=float)
    z = X @ samples.weights.T + samples.intercepts
    return sigmoid(z).mean(axis=1)
