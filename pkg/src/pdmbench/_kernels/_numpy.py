"""Vectorised numpy versions of the hot loops."""

import numpy as np

GINI = 0
SSE = 1


def best_split(xs, ys, min_leaf, criterion):
    """Best threshold on one feature whose values ``xs`` are sorted ascending.

    Returns ``(score, threshold, found)``; lower score is better.  Gini scores
    are the size-weighted child impurities, SSE scores are the negated
    between-group sum of squares (``-(S_l**2/n_l + S_r**2/n_r)``).
    """
    n = xs.shape[0]
    if n < 2 * min_leaf or n < 2:
        return np.inf, 0.0, False
    csum = np.cumsum(ys)
    total = csum[-1]
    n_left = np.arange(1, n, dtype=np.float64)
    n_right = n - n_left
    s_left = csum[:-1]
    s_right = total - s_left
    valid = xs[:-1] < xs[1:]
    lo = max(min_leaf, 1) - 1
    hi = n - max(min_leaf, 1)
    valid[:lo] = False
    valid[hi:] = False
    if not valid.any():
        return np.inf, 0.0, False
    if criterion == GINI:
        score = (2.0 * s_left * (n_left - s_left) / n_left
                 + 2.0 * s_right * (n_right - s_right) / n_right)
    else:
        score = -(s_left * s_left / n_left + s_right * s_right / n_right)
    score = np.where(valid, score, np.inf)
    i = int(np.argmin(score))
    return float(score[i]), 0.5 * (xs[i] + xs[i + 1]), True


def threshold_costs(scores, labels, grid, tp_cost, fp_cost, fn_cost, tn_cost):
    """Total cost of the rule ``score >= t`` for every ``t`` in ``grid``."""
    labels = labels.astype(bool)
    pos = np.sort(scores[labels])
    neg = np.sort(scores[~labels])
    fn = np.searchsorted(pos, grid, side="left").astype(np.int64)
    tn = np.searchsorted(neg, grid, side="left").astype(np.int64)
    tp = pos.shape[0] - fn
    fp = neg.shape[0] - tn
    return tp * tp_cost + fp * fp_cost + fn * fn_cost + tn * tn_cost


def rule_fire(params, wear, temp_diff, rpm, power, overstrain, type_idx):
    """Boolean alarm vector for one rule parameter vector (length 9)."""
    os_limit = params[6:9][type_idx]
    return (((wear >= params[0]) & (wear <= params[1]))
            | ((temp_diff < params[2]) & (rpm < params[3]))
            | (power < params[4]) | (power > params[5])
            | (overstrain > os_limit))


def rule_costs(candidates, wear, temp_diff, rpm, power, overstrain, type_idx,
               labels, tp_cost, fp_cost, fn_cost, tn_cost):
    """Training cost and true-negative count of every candidate rule vector."""
    labels = labels.astype(bool)
    m = candidates.shape[0]
    costs = np.empty(m, dtype=np.int64)
    tns = np.empty(m, dtype=np.int64)
    n_pos = int(labels.sum())
    n_neg = labels.shape[0] - n_pos
    for k in range(m):
        fire = rule_fire(candidates[k], wear, temp_diff, rpm, power,
                         overstrain, type_idx)
        tp = int(np.count_nonzero(fire & labels))
        fp = int(np.count_nonzero(fire & ~labels))
        fn = n_pos - tp
        tn = n_neg - fp
        costs[k] = tp * tp_cost + fp * fp_cost + fn * fn_cost + tn * tn_cost
        tns[k] = tn
    return costs, tns


def logistic_loglik(X, y, theta):
    """Bernoulli log-likelihood of logistic model; ``theta[-1]`` is the intercept."""
    z = X @ theta[:-1] + theta[-1]
    return float(np.sum(y * z - np.logaddexp(0.0, z)))
