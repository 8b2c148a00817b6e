"""Greedy CART trees (Gini classification and squared-error regression)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import _kernels
from .._kernels import GINI, SSE


@dataclass(frozen=True)
class TreeConstraints:
    max_depth: int = 5
    min_samples_split: int = 50
    min_samples_leaf: int = 20


@dataclass(frozen=True)
class TreeModel:
    """Flat array encoding; ``feature[i] == -1`` marks a leaf.

    A sample goes left when ``x[feature] <= threshold``.
    """
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    n_samples: np.ndarray
    depth: np.ndarray
    constraints: TreeConstraints

    @property
    def max_depth(self) -> int:
        return int(self.depth.max())

    @property
    def n_leaves(self) -> int:
        return int(np.count_nonzero(self.feature < 0))

    def apply(self, X) -> np.ndarray:
        """Leaf index reached by every row of ``X``."""
        X = np.asarray(X, dtype=float)
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        while True:
            f = self.feature[node]
            active = f >= 0
            if not active.any():
                return node
            r = rows[active]
            n = node[active]
            go_left = X[r, f[active]] <= self.threshold[n]
            node[active] = np.where(go_left, self.left[n], self.right[n])

    def predict(self, X) -> np.ndarray:
        return self.value[self.apply(X)]

    score = predict


def _node_score(target, criterion):
    s = float(target.sum())
    n = target.shape[0]
    if criterion == GINI:
        return 2.0 * s * (n - s) / n
    return -(s * s / n)


def grow_tree(X, target, criterion, constraints: TreeConstraints, leaf_value=None):
    """Grow a tree on ``target`` with the given split criterion.

    ``leaf_value(indices)`` computes the stored value of a leaf; defaults to
    the mean target.  Ties in split quality resolve to the lowest feature
    index, then the lowest threshold.
    """
    X = np.asarray(X, dtype=float)
    target = np.asarray(target, dtype=float)
    n, d = X.shape
    if n == 0:
        raise ValueError("cannot grow a tree on zero samples")
    if leaf_value is None:
        leaf_value = lambda idx: float(target[idx].mean())  # noqa: E731
    orders = [np.argsort(X[:, j], kind="stable") for j in range(d)]
    min_leaf = max(int(constraints.min_samples_leaf), 1)

    feature, threshold, left, right, value, count, depth = [], [], [], [], [], [], []

    def new_node(idx, dep):
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(leaf_value(idx))
        count.append(idx.size)
        depth.append(dep)
        return len(feature) - 1

    root_idx = np.arange(n)
    stack = [(new_node(root_idx, 0), root_idx)]
    member = np.zeros(n, dtype=bool)
    while stack:
        node, idx = stack.pop()
        dep = depth[node]
        if dep >= constraints.max_depth or idx.size < constraints.min_samples_split:
            continue
        t = target[idx]
        if criterion == GINI and (t.min() == t.max()):
            continue
        parent = _node_score(t, criterion)
        member[:] = False
        member[idx] = True
        best = (np.inf, -1, 0.0)
        for j in range(d):
            order = orders[j][member[orders[j]]]
            score, thr, found = _kernels.best_split(X[order, j], target[order], min_leaf, criterion)
            if found and score < best[0]:
                best = (score, j, thr)
        score, j, thr = best
        if j < 0 or not score < parent - 1e-12 * max(1.0, abs(parent)):
            continue
        go_left = X[idx, j] <= thr
        li, ri = idx[go_left], idx[~go_left]
        feature[node] = j
        threshold[node] = thr
        lnode = new_node(li, dep + 1)
        rnode = new_node(ri, dep + 1)
        left[node], right[node] = lnode, rnode
        # push right first so the left subtree is expanded first
        stack.append((rnode, ri))
        stack.append((lnode, li))

    return TreeModel(
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold, dtype=float),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        value=np.array(value, dtype=float),
        n_samples=np.array(count, dtype=np.int64),
        depth=np.array(depth, dtype=np.int64),
        constraints=constraints,
    )


def fit_tree(X, y, constraints: TreeConstraints = TreeConstraints()) -> TreeModel:
    """Gini classification tree; leaves score the positive-class fraction."""
    y = np.asarray(y, dtype=float)
    return grow_tree(X, y, GINI, constraints)


def fit_regression_tree(X, target, constraints: TreeConstraints, leaf_value=None) -> TreeModel:
    return grow_tree(X, target, SSE, constraints, leaf_value=leaf_value)
