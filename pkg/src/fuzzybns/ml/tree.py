"""CART decision tree and bagged forest, both vote on binary targets.

Split search is exhaustive over midpoints of consecutive distinct feature
values, scored by Gini impurity computed from integer class counts, so
results do not depend on training-row order.  Ties break toward the
lowest feature index, then the lowest threshold.
"""

from __future__ import annotations

import numpy as np

from .base import make_rng

__all__ = ["train_tree", "train_forest", "proba_tree", "proba_forest"]

_LEAF = -1


def _best_split(X, y, min_leaf, feature_ids):
    """(cost, feature, threshold) of the best admissible split, or None.

    Impurity is the total count of mispaired elements measured by
    n_left*g_left + n_right*g_right; constant factors cancel in the argmin.
    """
    n = len(y)
    total_pos = int(y.sum())
    best = None
    for f in feature_ids:
        xs = X[:, f]
        order = np.argsort(xs, kind="stable")
        xs_sorted = xs[order]
        pos_prefix = np.cumsum(y[order])
        # candidate boundaries between distinct consecutive values
        cut = np.flatnonzero(xs_sorted[:-1] < xs_sorted[1:])
        if cut.size == 0:
            continue
        n_left = cut + 1
        n_right = n - n_left
        ok = (n_left >= min_leaf) & (n_right >= min_leaf)
        if not ok.any():
            continue
        cut = cut[ok]
        n_left = n_left[ok]
        n_right = n_right[ok]
        pos_left = pos_prefix[cut]
        pos_right = total_pos - pos_left
        gini_left = 1.0 - (pos_left / n_left) ** 2 - ((n_left - pos_left) / n_left) ** 2
        gini_right = 1.0 - (pos_right / n_right) ** 2 - ((n_right - pos_right) / n_right) ** 2
        cost = n_left * gini_left + n_right * gini_right
        k = int(np.argmin(cost))  # first minimum = lowest threshold
        cand = (float(cost[k]), f, float((xs_sorted[cut[k]] + xs_sorted[cut[k] + 1]) / 2.0))
        if best is None or cand[0] < best[0]:
            best = cand
    return best


def _grow(X, y, hp, rng, max_features):
    """Depth-first construction into parallel node arrays."""
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    prob: list[float] = []

    def new_node():
        feature.append(_LEAF)
        threshold.append(0.0)
        left.append(_LEAF)
        right.append(_LEAF)
        prob.append(0.0)
        return len(feature) - 1

    def build(idx, depth):
        node = new_node()
        ys = y[idx]
        n = len(idx)
        pos = int(ys.sum())
        prob[node] = pos / n
        if depth >= hp["max_depth"] or pos == 0 or pos == n or n < 2 * hp["min_leaf"]:
            return node
        if max_features is None or max_features >= X.shape[1]:
            feature_ids = range(X.shape[1])
        else:
            feature_ids = np.sort(rng.choice(X.shape[1], size=max_features, replace=False))
        found = _best_split(X[idx], ys, hp["min_leaf"], feature_ids)
        if found is None:
            return node
        _, f, thr = found
        go_left = X[idx, f] < thr
        feature[node] = f
        threshold[node] = thr
        left[node] = build(idx[go_left], depth + 1)
        right[node] = build(idx[~go_left], depth + 1)
        return node

    build(np.arange(len(y)), 0)
    return {
        "feature": np.array(feature, dtype=np.int64),
        "threshold": np.array(threshold),
        "left": np.array(left, dtype=np.int64),
        "right": np.array(right, dtype=np.int64),
        "prob": np.array(prob),
    }


def train_tree(X: np.ndarray, y: np.ndarray, hp: dict) -> dict:
    return _grow(X, y, hp, rng=None, max_features=None)


def train_forest(X: np.ndarray, y: np.ndarray, hp: dict, seed: int) -> dict:
    """Bag of CART trees; tree i draws from its own generator seeded seed^i."""
    params: dict[str, np.ndarray] = {"n_trees": np.array([hp["n_trees"]], dtype=np.int64)}
    n = len(y)
    for i in range(hp["n_trees"]):
        rng = make_rng(seed ^ i)
        if hp["bootstrap"]:
            idx = rng.integers(0, n, size=n)
            Xi, yi = X[idx], y[idx]
        else:
            Xi, yi = X, y
        tree = _grow(Xi, yi, hp, rng, hp["max_features"])
        for key, arr in tree.items():
            params[f"tree{i}/{key}"] = arr
    return params


def _descend(params, X, prefix=""):
    feature = params[prefix + "feature"]
    threshold = params[prefix + "threshold"]
    left = params[prefix + "left"]
    right = params[prefix + "right"]
    node = np.zeros(len(X), dtype=np.int64)
    active = feature[node] != _LEAF
    while active.any():
        rows = np.flatnonzero(active)
        cur = node[rows]
        go_left = X[rows, feature[cur]] < threshold[cur]
        node[rows] = np.where(go_left, left[cur], right[cur])
        active = feature[node] != _LEAF
    return params[prefix + "prob"][node]


def proba_tree(params: dict, X: np.ndarray) -> np.ndarray:
    """Leaf class-1 fraction."""
    return _descend(params, X)


def proba_forest(params: dict, X: np.ndarray) -> np.ndarray:
    """Fraction of trees voting class 1 (leaf fraction >= 0.5)."""
    n_trees = int(params["n_trees"][0])
    votes = np.zeros(len(X))
    for i in range(n_trees):
        votes += _descend(params, X, prefix=f"tree{i}/") >= 0.5
    return votes / n_trees
