"""CART decision trees (gini) and random forests on integer class codes."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def tree_rng(seed, index, stream):
    """Generator for tree ``index``; stream 0 drives feature draws, 1 bootstrap."""
    return np.random.default_rng([int(seed), int(index), int(stream)])


def resolve_max_features(max_features, n_features):
    if max_features is None:
        return n_features
    if max_features == "sqrt":
        return max(1, math.ceil(math.sqrt(n_features)))
    if max_features == "log2":
        return max(1, math.ceil(math.log2(n_features)))
    return max(1, min(int(max_features), n_features))


def _best_split(X, y, idx, features, n_classes, min_leaf):
    """Return ``(feature, threshold, score)`` minimising n_L*gini_L + n_R*gini_R."""
    best = (-1, 0.0, np.inf)
    m = idx.size
    eye = np.eye(n_classes, dtype=np.int64)
    for f in features:
        xs = X[idx, f]
        order = np.argsort(xs, kind="stable")
        xs = xs[order]
        cum = np.cumsum(eye[y[idx][order]], axis=0)
        left = cum[:-1]
        right = cum[-1] - left
        n_left = np.arange(1, m, dtype=np.float64)
        n_right = m - n_left
        valid = (xs[:-1] < xs[1:]) & (n_left >= min_leaf) & (n_right >= min_leaf)
        if not valid.any():
            continue
        score = (n_left - (left**2).sum(axis=1) / n_left) + (
            n_right - (right**2).sum(axis=1) / n_right
        )
        score = np.where(valid, score, np.inf)
        i = int(np.argmin(score))
        if score[i] < best[2]:
            thr = 0.5 * (xs[i] + xs[i + 1])
            if not thr < xs[i + 1]:
                thr = xs[i]
            best = (int(f), float(thr), float(score[i]))
    return best


class DecisionTree:
    """Array-backed binary tree; ``x[feature] <= threshold`` goes left."""

    def __init__(self, feature, threshold, left, right, counts):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.counts = np.asarray(counts, dtype=np.int64)

    @property
    def node_count(self):
        return int(self.feature.size)

    @classmethod
    def fit(
        cls,
        X,
        y,
        n_classes,
        *,
        max_depth=None,
        min_samples_split=2,
        min_samples_leaf=1,
        max_features=None,
        rng=None,
    ):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        n_features = X.shape[1]
        k_feat = resolve_max_features(max_features, n_features)
        if k_feat < n_features and rng is None:
            rng = np.random.default_rng(0)
        feature, threshold, left, right, counts = [], [], [], [], []

        def new_node(idx):
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            counts.append(np.bincount(y[idx], minlength=n_classes))
            return len(feature) - 1

        stack = [(np.arange(y.size), 0, new_node(np.arange(y.size)))]
        while stack:
            idx, depth, node = stack.pop()
            c = counts[node]
            if (
                idx.size < max(2, min_samples_split)
                or np.count_nonzero(c) <= 1
                or (max_depth is not None and depth >= max_depth)
            ):
                continue
            if k_feat < n_features:
                feats = np.sort(rng.choice(n_features, k_feat, replace=False))
            else:
                feats = np.arange(n_features)
            f, thr, _ = _best_split(X, y, idx, feats, n_classes, min_samples_leaf)
            if f < 0:
                continue
            go_left = X[idx, f] <= thr
            li, ri = idx[go_left], idx[~go_left]
            feature[node] = f
            threshold[node] = thr
            left[node] = new_node(li)
            right[node] = new_node(ri)
            # right pushed first so the left subtree is numbered first
            stack.append((ri, depth + 1, right[node]))
            stack.append((li, depth + 1, left[node]))
        return cls(feature, threshold, left, right, np.array(counts).reshape(-1, n_classes))

    def apply(self, X):
        """Leaf index reached by each row of ``X``."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = self.feature[node] >= 0
        while active.any():
            rows = np.flatnonzero(active)
            nd = node[rows]
            go_left = X[rows, self.feature[nd]] <= self.threshold[nd]
            node[rows] = np.where(go_left, self.left[nd], self.right[nd])
            active = self.feature[node] >= 0
        return node

    def predict(self, X):
        return np.argmax(self.counts[self.apply(X)], axis=1)

    def to_dict(self):
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "counts": self.counts.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        counts = np.asarray(d["counts"], dtype=np.int64)
        return cls(d["feature"], d["threshold"], d["left"], d["right"], counts)


class RandomForest:
    """Bagged CART trees combined by majority vote (ties to the lower class code)."""

    def __init__(self, trees, n_classes):
        self.trees = list(trees)
        self.n_classes = n_classes

    @classmethod
    def fit(
        cls,
        X,
        y,
        n_classes,
        *,
        n_estimators=100,
        bootstrap=True,
        max_features="sqrt",
        seed=0,
        n_jobs=1,
        **tree_params,
    ):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        m = y.size

        def grow(t):
            rows = tree_rng(seed, t, 1).integers(0, m, m) if bootstrap else np.arange(m)
            return DecisionTree.fit(
                X[rows],
                y[rows],
                n_classes,
                max_features=max_features,
                rng=tree_rng(seed, t, 0),
                **tree_params,
            )

        if n_jobs and n_jobs > 1:
            with ThreadPoolExecutor(max_workers=n_jobs) as pool:
                trees = list(pool.map(grow, range(n_estimators)))
        else:
            trees = [grow(t) for t in range(n_estimators)]
        return cls(trees, n_classes)

    def votes(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        v = np.zeros((X.shape[0], self.n_classes), dtype=np.int64)
        for tree in self.trees:
            v[np.arange(X.shape[0]), tree.predict(X)] += 1
        return v

    def predict(self, X):
        return np.argmax(self.votes(X), axis=1)

    def to_dict(self):
        return {"n_classes": self.n_classes, "trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_dict(cls, d):
        return cls([DecisionTree.from_dict(t) for t in d["trees"]], int(d["n_classes"]))
