"""CART-style trees and the two ensembles built from them.

A tree is stored as flat node arrays: ``feature`` (-1 marks a leaf),
``threshold``, ``left``, ``right`` and per-node class fractions ``value``.
Rows with ``x[feature] <= threshold`` go left.
"""

import math

import numpy as np

from ..numcore import make_rng
from .base import ClassifierModel


def gini_of_counts(counts):
    n = counts.sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = counts / n[..., None]
    return 1.0 - np.sum(frac * frac, axis=-1)


def _weighted_gini(left_counts, right_counts):
    nl = left_counts.sum(axis=-1)
    nr = right_counts.sum(axis=-1)
    return (nl * gini_of_counts(left_counts) + nr * gini_of_counts(right_counts)) / (nl + nr)


def best_midpoint_split(x, onehot):
    """Lowest-impurity midpoint threshold on one feature.

    Returns ``(impurity, threshold)`` or ``None`` when every value is equal.
    Among equal impurities the lowest threshold wins.
    """
    order = np.argsort(x, kind="stable")
    xs = x[order]
    valid = xs[:-1] < xs[1:]
    if not valid.any():
        return None
    left = np.cumsum(onehot[order], axis=0)[:-1]
    right = left[-1] + onehot[order[-1]] - left
    imp = _weighted_gini(left, right)
    imp = np.where(valid, imp, np.inf)
    i = int(np.argmin(imp))
    thr = 0.5 * (xs[i] + xs[i + 1])
    if thr >= xs[i + 1]:
        thr = xs[i]
    return float(imp[i]), float(thr)


def random_split(x, onehot, rng):
    """One uniform threshold between the node's min and max of ``x``."""
    lo, hi = x.min(), x.max()
    if not lo < hi:
        return None
    thr = float(rng.uniform(lo, hi))
    go_left = x <= thr
    if go_left.all():
        return None
    left = onehot[go_left].sum(axis=0)
    right = onehot[~go_left].sum(axis=0)
    return float(_weighted_gini(left, right)), thr


class DecisionTree:
    """Fully grown Gini tree on a random feature subset per split.

    Parameters
    ----------
    n_classes : int
    max_features : int
        Candidate features drawn per node. When none of them can split the
        node the remaining features are tried in the same random order.
    splitter : {"best", "random"}
        ``"best"`` scans midpoints; ``"random"`` draws one threshold per
        candidate feature.
    """

    def __init__(self, n_classes, max_features, splitter="best"):
        self.n_classes = n_classes
        self.max_features = max_features
        self.splitter = splitter

    def fit(self, X, y_idx, rng):
        onehot = np.eye(self.n_classes)[y_idx]
        d = X.shape[1]
        feature, threshold, left, right, value = [], [], [], [], []

        def new_node(rows):
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            counts = onehot[rows].sum(axis=0)
            value.append(counts / counts.sum())
            return len(feature) - 1

        stack = [(new_node(np.arange(len(X))), np.arange(len(X)))]
        while stack:
            node, rows = stack.pop()
            if np.count_nonzero(value[node]) <= 1:
                continue
            Xn, yn = X[rows], onehot[rows]
            perm = rng.permutation(d)
            best = None
            tried = 0
            for f in perm:
                if tried >= self.max_features and best is not None:
                    break
                tried += 1
                if self.splitter == "best":
                    found = best_midpoint_split(Xn[:, f], yn)
                else:
                    found = random_split(Xn[:, f], yn, rng)
                if found is None:
                    continue
                key = (found[0], int(f), found[1])
                if best is None or key < best:
                    best = key
            if best is None:
                continue
            _, f, thr = best
            go_left = Xn[:, f] <= thr
            feature[node] = f
            threshold[node] = thr
            l_rows, r_rows = rows[go_left], rows[~go_left]
            left[node] = new_node(l_rows)
            right[node] = new_node(r_rows)
            stack.append((right[node], r_rows))
            stack.append((left[node], l_rows))

        self.feature = np.asarray(feature, dtype=np.int32)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int32)
        self.right = np.asarray(right, dtype=np.int32)
        self.value = np.asarray(value, dtype=np.float64)
        return self

    @property
    def n_nodes(self):
        return len(self.feature)

    def apply(self, X):
        """Leaf index reached by every row."""
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = self.feature[node] >= 0
        while active.any():
            idx = np.nonzero(active)[0]
            cur = node[idx]
            go_left = X[idx, self.feature[cur]] <= self.threshold[cur]
            node[idx] = np.where(go_left, self.left[cur], self.right[cur])
            active[idx] = self.feature[node[idx]] >= 0
        return node

    def predict_proba(self, X):
        return self.value[self.apply(X)]

    @classmethod
    def from_arrays(cls, n_classes, feature, threshold, left, right, value):
        tree = cls(n_classes, max_features=0)
        tree.feature = np.asarray(feature, dtype=np.int32)
        tree.threshold = np.asarray(threshold, dtype=np.float64)
        tree.left = np.asarray(left, dtype=np.int32)
        tree.right = np.asarray(right, dtype=np.int32)
        tree.value = np.asarray(value, dtype=np.float64).reshape(-1, n_classes)
        return tree


class _Forest(ClassifierModel):
    defaults = {"n_trees": 100}
    bootstrap = False
    splitter = "best"

    def _fit(self, X, y_idx, rng):
        n, d = X.shape
        mf = max(1, int(math.sqrt(d)))
        self.trees_ = []
        for t in range(self.hyper["n_trees"]):
            tree_rng = make_rng(self.seed, self.kind, "tree", t)
            rows = tree_rng.integers(0, n, size=n) if self.bootstrap else np.arange(n)
            tree = DecisionTree(self.n_classes, mf, self.splitter)
            self.trees_.append(tree.fit(X[rows], y_idx[rows], tree_rng))

    def _proba(self, X):
        # sorting along the tree axis makes the sum independent of tree order
        stacked = np.sort(np.stack([t.predict_proba(X) for t in self.trees_]), axis=0)
        p = stacked.sum(axis=0)
        return p / p.sum(axis=1, keepdims=True)

    def state(self):
        arrays = []
        for name, dtype in (("feature", "<i4"), ("threshold", "<f8"), ("left", "<i4"),
                            ("right", "<i4"), ("value", "<f8")):
            arrays.append((name, np.concatenate([getattr(t, name).ravel()
                                                 for t in self.trees_]).astype(dtype)))
        return {"node_counts": [t.n_nodes for t in self.trees_]}, arrays

    def load_state(self, meta, arrays):
        counts = meta["node_counts"]
        k = self.n_classes
        offsets = np.concatenate([[0], np.cumsum(counts)])
        self.trees_ = []
        for a, b in zip(offsets[:-1], offsets[1:]):
            self.trees_.append(DecisionTree.from_arrays(
                k, arrays["feature"][a:b], arrays["threshold"][a:b], arrays["left"][a:b],
                arrays["right"][a:b], arrays["value"][a * k:b * k]))


class RandomForest(_Forest):
    """Bootstrap ensemble of best-midpoint Gini trees."""

    kind = "random_forest"
    bootstrap = True
    splitter = "best"


class ExtraTrees(_Forest):
    """Whole-sample ensemble of trees with one random threshold per candidate feature."""

    kind = "extra_trees"
    bootstrap = False
    splitter = "random"
