"""CART regression tree with greedy variance-reduction splits.

Splits minimize the summed child squared error (equivalently maximize
variance reduction); ties are broken deterministically by the lowest
feature index, then the lowest threshold.  Supports sample weights (used
by the boosting wrapper) and per-split feature subsampling (used by the
forest).

Duplicate sample rows are pooled before fitting: identical inputs always
travel together through any split, so fitting unique rows with summed
weights and pooled targets yields the same tree while repeat-heavy
datasets fit several times faster.  Leaf predictions remain the mean of
the leaf's original training targets.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin

from ._validation import check_fitted, check_matrix, check_training_set

_LEAF = -1


def _pool_duplicates(X, y, w):
    """Group identical rows: pooled weight, count and weighted target."""
    unique, inverse = np.unique(X, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    counts = np.bincount(inverse).astype(float)
    if w is None:
        wsum = counts
        wy = np.bincount(inverse, weights=y)
    else:
        wsum = np.bincount(inverse, weights=w)
        wy = np.bincount(inverse, weights=w * y)
    return unique, wy / wsum, wsum, counts


class _TreeBuilder:
    """Grows the flat node arrays for one tree.

    Rows are argsorted once per feature at the root; splits then partition
    the per-feature sorted index lists down the tree, so no node ever
    re-sorts (the usual presort CART scheme).
    """

    def __init__(self, X, y, w, counts, max_depth, min_samples_leaf,
                 min_samples_split, n_subsample_features, rng):
        self.X = X
        self.y = y          # pooled (weighted-mean) targets per unique row
        self.w = w          # pooled weights
        self.counts = counts  # original rows represented by each unique row
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.min_samples_split = min_samples_split
        self.mtry = n_subsample_features
        self.rng = rng
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []
        self._go_left = np.empty(X.shape[0], dtype=bool)

    def _new_node(self) -> int:
        self.feature.append(_LEAF)
        self.threshold.append(0.0)
        self.left.append(_LEAF)
        self.right.append(_LEAF)
        self.value.append(0.0)
        return len(self.feature) - 1

    def _split_features(self) -> np.ndarray:
        n_features = self.X.shape[1]
        if self.mtry >= n_features:
            return np.arange(n_features)
        picked = self.rng.choice(n_features, size=self.mtry, replace=False)
        picked.sort()
        return picked

    def _best_split(self, cols: list[np.ndarray], features: np.ndarray):
        """Scan all candidate features in one batch; returns
        (feature, threshold) of the lowest-SSE valid split or None."""
        sidx = np.column_stack([cols[f] for f in features])
        n = sidx.shape[0]
        xs = self.X[sidx, features[None, :]]
        ys = self.y[sidx]
        ws = self.w[sidx]
        wys = ws * ys
        wy2s = wys * ys
        cw = np.cumsum(ws, axis=0)[:-1]
        cwy = np.cumsum(wys, axis=0)[:-1]
        cwy2 = np.cumsum(wy2s, axis=0)[:-1]
        cc = np.cumsum(self.counts[sidx], axis=0)[:-1]
        tw = cw[-1] + ws[-1]
        twy = cwy[-1] + wys[-1]
        twy2 = cwy2[-1] + wy2s[-1]
        tc = cc[-1] + self.counts[sidx[-1]]
        rw = tw - cw
        with np.errstate(invalid="ignore", divide="ignore"):
            sse = (cwy2 - cwy * cwy / cw) \
                + ((twy2 - cwy2) - (twy - cwy) ** 2 / rw)
        valid = (xs[1:] > xs[:-1]) \
            & (cc >= self.min_samples_leaf) \
            & (tc - cc >= self.min_samples_leaf) \
            & (cw > 0) & (rw > 0)
        sse = np.where(valid, sse, np.inf)
        # argmin over the transposed matrix walks feature-major, which is
        # exactly "lowest feature index, then lowest threshold" on ties
        # (positions ascend with the threshold).
        flat = int(np.argmin(sse.T))
        f_local, pos = divmod(flat, n - 1)
        if not np.isfinite(sse[pos, f_local]):
            return None
        feature = int(features[f_local])
        lo, hi = xs[pos, f_local], xs[pos + 1, f_local]
        threshold = 0.5 * (lo + hi)
        if not threshold < hi:  # midpoint collapsed onto the upper value
            threshold = lo
        return feature, float(threshold)

    def build(self, cols: list[np.ndarray], depth: int) -> int:
        """``cols[j]`` holds the node's unique rows sorted by feature j."""
        node = self._new_node()
        rows = cols[0]
        self.value[node] = float(np.average(self.y[rows],
                                            weights=self.w[rows]))
        n_original = int(self.counts[rows].sum())
        if depth >= self.max_depth or n_original < self.min_samples_split \
                or n_original < 2 * self.min_samples_leaf or rows.size < 2:
            return node
        split = self._best_split(cols, self._split_features())
        if split is None:
            return node
        feature, threshold = split
        go_left = self._go_left
        go_left[rows] = self.X[rows, feature] <= threshold
        left_cols = [c[go_left[c]] for c in cols]
        right_cols = [c[~go_left[c]] for c in cols]
        self.feature[node] = feature
        self.threshold[node] = threshold
        self.left[node] = self.build(left_cols, depth + 1)
        self.right[node] = self.build(right_cols, depth + 1)
        return node


class RegressionTree(BaseEstimator, RegressorMixin):
    """Deterministic CART regressor.

    Parameters
    ----------
    max_depth : int
        Maximum tree depth; 0 yields a single leaf.
    min_samples_leaf, min_samples_split : int
        Usual CART stopping controls, counted in original sample rows.
    max_features : float
        Fraction of features drawn (without replacement, per split) as
        split candidates; 1.0 disables subsampling entirely.
    random_state : int or None
        Seed for the feature subsampling draws.
    """

    def __init__(self, max_depth=12, min_samples_leaf=1, min_samples_split=2,
                 max_features=1.0, random_state=None):
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.min_samples_split = min_samples_split
        self.max_features = max_features
        self.random_state = random_state

    def fit(self, X, y, sample_weight=None):
        X, y = check_training_set(X, y)
        if sample_weight is not None:
            w = np.asarray(sample_weight, dtype=float)
            if w.shape[0] != X.shape[0] or (w < 0).any() or w.sum() <= 0:
                raise ValueError("bad sample weights")
        else:
            w = None
        n_features = X.shape[1]
        if self.max_features >= 1.0:
            mtry = n_features
        else:
            mtry = max(1, round(self.max_features * n_features))
        X_u, y_u, w_u, counts = _pool_duplicates(X, y, w)
        rng = np.random.default_rng(self.random_state)
        builder = _TreeBuilder(X_u, y_u, w_u, counts, self.max_depth,
                               self.min_samples_leaf, self.min_samples_split,
                               mtry, rng)
        root_cols = [np.argsort(X_u[:, j]) for j in range(n_features)]
        builder.build(root_cols, 0)
        self.n_features_in_ = n_features
        self.feature_ = np.asarray(builder.feature, dtype=np.int32)
        self.threshold_ = np.asarray(builder.threshold)
        self.left_ = np.asarray(builder.left, dtype=np.int32)
        self.right_ = np.asarray(builder.right, dtype=np.int32)
        self.value_ = np.asarray(builder.value)
        return self

    def predict(self, X):
        check_fitted(self, "value_")
        X = check_matrix(X, self.n_features_in_)
        node = np.zeros(X.shape[0], dtype=np.int32)
        rows = np.arange(X.shape[0])
        while True:
            feature = self.feature_[node]
            internal = feature != _LEAF
            if not internal.any():
                break
            r = rows[internal]
            f = feature[internal]
            go_left = X[r, f] <= self.threshold_[node[internal]]
            node[internal] = np.where(go_left,
                                      self.left_[node[internal]],
                                      self.right_[node[internal]])
        return self.value_[node]

    @property
    def node_count(self) -> int:
        return int(self.feature_.size)
