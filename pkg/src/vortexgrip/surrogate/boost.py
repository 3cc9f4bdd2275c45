"""AdaBoost.R2: boosting for regression with weighted-median prediction.

Stages fit weighted trees; sample weights grow with the loss-normalized
residual, the stage weight is ``log((1 - Lbar)/Lbar)``, and boosting stops
early once the weighted average loss reaches 0.5 (or a stage fits the
training set exactly).  Prediction is the stage-weighted median, which by
construction stays within the range of the stage predictions.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin

from ._validation import check_fitted, check_matrix, check_training_set
from .tree import RegressionTree

LOSSES = ("linear", "square", "exponential")


def weighted_median(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Row-wise weighted median: the first value (in sorted order) whose
    cumulative weight reaches half the total."""
    values = np.atleast_2d(values)
    order = np.argsort(values, axis=1, kind="stable")
    sorted_vals = np.take_along_axis(values, order, axis=1)
    cum = np.cumsum(weights[order], axis=1)
    pick = (cum >= 0.5 * weights.sum()).argmax(axis=1)
    rows = np.arange(values.shape[0])
    return sorted_vals[rows, pick]


class AdaBoostR2(BaseEstimator, RegressorMixin):
    def __init__(self, n_stages=100, max_depth=6, loss="linear",
                 min_samples_leaf=1, random_state=None):
        self.n_stages = n_stages
        self.max_depth = max_depth
        self.loss = loss
        self.min_samples_leaf = min_samples_leaf
        self.random_state = random_state

    def _stage_loss(self, residual: np.ndarray) -> np.ndarray:
        r_max = residual.max()
        if r_max <= 0.0:
            return np.zeros_like(residual)
        scaled = residual / r_max
        if self.loss == "linear":
            return scaled
        if self.loss == "square":
            return scaled ** 2
        if self.loss == "exponential":
            return 1.0 - np.exp(-scaled)
        raise ValueError(f"loss must be one of {LOSSES}, got {self.loss!r}")

    def fit(self, X, y):
        X, y = check_training_set(X, y)
        if self.n_stages < 1:
            raise ValueError("need at least one stage")
        self._stage_loss(np.zeros(1))  # validate the loss name up front
        rng = np.random.default_rng(self.random_state)
        n = X.shape[0]
        w = np.full(n, 1.0 / n)
        stages: list[RegressionTree] = []
        stage_weights: list[float] = []
        for _ in range(self.n_stages):
            tree = RegressionTree(max_depth=self.max_depth,
                                  min_samples_leaf=self.min_samples_leaf,
                                  random_state=int(rng.integers(2 ** 63)))
            # mean-1 normalization keeps a uniform first stage bit-identical
            # to a plain tree fit
            tree.fit(X, y, sample_weight=w * n)
            loss = self._stage_loss(np.abs(tree.predict(X) - y))
            avg_loss = float((w * loss).sum())
            if avg_loss <= 0.0:
                stages.append(tree)
                stage_weights.append(1.0)
                break
            if avg_loss >= 0.5:
                if not stages:  # keep a usable model even if stage 1 is weak
                    stages.append(tree)
                    stage_weights.append(1.0)
                break
            beta = avg_loss / (1.0 - avg_loss)
            stages.append(tree)
            stage_weights.append(float(np.log(1.0 / beta)))
            w = w * beta ** (1.0 - loss)
            w = w / w.sum()
        self.stages_ = stages
        self.stage_weights_ = np.asarray(stage_weights)
        return self

    def predict(self, X):
        check_fitted(self, "stages_")
        X = check_matrix(X, self.stages_[0].n_features_in_)
        preds = np.stack([tree.predict(X) for tree in self.stages_], axis=1)
        return weighted_median(preds, self.stage_weights_)
