"""Bagged random forest over the CART trees.

Each tree fits a bootstrap resample with per-split feature subsampling;
the forest prediction is the plain mean of the tree outputs, so it can
never leave the training-target range.  Tree seeds are derived up front
from the root seed, which keeps results identical for any worker count.
"""

from __future__ import annotations

import numpy as np
from joblib import Parallel, delayed
from sklearn.base import BaseEstimator, RegressorMixin

from ._validation import check_fitted, check_matrix, check_training_set
from .tree import RegressionTree


def _fit_one_tree(X, y, params: dict, bootstrap: bool, seed: int):
    rng = np.random.default_rng(seed)
    tree = RegressionTree(random_state=int(rng.integers(2 ** 63)), **params)
    if bootstrap:
        idx = rng.integers(0, X.shape[0], size=X.shape[0])
        tree.fit(X[idx], y[idx])
    else:
        tree.fit(X, y)
    return tree


class RandomForest(BaseEstimator, RegressorMixin):
    def __init__(self, n_trees=200, max_depth=12, feature_fraction=0.75,
                 bootstrap=True, min_samples_leaf=1, random_state=None,
                 n_jobs=1):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.feature_fraction = feature_fraction
        self.bootstrap = bootstrap
        self.min_samples_leaf = min_samples_leaf
        self.random_state = random_state
        self.n_jobs = n_jobs

    def fit(self, X, y):
        X, y = check_training_set(X, y)
        if self.n_trees < 1:
            raise ValueError("need at least one tree")
        root = np.random.default_rng(self.random_state)
        seeds = [int(s) for s in root.integers(2 ** 63, size=self.n_trees)]
        params = dict(max_depth=self.max_depth,
                      min_samples_leaf=self.min_samples_leaf,
                      max_features=self.feature_fraction)
        if self.n_jobs != 1:
            self.trees_ = Parallel(n_jobs=self.n_jobs)(
                delayed(_fit_one_tree)(X, y, params, self.bootstrap, seed)
                for seed in seeds)
        else:
            self.trees_ = [_fit_one_tree(X, y, params, self.bootstrap, seed)
                           for seed in seeds]
        return self

    def predict(self, X):
        check_fitted(self, "trees_")
        X = check_matrix(X, self.trees_[0].n_features_in_)
        total = np.zeros(X.shape[0])
        for tree in self.trees_:  # fixed order: bit-identical results
            total += tree.predict(X)
        return total / len(self.trees_)
