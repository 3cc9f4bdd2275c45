"""Input validation helpers shared by the surrogate estimators."""

from __future__ import annotations

import numpy as np

from ..errors import EmptyTrainingSet, SchemaMismatch


def check_matrix(X, n_features: int | None = None) -> np.ndarray:
    """Coerce to a 2-D float array and optionally enforce a column count."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D sample matrix, got shape {X.shape}")
    if not np.isfinite(X).all():
        raise ValueError("sample matrix contains non-finite values")
    if n_features is not None and X.shape[1] != n_features:
        raise SchemaMismatch(
            f"expected {n_features} feature columns, got {X.shape[1]}")
    return X


def check_training_set(X, y) -> tuple[np.ndarray, np.ndarray]:
    X = check_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    if X.shape[0] == 0:
        raise EmptyTrainingSet("no training samples")
    if y.shape[0] != X.shape[0]:
        raise ValueError("X and y lengths differ")
    if not np.isfinite(y).all():
        raise ValueError("targets contain non-finite values")
    return X, y


def check_fitted(estimator, attribute: str) -> None:
    if getattr(estimator, attribute, None) is None:
        raise RuntimeError(
            f"{type(estimator).__name__} must be fitted before prediction")
