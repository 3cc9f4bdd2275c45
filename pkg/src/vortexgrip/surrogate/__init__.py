"""From-scratch ensemble regression for the lift surrogate."""

from .boost import AdaBoostR2, weighted_median
from .ensemble import (
    CVReport,
    FEATURE_SCHEMA,
    FeatureVector,
    LiftEnsemble,
    SweepGrid,
    SweepSurface,
    cross_validate,
    dataset_features,
    encode_features,
    ensemble_from_params,
    sweep_predict,
)
from .forest import RandomForest
from .tree import RegressionTree

__all__ = [
    "AdaBoostR2",
    "CVReport",
    "FEATURE_SCHEMA",
    "FeatureVector",
    "LiftEnsemble",
    "RandomForest",
    "RegressionTree",
    "SweepGrid",
    "SweepSurface",
    "cross_validate",
    "dataset_features",
    "encode_features",
    "ensemble_from_params",
    "sweep_predict",
    "weighted_median",
]
