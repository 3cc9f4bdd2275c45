"""Lift surrogate: forest + boost averaged, CV, and design-space sweeps.

The combined prediction is the exact arithmetic mean of the forest and
boost outputs.  Features are nozzle diameter, log10 of the surface radius
(flat encodes as 1e6 mm, so the log transform keeps it from dominating
splits), supply pressure, and a one-hot of the four curved families.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.metrics import r2_score
from sklearn.model_selection import KFold

from ..errors import DatasetTooSmall
from ..geometry import SurfaceFamily
from ._validation import check_fitted, check_matrix
from .boost import AdaBoostR2
from .forest import RandomForest

FEATURE_SCHEMA = (
    "nozzle_diameter_mm",
    "log10_radius_mm",
    "pressure_kpa",
    "family_dome_convex",
    "family_cylinder_convex",
    "family_dome_concave",
    "family_cylinder_concave",
)

_ONE_HOT = {
    SurfaceFamily.FLAT: (0.0, 0.0, 0.0, 0.0),
    SurfaceFamily.DOME_CONVEX: (1.0, 0.0, 0.0, 0.0),
    SurfaceFamily.CYLINDER_CONVEX: (0.0, 1.0, 0.0, 0.0),
    SurfaceFamily.DOME_CONCAVE: (0.0, 0.0, 1.0, 0.0),
    SurfaceFamily.CYLINDER_CONCAVE: (0.0, 0.0, 0.0, 1.0),
}


@dataclass(frozen=True)
class FeatureVector:
    """One design point in the surrogate's input space."""

    nozzle_diameter_mm: float
    surface_radius_mm: float
    supply_pressure_kpa: float
    surface_family: SurfaceFamily

    def encode(self) -> np.ndarray:
        if self.surface_radius_mm <= 0:
            raise ValueError("surface radius must be positive")
        return np.array([
            self.nozzle_diameter_mm,
            np.log10(self.surface_radius_mm),
            self.supply_pressure_kpa,
            *_ONE_HOT[self.surface_family],
        ])


def encode_features(vectors) -> np.ndarray:
    return np.vstack([fv.encode() for fv in vectors])


def dataset_features(dataset) -> tuple[np.ndarray, np.ndarray]:
    """Feature matrix and max-lift targets from an experiment dataset."""
    vectors = []
    targets = []
    for rec in dataset.records:
        cond = rec.condition
        vectors.append(FeatureVector(
            nozzle_diameter_mm=cond.gripper.nozzle_diameter_mm,
            surface_radius_mm=cond.surface.radius_mm,
            supply_pressure_kpa=cond.supply_kpa,
            surface_family=cond.surface.family,
        ))
        targets.append(rec.f_max_n)
    return encode_features(vectors), np.asarray(targets)


class LiftEnsemble(BaseEstimator, RegressorMixin):
    """Average of a random forest and an AdaBoost.R2 regressor.

    ``predict`` returns exactly ``(forest + boost) / 2``.  Sub-model seeds
    are derived from ``random_state``, so identical inputs give identical
    models regardless of the worker count used for the forest.
    """

    def __init__(self, n_trees=200, forest_max_depth=12,
                 feature_fraction=0.75, bootstrap=True, boost_stages=100,
                 boost_max_depth=6, boost_loss="linear", min_samples_leaf=1,
                 random_state=None, n_jobs=1):
        self.n_trees = n_trees
        self.forest_max_depth = forest_max_depth
        self.feature_fraction = feature_fraction
        self.bootstrap = bootstrap
        self.boost_stages = boost_stages
        self.boost_max_depth = boost_max_depth
        self.boost_loss = boost_loss
        self.min_samples_leaf = min_samples_leaf
        self.random_state = random_state
        self.n_jobs = n_jobs

    def fit(self, X, y):
        X = check_matrix(X)
        root = np.random.default_rng(self.random_state)
        forest_seed = int(root.integers(2 ** 63))
        boost_seed = int(root.integers(2 ** 63))
        self.forest_ = RandomForest(
            n_trees=self.n_trees, max_depth=self.forest_max_depth,
            feature_fraction=self.feature_fraction, bootstrap=self.bootstrap,
            min_samples_leaf=self.min_samples_leaf,
            random_state=forest_seed, n_jobs=self.n_jobs).fit(X, y)
        self.boost_ = AdaBoostR2(
            n_stages=self.boost_stages, max_depth=self.boost_max_depth,
            loss=self.boost_loss, min_samples_leaf=self.min_samples_leaf,
            random_state=boost_seed).fit(X, y)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_fitted(self, "forest_")
        X = check_matrix(X, self.n_features_in_)
        return (self.forest_.predict(X) + self.boost_.predict(X)) / 2.0

    def predict_point(self, fv: FeatureVector) -> float:
        return float(self.predict(fv.encode().reshape(1, -1))[0])


def ensemble_from_params(params, seed: int, n_jobs: int = 1) -> LiftEnsemble:
    """Build an unfitted ensemble from a ``SurrogateParams`` config block."""
    return LiftEnsemble(
        n_trees=params.forest_n_trees,
        forest_max_depth=params.forest_max_depth,
        feature_fraction=params.forest_feature_fraction,
        bootstrap=params.forest_bootstrap,
        boost_stages=params.boost_n_stages,
        boost_max_depth=params.boost_max_depth,
        boost_loss=params.boost_loss,
        min_samples_leaf=params.min_samples_leaf,
        random_state=seed,
        n_jobs=n_jobs,
    )


@dataclass(frozen=True)
class CVReport:
    fold_scores: tuple[float, ...]
    mean_score: float
    fold_assignments: np.ndarray  # fold index per row
    seed: int


def cross_validate(X, y, estimator: LiftEnsemble, k: int = 5,
                   seed: int = 0) -> CVReport:
    """Shuffled k-fold R-squared of the ensemble.

    Folds partition the rows (disjoint, exhaustive, sizes within one);
    each fold's model trains on the remaining rows with a seed derived
    from ``seed`` and the fold index.
    """
    X = check_matrix(X)
    y = np.asarray(y, dtype=float)
    if X.shape[0] < k:
        raise DatasetTooSmall(f"{X.shape[0]} rows cannot make {k} folds")
    folds = KFold(n_splits=k, shuffle=True, random_state=seed)
    assignments = np.empty(X.shape[0], dtype=np.int32)
    scores = []
    for fold_index, (train_idx, test_idx) in enumerate(folds.split(X)):
        assignments[test_idx] = fold_index
        params = estimator.get_params()
        params["random_state"] = int(np.random.default_rng(
            (seed, fold_index)).integers(2 ** 63))
        model = LiftEnsemble(**params).fit(X[train_idx], y[train_idx])
        scores.append(float(r2_score(y[test_idx],
                                     model.predict(X[test_idx]))))
    return CVReport(fold_scores=tuple(scores),
                    mean_score=float(np.mean(scores)),
                    fold_assignments=assignments,
                    seed=seed)


@dataclass(frozen=True)
class SweepGrid:
    nozzle_diameters_mm: tuple[float, ...]
    radii_mm: tuple[float, ...]
    family: SurfaceFamily
    pressure_kpa: float = 400.0

    def __post_init__(self):
        if not self.nozzle_diameters_mm or not self.radii_mm:
            raise ValueError("sweep grid must be non-empty")


@dataclass(frozen=True)
class SweepSurface:
    """Dense prediction surface with its axis metadata."""

    nozzle_diameters_mm: tuple[float, ...]
    radii_mm: tuple[float, ...]
    family: SurfaceFamily
    pressure_kpa: float
    forces_n: np.ndarray  # (n_nozzle, n_radius)


def sweep_predict(model: LiftEnsemble, grid: SweepGrid) -> SweepSurface:
    """Predict lift over a nozzle-diameter x surface-radius grid at a fixed
    pressure and family."""
    vectors = [FeatureVector(d, r, grid.pressure_kpa, grid.family)
               for d in grid.nozzle_diameters_mm for r in grid.radii_mm]
    forces = model.predict(encode_features(vectors)).reshape(
        len(grid.nozzle_diameters_mm), len(grid.radii_mm))
    return SweepSurface(
        nozzle_diameters_mm=tuple(grid.nozzle_diameters_mm),
        radii_mm=tuple(grid.radii_mm),
        family=grid.family,
        pressure_kpa=grid.pressure_kpa,
        forces_n=forces,
    )
