"""Feature standardization fitted on training rows only."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .dataset import Dataset

# Columns whose spread is below this are left untouched by transform
# (centering a constant column would only amplify noise).
_VAR_FLOOR = 1e-12


class FeatureScaler(TransformerMixin, BaseEstimator):
    """Per-feature zero-mean unit-variance scaling.

    Degenerate (near-constant) features pass through unchanged rather
    than being centered, so a flat early-time correlation column keeps
    its value.
    """

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        mean = X.mean(axis=0)
        std = X.std(axis=0)
        passthrough = std < _VAR_FLOOR
        mean[passthrough] = 0.0
        std[passthrough] = 1.0
        self.mean_ = mean
        self.scale_ = std
        self.passthrough_ = passthrough
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "mean_")
        X = np.asarray(X, dtype=np.float64)
        if X.shape[0] == 0:  # empty split (e.g. no validation part)
            return X.reshape(0, self.n_features_in_)
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"expected {self.n_features_in_} features, got {X.shape[1]}"
            )
        return (X - self.mean_) / self.scale_

    def to_dict(self) -> dict:
        check_is_fitted(self, "mean_")
        return {"mean": self.mean_.tolist(), "scale": self.scale_.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureScaler":
        sc = cls()
        sc.mean_ = np.array(d["mean"], dtype=np.float64)
        sc.scale_ = np.array(d["scale"], dtype=np.float64)
        sc.passthrough_ = sc.scale_ == 1.0
        sc.n_features_in_ = sc.mean_.shape[0]
        return sc


def standardize_features(
    train: Dataset, *others: Dataset
) -> tuple[FeatureScaler, Dataset, ...]:
    """Fit a scaler on the training rows and apply it to every given set.

    Refuses already-scaled inputs: re-standardizing standardized features
    is a silent protocol error, so each Dataset carries a guard flag.
    """
    for ds in (train, *others):
        if ds.scaled:
            raise ValueError("dataset is already standardized (guard flag set)")
    scaler = FeatureScaler().fit(train.features)

    def apply(ds: Dataset) -> Dataset:
        return Dataset(
            points=ds.points,
            features=scaler.transform(ds.features),
            config=ds.config,
            scaled=True,
        )

    return (scaler, apply(train)) + tuple(apply(ds) for ds in others)
