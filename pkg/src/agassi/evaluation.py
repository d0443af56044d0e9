"""Scoring with the critical-surface rule, confusion matrices, and
probability trajectories along phase-diagram lines.

A prediction is correct when it matches the point's primary label, or
when the point sits on a critical surface and the prediction is any of
the coexisting labels.  Closed-valley points are the exception: there
the valley is the only admitted answer, so the classifier is forced to
actually learn that phase rather than lean on its neighbors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, SeriesConfig, generate_series
from .phases import LABEL_INDEX, LABEL_ORDER, PhaseLabel, PhasePoint, classify_phase


@dataclass(frozen=True)
class Evaluation:
    accuracy: float
    n_correct: int
    n_total: int
    confusion: np.ndarray  # (true, predicted) over the fixed label order


def prediction_correct(point: PhasePoint, predicted: PhaseLabel) -> bool:
    if predicted == point.label:
        return True
    if point.label == PhaseLabel.CLOSED_VALLEY:
        return False  # only the valley counts there
    return predicted in point.boundary


def evaluate_predictions(points, predicted_indices) -> Evaluation:
    n = len(points)
    if n != len(predicted_indices):
        raise ValueError("length mismatch")
    confusion = np.zeros((len(LABEL_ORDER), len(LABEL_ORDER)), dtype=np.int64)
    correct = 0
    for pt, pidx in zip(points, predicted_indices):
        pred = LABEL_ORDER[int(pidx)]
        confusion[LABEL_INDEX[pt.label], int(pidx)] += 1
        if prediction_correct(pt, pred):
            correct += 1
    return Evaluation(correct / n, correct, n, confusion)


def evaluate_model(model, test: Dataset, scaler=None) -> Evaluation:
    X = test.features
    if scaler is not None and not test.scaled:
        X = scaler.transform(X)
    pred = model.predict(X)
    return evaluate_predictions(test.points, pred)


def trajectory_points(
    fixed: dict[str, float], sweep_axis: str, lo: float, hi: float, n: int
) -> list[PhasePoint]:
    """Phase points along one axis with the other two held fixed."""
    axes = {"chi", "sigma", "lambda"}
    if sweep_axis not in axes:
        raise ValueError(f"sweep axis must be one of {sorted(axes)}")
    if set(fixed) != axes - {sweep_axis}:
        raise ValueError("fixed must set exactly the two remaining axes")
    values = np.linspace(lo, hi, n)
    pts = []
    for v in values:
        coords = dict(fixed)
        coords[sweep_axis] = float(v)
        pts.append(classify_phase(coords["chi"], coords["sigma"], coords["lambda"]))
    return pts


#: The six standard prediction panels: (fixed axes, swept axis).
PANELS = {
    "a": ({"sigma": 0.5, "lambda": 0.5}, "chi"),
    "b": ({"chi": 0.5, "lambda": 0.5}, "sigma"),
    "c": ({"chi": 0.5, "sigma": 0.5}, "lambda"),
    "d": ({"chi": 1.5, "lambda": 0.5}, "sigma"),
    "e": ({"chi": 1.5, "sigma": 0.5}, "lambda"),
    "f": ({"chi": 0.5, "sigma": 1.5}, "lambda"),
}


def predict_phase_trajectory(
    model,
    points: list[PhasePoint],
    cfg: SeriesConfig,
    scaler=None,
    n_jobs: int = 1,
) -> np.ndarray:
    """Class probabilities for each point's freshly generated series;
    returns an (n_points, 5) row-stochastic array."""
    from joblib import Parallel, delayed

    if n_jobs == 1:
        rows = [generate_series(pt, cfg) for pt in points]
    else:
        rows = Parallel(n_jobs=n_jobs)(delayed(generate_series)(pt, cfg) for pt in points)
    X = np.array(rows)
    if scaler is not None:
        X = scaler.transform(X)
    return model.predict_proba(X)
