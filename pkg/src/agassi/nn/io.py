"""JSON (de)serialization of trained classifiers.

One document holds the estimator kind and hyperparameters, every weight
tensor (nested lists, row-major; floats round-trip exactly through
repr), the fitted feature scaler, and free-form metadata such as
accuracy and dataset hashes.
"""

from __future__ import annotations

import json

import numpy as np

from ..preprocessing import FeatureScaler
from .models import CnnClassifier, MlpClassifier

_KINDS = {"mlp": MlpClassifier, "cnn": CnnClassifier}


def save_model(path: str, model, scaler: FeatureScaler | None = None,
               metadata: dict | None = None) -> None:
    kind = {MlpClassifier: "mlp", CnnClassifier: "cnn"}[type(model)]
    doc = {
        "format": "agassi-model-v1",
        "kind": kind,
        "params": model.get_params(),
        "n_features": int(model.n_features_in_),
        "weights": [
            {"name": name, "shape": list(p.shape), "data": p.astype(np.float64).ravel().tolist()}
            for name, p, _ in model.net_.params_and_grads()
        ],
        "scaler": scaler.to_dict() if scaler is not None else None,
        "metadata": metadata or {},
    }
    if hasattr(model, "history_"):
        doc["history"] = model.history_
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_model(path: str):
    """Returns (model, scaler-or-None, metadata dict)."""
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != "agassi-model-v1":
        raise ValueError(f"{path}: not a model file")
    cls = _KINDS[doc["kind"]]
    model = cls(**doc["params"])
    rng = np.random.default_rng(0)
    model.net_ = model._build(doc["n_features"], rng)
    slots = model.net_.params_and_grads()
    if len(slots) != len(doc["weights"]):
        raise ValueError("weight count mismatch with architecture")
    for (name, p, _), saved in zip(slots, doc["weights"]):
        arr = np.array(saved["data"], dtype=np.float64).reshape(saved["shape"])
        p[...] = arr.astype(p.dtype)
    model.classes_ = np.arange(5)
    model.n_features_in_ = doc["n_features"]
    if "history" in doc:
        model.history_ = doc["history"]
    scaler = FeatureScaler.from_dict(doc["scaler"]) if doc.get("scaler") else None
    return model, scaler, doc.get("metadata", {})
