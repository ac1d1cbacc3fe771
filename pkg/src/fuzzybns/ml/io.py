"""Versioned model container: one .npz per trained model.

Stores the spec, standardization constants, parameters and buffers;
loading reproduces predictions bit-exactly.
"""

from __future__ import annotations

import json

import numpy as np

from ..errors import DataError
from .base import ClassifierSpec, TrainedModel

__all__ = ["save_model", "load_model"]

FORMAT_VERSION = 1


def save_model(model: TrainedModel, path) -> None:
    spec_doc = {
        "kind": model.spec.kind,
        "hyperparameters": model.spec.hyperparameters,
        "seed": model.spec.seed,
    }
    payload: dict[str, np.ndarray] = {
        "meta__version": np.array([FORMAT_VERSION], dtype=np.int64),
        "meta__spec": np.array(json.dumps(spec_doc, sort_keys=True)),
        "meta__n_features": np.array([model.n_features], dtype=np.int64),
    }
    for name, arr in model.params.items():
        payload[f"param__{name}"] = arr
    for name, arr in model.buffers.items():
        payload[f"buffer__{name}"] = arr
    if model.standardizer is not None:
        payload["std__mean"], payload["std__std"] = model.standardizer
    if model.training_log is not None:
        payload["meta__training_log"] = model.training_log
    with open(path, "wb") as fh:
        np.savez(fh, **payload)


def load_model(path) -> TrainedModel:
    with np.load(path, allow_pickle=False) as data:
        version = int(data["meta__version"][0])
        if version != FORMAT_VERSION:
            raise DataError(f"unsupported model container version {version}")
        spec_doc = json.loads(str(data["meta__spec"][()]))
        hp = spec_doc["hyperparameters"]
        if "hidden" in hp:
            hp["hidden"] = tuple(hp["hidden"])
        spec = ClassifierSpec(kind=spec_doc["kind"], hyperparameters=hp, seed=spec_doc["seed"])
        params = {}
        buffers = {}
        standardizer = None
        log = None
        for key in data.files:
            if key.startswith("param__"):
                params[key[len("param__"):]] = data[key]
            elif key.startswith("buffer__"):
                buffers[key[len("buffer__"):]] = data[key]
        if "std__mean" in data.files:
            standardizer = (data["std__mean"], data["std__std"])
        if "meta__training_log" in data.files:
            log = data["meta__training_log"]
        return TrainedModel(
            spec=spec,
            params=params,
            buffers=buffers,
            standardizer=standardizer,
            training_log=log,
            n_features=int(data["meta__n_features"][0]),
        )
