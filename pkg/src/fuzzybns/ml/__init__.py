"""Six from-scratch window classifiers behind one train/predict contract."""

from .base import (
    DEFAULT_HYPERPARAMETERS,
    KINDS,
    ClassifierSpec,
    TrainedModel,
    fit,
    predict,
    predict_proba,
)
from .gradcheck import grad_check
from .io import load_model, save_model

__all__ = [
    "KINDS",
    "DEFAULT_HYPERPARAMETERS",
    "ClassifierSpec",
    "TrainedModel",
    "fit",
    "predict",
    "predict_proba",
    "grad_check",
    "save_model",
    "load_model",
]
