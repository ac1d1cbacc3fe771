"""Logistic regression by full-batch gradient descent on cross-entropy."""

from __future__ import annotations

import numpy as np

__all__ = ["train", "proba", "sigmoid", "bce_from_logits"]


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def bce_from_logits(z: np.ndarray, y: np.ndarray, sample_weight=None) -> float:
    """Mean binary cross-entropy, computed stably from logits."""
    terms = np.logaddexp(0.0, z) - z * y
    if sample_weight is not None:
        terms = terms * sample_weight
    return float(np.mean(terms))


def class_weights(y: np.ndarray, class_weight) -> np.ndarray | None:
    """Per-sample loss multipliers: ``class_weight`` on the positives."""
    if class_weight is None:
        return None
    return np.where(y == 1, float(class_weight), 1.0)


def train(X: np.ndarray, y: np.ndarray, hp: dict):
    """Weights start at zero (convex problem, no randomness needed).

    The per-epoch log records the loss before each update, so with a
    sufficiently small step it is nonincreasing.
    """
    n, d = X.shape
    w = np.zeros(d)
    b = 0.0
    lr = hp["learning_rate"]
    l2 = hp["l2"]
    log = np.empty(hp["epochs"])
    yf = y.astype(float)
    sw = class_weights(y, hp.get("class_weight"))
    for epoch in range(hp["epochs"]):
        z = X @ w + b
        log[epoch] = bce_from_logits(z, yf, sw) + 0.5 * l2 * float(w @ w)
        residual = sigmoid(z) - yf
        if sw is not None:
            residual = residual * sw
        w -= lr * (X.T @ residual / n + l2 * w)
        b -= lr * float(residual.mean())
    return {"w": w, "b": np.array([b])}, log


def proba(params: dict, X: np.ndarray) -> np.ndarray:
    return sigmoid(X @ params["w"] + params["b"][0])
