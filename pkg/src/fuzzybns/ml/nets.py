"""From-scratch feedforward and recurrent nets with analytic gradients.

The MLP runs two ReLU hidden layers into a sigmoid head.  The LSTM reads
the 10-day window as a length-10 sequence of scalars: sigmoid gates, tanh
cell output, final hidden state through a sigmoid readout.  The BN
variant normalizes the input-to-hidden pre-activations per timestep with
running statistics kept for inference.

All gradients are exact derivatives of mean binary cross-entropy; the
finite-difference harness in :mod:`fuzzybns.ml.gradcheck` verifies every
parameter tensor.
"""

from __future__ import annotations

import numpy as np

from ..errors import NumericError
from .logistic import bce_from_logits, class_weights, sigmoid

__all__ = ["train", "proba", "init_params", "loss_and_grads"]


# --- parameter initialization -------------------------------------------------

def init_params(kind: str, n_features: int, hp: dict, rng) -> tuple[dict, dict]:
    if kind == "mlp":
        h1, h2 = hp["hidden"]
        params = {
            "W1": rng.standard_normal((n_features, h1)) * np.sqrt(2.0 / n_features),
            "b1": np.zeros(h1),
            "W2": rng.standard_normal((h1, h2)) * np.sqrt(2.0 / h1),
            "b2": np.zeros(h2),
            "w3": rng.standard_normal(h2) * np.sqrt(1.0 / h2),
            "b3": np.zeros(1),
        }
        return params, {}

    hidden = hp["hidden_size"]
    scale = 1.0 / np.sqrt(hidden + 1.0)
    params = {
        "Wx": rng.standard_normal((1, 4 * hidden)) * scale,
        "Wh": rng.standard_normal((hidden, 4 * hidden)) * scale,
        "b": np.zeros(4 * hidden),
        "w_out": rng.standard_normal(hidden) * np.sqrt(1.0 / hidden),
        "b_out": np.zeros(1),
    }
    buffers = {}
    if kind == "lstm_bn":
        params["gamma"] = np.ones(4 * hidden)
        params["beta"] = np.zeros(4 * hidden)
        buffers = {
            "running_mean": np.zeros((n_features, 4 * hidden)),
            "running_var": np.ones((n_features, 4 * hidden)),
        }
    return params, buffers


# --- MLP ------------------------------------------------------------------


def _mlp_forward(params, X):
    z1 = X @ params["W1"] + params["b1"]
    a1 = np.maximum(z1, 0.0)
    z2 = a1 @ params["W2"] + params["b2"]
    a2 = np.maximum(z2, 0.0)
    logits = a2 @ params["w3"] + params["b3"][0]
    return logits, (X, z1, a1, z2, a2)


def _mlp_grads(params, cache, logits, y, sample_weight):
    X, z1, a1, z2, a2 = cache
    n = len(y)
    dlogit = (sigmoid(logits) - y) / n
    if sample_weight is not None:
        dlogit = dlogit * sample_weight
    grads = {
        "w3": a2.T @ dlogit,
        "b3": np.array([dlogit.sum()]),
    }
    da2 = np.outer(dlogit, params["w3"])
    dz2 = da2 * (z2 > 0.0)
    grads["W2"] = a1.T @ dz2
    grads["b2"] = dz2.sum(axis=0)
    da1 = dz2 @ params["W2"].T
    dz1 = da1 * (z1 > 0.0)
    grads["W1"] = X.T @ dz1
    grads["b1"] = dz1.sum(axis=0)
    return grads


# --- LSTM / BN-LSTM ---------------------------------------------------------


def _bn_forward(a, gamma, beta, mean, var, eps):
    inv_std = 1.0 / np.sqrt(var + eps)
    xhat = (a - mean) * inv_std
    return gamma * xhat + beta, xhat, inv_std


def _lstm_forward(kind, params, buffers, hp, X, train, update_running):
    n, steps = X.shape
    hidden = hp["hidden_size"]
    h = np.zeros((n, hidden))
    c = np.zeros((n, hidden))
    step_cache = []
    use_bn = kind == "lstm_bn"
    # input projections for every timestep at once (scalar inputs)
    pre = X[:, :, None] * params["Wx"][0]
    for t in range(steps):
        a = pre[:, t]
        if use_bn:
            eps = hp["bn_epsilon"]
            if train:
                mean = a.mean(axis=0)
                var = a.var(axis=0)
                if update_running:
                    m = hp["bn_momentum"]
                    buffers["running_mean"][t] = m * buffers["running_mean"][t] + (1 - m) * mean
                    buffers["running_var"][t] = m * buffers["running_var"][t] + (1 - m) * var
            else:
                mean = buffers["running_mean"][t]
                var = buffers["running_var"][t]
            a_in, xhat, inv_std = _bn_forward(a, params["gamma"], params["beta"], mean, var, eps)
        else:
            a_in, xhat, inv_std = a, None, None
        z = a_in + h @ params["Wh"] + params["b"]
        # gate layout [i, f, o, g]: one sigmoid over the first three blocks
        ifo = sigmoid(z[:, :3 * hidden])
        i = ifo[:, :hidden]
        f = ifo[:, hidden:2 * hidden]
        o = ifo[:, 2 * hidden:]
        g = np.tanh(z[:, 3 * hidden:])
        c_prev, h_prev = c, h
        c = f * c_prev + i * g
        tanh_c = np.tanh(c)
        h = o * tanh_c
        step_cache.append((X[:, t:t + 1], h_prev, c_prev, i, f, g, o, tanh_c, xhat, inv_std))
    logits = h @ params["w_out"] + params["b_out"][0]
    if not np.isfinite(logits).all():
        raise NumericError("nonfinite activations in recurrent forward pass")
    return logits, (step_cache, h)


def _lstm_grads(kind, params, hp, cache, logits, y, batch_train, sample_weight):
    step_cache, h_last = cache
    n = len(y)
    hidden = hp["hidden_size"]
    use_bn = kind == "lstm_bn"

    dlogit = (sigmoid(logits) - y) / n
    if sample_weight is not None:
        dlogit = dlogit * sample_weight
    grads = {
        "w_out": h_last.T @ dlogit,
        "b_out": np.array([dlogit.sum()]),
        "Wx": np.zeros_like(params["Wx"]),
        "Wh": np.zeros_like(params["Wh"]),
        "b": np.zeros_like(params["b"]),
    }
    if use_bn:
        grads["gamma"] = np.zeros_like(params["gamma"])
        grads["beta"] = np.zeros_like(params["beta"])

    dh = np.outer(dlogit, params["w_out"])
    dc = np.zeros((n, hidden))
    for t in reversed(range(len(step_cache))):
        xt, h_prev, c_prev, i, f, g, o, tanh_c, xhat, inv_std = step_cache[t]
        do = dh * tanh_c
        dc = dc + dh * o * (1.0 - tanh_c**2)
        di = dc * g
        dg = dc * i
        df = dc * c_prev
        dc = dc * f  # flows to c_{t-1}
        dz = np.empty((dh.shape[0], 4 * hidden))
        dz[:, :hidden] = di * i * (1.0 - i)
        dz[:, hidden:2 * hidden] = df * f * (1.0 - f)
        dz[:, 2 * hidden:3 * hidden] = do * o * (1.0 - o)
        dz[:, 3 * hidden:] = dg * (1.0 - g**2)
        grads["Wh"] += h_prev.T @ dz
        grads["b"] += dz.sum(axis=0)
        dh = dz @ params["Wh"].T
        if use_bn:
            grads["gamma"] += (dz * xhat).sum(axis=0)
            grads["beta"] += dz.sum(axis=0)
            dxhat = dz * params["gamma"]
            if batch_train:
                # backprop through batch statistics (training-mode normalization)
                m = dz.shape[0]
                da = (inv_std / m) * (
                    m * dxhat - dxhat.sum(axis=0) - xhat * (dxhat * xhat).sum(axis=0)
                )
            else:
                da = dxhat * inv_std
            grads["Wx"] += xt.T @ da
        else:
            grads["Wx"] += xt.T @ dz
    return grads


# --- shared training loop -----------------------------------------------------


def loss_and_grads(kind, params, buffers, hp, X, y, train=True, update_running=False):
    """Mean BCE (optionally class-weighted) and its exact gradients for one batch."""
    yf = y.astype(float)
    sw = class_weights(y, hp.get("class_weight"))
    if kind == "mlp":
        logits, cache = _mlp_forward(params, X)
        return bce_from_logits(logits, yf, sw), _mlp_grads(params, cache, logits, yf, sw)
    logits, cache = _lstm_forward(kind, params, buffers, hp, X, train, update_running)
    return (
        bce_from_logits(logits, yf, sw),
        _lstm_grads(kind, params, hp, cache, logits, yf, batch_train=train, sample_weight=sw),
    )


def train(kind, X, y, hp, rng) -> tuple[dict, dict, np.ndarray]:
    params, buffers = init_params(kind, X.shape[1], hp, rng)
    n = len(y)
    batch = min(hp["batch_size"], n)
    lr = hp["learning_rate"]
    log = np.empty(hp["epochs"])
    for epoch in range(hp["epochs"]):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, batch):
            idx = order[start:start + batch]
            loss, grads = loss_and_grads(
                kind, params, buffers, hp, X[idx], y[idx], train=True, update_running=True
            )
            if not np.isfinite(loss):
                raise NumericError(f"nonfinite loss at epoch {epoch}, batch offset {start}")
            total += loss * len(idx)
            for key, grad in grads.items():
                params[key] -= lr * grad
        log[epoch] = total / n
    return params, buffers, log


def proba(kind, params, buffers, hp, X) -> np.ndarray:
    if kind == "mlp":
        logits, _ = _mlp_forward(params, X)
    else:
        logits, _ = _lstm_forward(kind, params, buffers, hp, X, train=False, update_running=False)
    return sigmoid(logits)
