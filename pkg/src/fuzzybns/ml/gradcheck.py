"""Finite-difference verification of the analytic network gradients."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from . import nets
from .base import ClassifierSpec, make_rng

__all__ = ["grad_check"]

_CHECKABLE = ("mlp", "lstm", "lstm_bn")


def grad_check(spec: ClassifierSpec, X, y, eps: float = 1e-5) -> float:
    """Worst relative error between analytic and central-difference grads.

    Scans every entry of every parameter tensor at freshly initialized
    weights, in training mode (batch-norm uses batch statistics; running
    buffers are left untouched so repeated evaluations stay pure).
    """
    if spec.kind not in _CHECKABLE:
        raise ConfigError(f"grad_check supports {_CHECKABLE}, not {spec.kind!r}")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    hp = spec.resolved()
    params, buffers = nets.init_params(spec.kind, X.shape[1], hp, make_rng(spec.seed))

    def loss_only():
        loss, _ = nets.loss_and_grads(
            spec.kind, params, buffers, hp, X, y, train=True, update_running=False
        )
        return loss

    _, analytic = nets.loss_and_grads(
        spec.kind, params, buffers, hp, X, y, train=True, update_running=False
    )

    worst = 0.0
    for name, tensor in params.items():
        grad = analytic[name]
        flat = tensor.reshape(-1)
        gflat = grad.reshape(-1)
        for j in range(flat.size):
            orig = flat[j]
            flat[j] = orig + eps
            up = loss_only()
            flat[j] = orig - eps
            down = loss_only()
            flat[j] = orig
            numeric = (up - down) / (2.0 * eps)
            # the 1e-6 floor turns near-zero gradients into an absolute
            # comparison; difference quotients of an O(1) loss carry
            # ~ulp/eps cancellation noise, orders below that floor
            denom = max(abs(gflat[j]) + abs(numeric), 1e-6)
            worst = max(worst, abs(gflat[j] - numeric) / denom)
    return worst
