import numpy as np
import pytest

from fuzzybns.errors import ConfigError
from fuzzybns.ml import ClassifierSpec, grad_check
from fuzzybns.ml.base import make_rng
from fuzzybns.ml.nets import init_params, loss_and_grads


@pytest.fixture(scope="module")
def batch():
    rng = np.random.default_rng(21)
    X = rng.normal(size=(3, 10))
    y = np.array([1, 0, 1])
    return X, y


def test_mlp_gradients(batch):
    X, y = batch
    assert grad_check(ClassifierSpec("mlp", seed=5), X, y, eps=1e-5) < 1e-4


def test_lstm_gradients(batch):
    X, y = batch
    assert grad_check(ClassifierSpec("lstm", seed=5), X, y, eps=1e-5) < 1e-4


def test_bn_lstm_gradients_training_mode(batch):
    X, y = batch
    assert grad_check(ClassifierSpec("lstm_bn", seed=5), X, y, eps=1e-5) < 1e-3


def test_unsupported_kind_rejected(batch):
    X, y = batch
    with pytest.raises(ConfigError):
        grad_check(ClassifierSpec("tree", seed=0), X, y)


def test_zero_weight_lstm_keeps_state_at_zero():
    hp = ClassifierSpec("lstm", seed=0).resolved()
    params, buffers = init_params("lstm", 10, hp, make_rng(0))
    for key in params:
        params[key] = np.zeros_like(params[key])
    X = np.zeros((4, 10))
    from fuzzybns.ml.nets import _lstm_forward

    logits, (step_cache, h_last) = _lstm_forward("lstm", params, buffers, hp, X,
                                                 train=False, update_running=False)
    assert np.all(h_last == 0.0)
    assert np.all(logits == 0.0)  # sigmoid head then gives exactly 0.5


def test_bn_identical_rows_normalize_to_zero():
    hp = ClassifierSpec("lstm_bn", seed=0).resolved()
    params, buffers = init_params("lstm_bn", 10, hp, make_rng(3))
    params["beta"] = np.zeros_like(params["beta"])
    X = np.ones((5, 10)) * 3.7  # identical rows: zero batch variance
    from fuzzybns.ml.nets import _bn_forward

    a = X[:, 0:1] @ params["Wx"]
    out, xhat, _ = _bn_forward(a, params["gamma"], params["beta"],
                               a.mean(axis=0), a.var(axis=0), hp["bn_epsilon"])
    # identical rows differ from their np.mean by at most an ulp
    assert np.allclose(xhat, 0.0, atol=1e-9)
    assert np.allclose(out, 0.0, atol=1e-9)


def test_gradcheck_leaves_running_buffers_untouched(batch):
    X, y = batch
    hp = ClassifierSpec("lstm_bn", seed=5).resolved()
    params, buffers = init_params("lstm_bn", X.shape[1], hp, make_rng(5))
    before = {k: v.copy() for k, v in buffers.items()}
    loss_and_grads("lstm_bn", params, buffers, hp, X, y, train=True, update_running=False)
    for key, val in before.items():
        assert np.array_equal(buffers[key], val)
