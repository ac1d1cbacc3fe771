"""Common train/predict contract for the six window classifiers.

Every classifier consumes an N x window matrix of change percentages and
binary targets, and yields class-1 probabilities.  Training is
deterministic given (spec, seed, data); each fit call owns a Philox
generator seeded from the spec.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, DataError

__all__ = ["ClassifierSpec", "TrainedModel", "KINDS", "fit", "predict_proba", "predict"]

KINDS = ("logistic", "tree", "forest", "mlp", "lstm", "lstm_bn")

DEFAULT_HYPERPARAMETERS: dict[str, dict] = {
    "logistic": {
        "learning_rate": 0.1,
        "epochs": 500,
        "l2": 1e-4,
        "standardize": True,
        "class_weight": None,
    },
    "tree": {"max_depth": 6, "min_leaf": 5, "standardize": False},
    "forest": {
        "n_trees": 100,
        "bootstrap": True,
        "max_features": 3,
        "max_depth": 6,
        "min_leaf": 5,
        "standardize": True,
    },
    "mlp": {
        "hidden": (16, 8),
        "learning_rate": 0.01,
        "epochs": 300,
        "batch_size": 32,
        "standardize": True,
        "class_weight": None,
    },
    "lstm": {
        "hidden_size": 16,
        "learning_rate": 0.15,
        "epochs": 80,
        "batch_size": 128,
        "standardize": True,
        "class_weight": None,
    },
    "lstm_bn": {
        "hidden_size": 16,
        "learning_rate": 0.15,
        "epochs": 80,
        "batch_size": 128,
        "bn_epsilon": 1e-5,
        "bn_momentum": 0.9,
        "standardize": True,
        "class_weight": None,
    },
}

_ITERATIVE = ("logistic", "mlp", "lstm", "lstm_bn")


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown classifier kind {self.kind!r}; expected one of {KINDS}")
        unknown = set(self.hyperparameters) - set(DEFAULT_HYPERPARAMETERS[self.kind])
        if unknown:
            raise ConfigError(
                f"unknown hyperparameter(s) for {self.kind}: {', '.join(sorted(unknown))}"
            )

    def resolved(self) -> dict:
        merged = dict(DEFAULT_HYPERPARAMETERS[self.kind])
        merged.update(self.hyperparameters)
        _validate_hyperparameters(self.kind, merged)
        return merged


def _validate_hyperparameters(kind: str, hp: dict) -> None:
    def positive(name):
        if hp[name] <= 0:
            raise ConfigError(f"{kind}.{name} must be > 0, got {hp[name]}")

    if "class_weight" in hp and hp["class_weight"] is not None and hp["class_weight"] <= 0:
        raise ConfigError(f"{kind}.class_weight must be > 0 or none, got {hp['class_weight']}")
    if kind == "logistic":
        positive("learning_rate")
        if hp["epochs"] < 0:
            raise ConfigError(f"logistic.epochs must be >= 0, got {hp['epochs']}")
        if hp["l2"] < 0:
            raise ConfigError(f"logistic.l2 must be >= 0, got {hp['l2']}")
    elif kind in ("tree", "forest"):
        positive("max_depth")
        positive("min_leaf")
        if kind == "forest":
            positive("n_trees")
            if hp["max_features"] is not None and hp["max_features"] < 1:
                raise ConfigError("forest.max_features must be >= 1 or None")
    elif kind == "mlp":
        positive("learning_rate")
        positive("epochs")
        positive("batch_size")
        hidden = tuple(hp["hidden"])
        if not hidden or any(h < 1 for h in hidden):
            raise ConfigError(f"mlp.hidden must be positive sizes, got {hp['hidden']}")
        hp["hidden"] = hidden
    elif kind in ("lstm", "lstm_bn"):
        positive("learning_rate")
        positive("epochs")
        positive("batch_size")
        positive("hidden_size")
        if kind == "lstm_bn":
            positive("bn_epsilon")
            if not 0.0 <= hp["bn_momentum"] < 1.0:
                raise ConfigError("lstm_bn.bn_momentum must lie in [0, 1)")


@dataclass
class TrainedModel:
    """Learned state: flat array dict plus standardization constants.

    ``buffers`` holds non-gradient state (batch-norm running statistics);
    ``training_log`` the per-epoch loss for iterative kinds.
    """

    spec: ClassifierSpec
    params: dict[str, np.ndarray]
    buffers: dict[str, np.ndarray] = field(default_factory=dict)
    standardizer: tuple[np.ndarray, np.ndarray] | None = None
    training_log: np.ndarray | None = None
    n_features: int = 0


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def _check_training_data(kind: str, X: np.ndarray, y: np.ndarray) -> None:
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError(f"X must be 2-D aligned with y, got {X.shape} and {y.shape}")
    if len(y) < 2:
        raise DataError(f"need at least 2 training rows, got {len(y)}")
    if not np.isfinite(X).all():
        raise ValueError("training features must be finite")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("targets must be binary 0/1")
    if kind in _ITERATIVE and len(np.unique(y)) < 2:
        raise DataError(f"{kind} requires both classes in the training data")


def _fit_standardizer(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    return mean, std


def fit(spec: ClassifierSpec, X, y) -> TrainedModel:
    """Train a classifier of ``spec.kind``; deterministic given (spec, data)."""
    from . import logistic, nets, tree

    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    _check_training_data(spec.kind, X, y)
    hp = spec.resolved()
    rng = make_rng(spec.seed)

    standardizer = None
    X_fit = X
    if hp.get("standardize"):
        standardizer = _fit_standardizer(X)
        X_fit = (X - standardizer[0]) / standardizer[1]

    if spec.kind == "logistic":
        params, log = logistic.train(X_fit, y, hp)
        buffers = {}
    elif spec.kind == "tree":
        params = tree.train_tree(X_fit, y, hp)
        buffers, log = {}, None
    elif spec.kind == "forest":
        params = tree.train_forest(X_fit, y, hp, spec.seed)
        buffers, log = {}, None
    else:
        params, buffers, log = nets.train(spec.kind, X_fit, y, hp, rng)

    return TrainedModel(
        spec=spec,
        params=params,
        buffers=buffers,
        standardizer=standardizer,
        training_log=log,
        n_features=X.shape[1],
    )


def predict_proba(model: TrainedModel, X) -> np.ndarray:
    """Class-1 probability per row, in [0, 1]."""
    from . import logistic, nets, tree

    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise ValueError(
            f"feature width {X.shape[1] if X.ndim == 2 else '?'} does not match "
            f"training width {model.n_features}"
        )
    if model.standardizer is not None:
        mean, std = model.standardizer
        X = (X - mean) / std

    kind = model.spec.kind
    if kind == "logistic":
        return logistic.proba(model.params, X)
    if kind == "tree":
        return tree.proba_tree(model.params, X)
    if kind == "forest":
        return tree.proba_forest(model.params, X)
    return nets.proba(kind, model.params, model.buffers, model.spec.resolved(), X)


def predict(model: TrainedModel, X, threshold: float = 0.5) -> np.ndarray:
    """Hard labels: 1 iff probability >= threshold (boundary inclusive)."""
    if not 0.0 <= threshold <= 1.0:
        raise ConfigError(f"threshold must lie in [0, 1], got {threshold}")
    return (predict_proba(model, X) >= threshold).astype(np.int64)
