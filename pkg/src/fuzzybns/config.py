"""Run configuration: flat ``key = value`` text with dotted section prefixes.

Grammar: one ``key = value`` pair per line; blank lines and ``#`` comments
ignored; keys are dotted (``section.name`` or ``ml.<kind>.<param>``);
dates are ``YYYY-MM-DD``; lists are comma-separated; booleans are
``true``/``false``.  Splits are ``train_start:train_end:test_end``.
Unknown keys are rejected.

The resolved copy written into an output directory round-trips: parsing
it reproduces the configuration exactly.  The output directory itself is
never part of the dump; it is supplied per invocation.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field, replace

from .errors import ConfigError
from .ml.base import DEFAULT_HYPERPARAMETERS

__all__ = ["SplitSpec", "SimConfig", "RunConfig", "DEFAULT_SPLITS", "parse_config", "dump_config", "load_config"]


@dataclass(frozen=True)
class SplitSpec:
    """Train rows dated in [train_start, train_end]; test in (train_end, test_end]."""

    name: str
    train_start: dt.date
    train_end: dt.date
    test_end: dt.date

    def __post_init__(self):
        if not self.train_start <= self.train_end <= self.test_end:
            raise ConfigError(
                f"split {self.name}: dates must be ordered "
                f"{self.train_start} <= {self.train_end} <= {self.test_end}"
            )


def _d(s: str) -> dt.date:
    return dt.date.fromisoformat(s)


# The ten dated windows published with the reference results, shortest first.
DEFAULT_SPLITS: tuple[SplitSpec, ...] = (
    SplitSpec("1y", _d("2019-11-01"), _d("2020-05-13"), _d("2020-10-30")),
    SplitSpec("2y", _d("2018-11-01"), _d("2020-05-13"), _d("2020-10-30")),
    SplitSpec("3y", _d("2017-11-01"), _d("2019-07-29"), _d("2020-10-30")),
    SplitSpec("4y", _d("2016-11-01"), _d("2019-07-29"), _d("2020-10-30")),
    SplitSpec("5y", _d("2015-11-01"), _d("2018-10-09"), _d("2020-10-30")),
    SplitSpec("6y", _d("2014-11-01"), _d("2018-10-09"), _d("2020-10-30")),
    SplitSpec("7y", _d("2013-11-01"), _d("2017-12-21"), _d("2020-10-30")),
    SplitSpec("8y", _d("2012-11-01"), _d("2017-12-21"), _d("2020-10-30")),
    SplitSpec("9y", _d("2011-11-01"), _d("2016-10-13"), _d("2020-10-30")),
    SplitSpec("10y", _d("2010-11-01"), _d("2016-10-13"), _d("2020-10-30")),
)

ALGORITHM_KINDS = ("logistic", "tree", "forest", "mlp", "lstm", "lstm_bn")


@dataclass(frozen=True)
class SimConfig:
    mu: float = 0.0
    beta: float = 0.0
    rho: float = -0.2
    lam: float = 2.0
    rho_prime: float = 0.5
    theta: float = 0.5
    theta_prime: float = 0.5
    a: float = 1.0
    b: float = 1.0
    a_b: float = 10.0
    b_b: float = 1.0
    s0: float = 100.0
    sigma2_0: float = 1.0
    stationary_start: bool = True
    horizon: float = 5.0
    dt: float = 1.0 / 252.0
    corr_s: float = 1.0

    def __post_init__(self):
        if self.dt <= 0 or self.horizon <= 0 or self.dt > self.horizon:
            raise ConfigError("sim requires 0 < dt <= horizon")
        if not 0 < self.corr_s < self.horizon:
            raise ConfigError("sim.corr_s must lie strictly inside (0, horizon)")


@dataclass(frozen=True)
class RunConfig:
    data_path: str | None = None
    use_adj_close: bool = False
    clamp_close: bool = False
    lambda_f: float = 0.5
    jump_threshold: float = 1.0
    window: int = 10
    lookahead: int = 10
    min_jumps: int = 2
    vol_window: int = 10
    histogram_bins: int = 50
    algorithms: tuple[str, ...] = ALGORITHM_KINDS
    hyperparameters: dict = field(default_factory=dict)
    splits: tuple[SplitSpec, ...] = DEFAULT_SPLITS
    theta_method: str = "mean_proba"
    seed: int = 20201030
    sim: SimConfig = field(default_factory=SimConfig)

    def __post_init__(self):
        if not 0.0 <= self.lambda_f <= 1.0:
            raise ConfigError(f"fuzzy.lambda_f must lie in [0, 1], got {self.lambda_f}")
        if self.jump_threshold <= 0:
            raise ConfigError(f"features.jump_threshold must be > 0, got {self.jump_threshold}")
        for name in ("window", "lookahead", "min_jumps", "vol_window", "histogram_bins"):
            if getattr(self, name) < 1:
                raise ConfigError(f"features.{name} must be >= 1")
        unknown = set(self.algorithms) - set(ALGORITHM_KINDS)
        if unknown:
            raise ConfigError(f"unknown algorithm(s): {', '.join(sorted(unknown))}")
        if not self.algorithms:
            raise ConfigError("ml.algorithms must not be empty")
        if self.theta_method not in ("mean_proba", "positive_fraction"):
            raise ConfigError(f"eval.theta_method invalid: {self.theta_method}")
        if not self.splits:
            raise ConfigError("at least one split is required")
        for kind, hp in self.hyperparameters.items():
            if kind not in ALGORITHM_KINDS:
                raise ConfigError(f"hyperparameters for unknown kind {kind!r}")
            unknown = set(hp) - set(DEFAULT_HYPERPARAMETERS[kind])
            if unknown:
                raise ConfigError(f"unknown ml.{kind} option(s): {', '.join(sorted(unknown))}")


_SCALAR_KEYS = {
    "data.path": ("data_path", str),
    "data.use_adj_close": ("use_adj_close", bool),
    "data.clamp_close": ("clamp_close", bool),
    "fuzzy.lambda_f": ("lambda_f", float),
    "features.jump_threshold": ("jump_threshold", float),
    "features.window": ("window", int),
    "features.lookahead": ("lookahead", int),
    "features.min_jumps": ("min_jumps", int),
    "features.vol_window": ("vol_window", int),
    "features.histogram_bins": ("histogram_bins", int),
    "eval.theta_method": ("theta_method", str),
    "run.seed": ("seed", int),
}

_SIM_FIELDS = (
    "mu", "beta", "rho", "lam", "rho_prime", "theta", "theta_prime",
    "a", "b", "a_b", "b_b", "s0", "sigma2_0", "stationary_start",
    "horizon", "dt", "corr_s",
)

# hyperparameters whose value may be "none"; the template gives the
# coercion target when a concrete value is supplied
_OPTIONAL_HP = {"max_features": 0, "class_weight": 0.0}


def _parse_bool(raw: str, key: str) -> bool:
    low = raw.lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")


def _coerce(raw: str, like, key: str):
    if isinstance(like, bool):
        return _parse_bool(raw, key)
    if isinstance(like, int):
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"{key}: expected an integer, got {raw!r}") from exc
    if isinstance(like, float):
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"{key}: expected a number, got {raw!r}") from exc
    if isinstance(like, tuple):
        try:
            return tuple(int(tok) for tok in raw.split(","))
        except ValueError as exc:
            raise ConfigError(f"{key}: expected comma-separated integers, got {raw!r}") from exc
    if like is None or isinstance(like, str):
        return raw
    raise ConfigError(f"{key}: unsupported value type")  # pragma: no cover


def parse_config(text: str) -> RunConfig:
    values: dict = {}
    hyper: dict[str, dict] = {}
    splits: list[SplitSpec] = []
    sim_values: dict = {}

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()

        if key in _SCALAR_KEYS:
            attr, typ = _SCALAR_KEYS[key]
            like = {str: "", int: 0, float: 0.0, bool: False}[typ]
            values[attr] = _coerce(raw, like, key)
        elif key == "ml.algorithms":
            values["algorithms"] = tuple(tok.strip() for tok in raw.split(",") if tok.strip())
        elif key.startswith("ml."):
            parts = key.split(".")
            if len(parts) != 3:
                raise ConfigError(f"line {lineno}: bad ml key {key!r}")
            _, kind, param = parts
            if kind not in ALGORITHM_KINDS:
                raise ConfigError(f"line {lineno}: unknown classifier kind {kind!r}")
            defaults = DEFAULT_HYPERPARAMETERS[kind]
            if param not in defaults:
                raise ConfigError(f"line {lineno}: unknown option ml.{kind}.{param}")
            like = defaults[param]
            if param in _OPTIONAL_HP and raw.lower() == "none":
                value = None
            elif like is None:
                value = _coerce(raw, _OPTIONAL_HP[param], key)
            else:
                value = _coerce(raw, like, key)
            hyper.setdefault(kind, {})[param] = value
        elif key.startswith("splits."):
            name = key[len("splits."):]
            toks = raw.split(":")
            if len(toks) != 3:
                raise ConfigError(
                    f"line {lineno}: split value must be train_start:train_end:test_end"
                )
            try:
                splits.append(SplitSpec(name, _d(toks[0]), _d(toks[1]), _d(toks[2])))
            except ValueError as exc:
                raise ConfigError(f"line {lineno}: bad date in split {name!r}: {exc}") from exc
        elif key.startswith("sim."):
            name = key[len("sim."):]
            if name not in _SIM_FIELDS:
                raise ConfigError(f"line {lineno}: unknown sim option {name!r}")
            template = False if name == "stationary_start" else 0.0
            sim_values[name] = _coerce(raw, template, key)
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")

    if hyper:
        values["hyperparameters"] = hyper
    if splits:
        values["splits"] = tuple(splits)
    if sim_values:
        values["sim"] = SimConfig(**sim_values)
    return RunConfig(**values)


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    return str(value)


def dump_config(cfg: RunConfig) -> str:
    """Deterministic resolved dump; parse_config(dump_config(c)) == c."""
    lines = []
    if cfg.data_path is not None:
        lines.append(f"data.path = {cfg.data_path}")
    lines.append(f"data.use_adj_close = {_fmt(cfg.use_adj_close)}")
    lines.append(f"data.clamp_close = {_fmt(cfg.clamp_close)}")
    lines.append(f"fuzzy.lambda_f = {_fmt(cfg.lambda_f)}")
    for key in ("jump_threshold", "window", "lookahead", "min_jumps", "vol_window", "histogram_bins"):
        lines.append(f"features.{key} = {_fmt(getattr(cfg, key))}")
    lines.append(f"ml.algorithms = {','.join(cfg.algorithms)}")
    for kind in sorted(cfg.hyperparameters):
        for param in sorted(cfg.hyperparameters[kind]):
            value = cfg.hyperparameters[kind][param]
            raw = "none" if value is None else _fmt(value)
            lines.append(f"ml.{kind}.{param} = {raw}")
    lines.append(f"eval.theta_method = {cfg.theta_method}")
    for split in cfg.splits:
        lines.append(
            f"splits.{split.name} = {split.train_start}:{split.train_end}:{split.test_end}"
        )
    for name in _SIM_FIELDS:
        lines.append(f"sim.{name} = {_fmt(getattr(cfg.sim, name))}")
    lines.append(f"run.seed = {cfg.seed}")
    return "\n".join(lines) + "\n"


def apply_overrides(cfg: RunConfig, **overrides) -> RunConfig:
    """Replace the given fields, revalidating the result."""
    fields = {k: v for k, v in overrides.items() if v is not None}
    return replace(cfg, **fields) if fields else cfg
