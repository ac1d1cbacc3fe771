"""Classification metrics, theta aggregation, and the dated experiment suite.

The suite replays the full window pipeline over each configured
train/test split and each of the six algorithms (lettered A..F in the
report files), producing one report per (split, algorithm) plus a theta
estimate, deterministically under the configured seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .config import RunConfig, SplitSpec
from .errors import DataError
from .features import (
    build_fuzzy_series,
    build_window_dataset,
    daily_changes,
    detect_big_jumps,
    split_by_date,
)
from .ingest import PriceSeries
from .ml import ClassifierSpec, fit, predict, predict_proba

__all__ = [
    "ClassificationReport",
    "ThetaEstimate",
    "SplitResult",
    "ALGORITHM_LETTERS",
    "REPORT_ROWS",
    "classification_report",
    "estimate_theta",
    "run_experiment_suite",
    "split_report_csv",
    "theta_summary_doc",
]

ALGORITHM_LETTERS = (
    ("A", "logistic"),
    ("B", "tree"),
    ("C", "forest"),
    ("D", "mlp"),
    ("E", "lstm"),
    ("F", "lstm_bn"),
)

REPORT_ROWS = (
    "precision_theta0",
    "recall_theta0",
    "f1_theta0",
    "support_theta0",
    "precision_theta1",
    "recall_theta1",
    "f1_theta1",
    "support_theta1",
)

THETA_METHODS = ("mean_proba", "positive_fraction")


@dataclass(frozen=True)
class ClassificationReport:
    """Per-class precision/recall/f1/support; ``undefined`` lists the
    metrics whose denominator was zero (reported as 0)."""

    precision_0: float
    recall_0: float
    f1_0: float
    support_0: int
    precision_1: float
    recall_1: float
    f1_1: float
    support_1: int
    undefined: tuple[str, ...] = ()

    def row(self, name: str) -> float:
        return getattr(self, _ROW_ATTR[name])


_ROW_ATTR = {
    "precision_theta0": "precision_0",
    "recall_theta0": "recall_0",
    "f1_theta0": "f1_0",
    "support_theta0": "support_0",
    "precision_theta1": "precision_1",
    "recall_theta1": "recall_1",
    "f1_theta1": "f1_1",
    "support_theta1": "support_1",
}


@dataclass(frozen=True)
class ThetaEstimate:
    value: float
    per_window: np.ndarray
    method: str


def classification_report(y_true, y_pred) -> ClassificationReport:
    yt = np.asarray(y_true, dtype=np.int64)
    yp = np.asarray(y_pred, dtype=np.int64)
    if yt.shape != yp.shape:
        raise ValueError(f"length mismatch: {yt.shape} vs {yp.shape}")
    if yt.size == 0:
        raise ValueError("empty label vectors")

    undefined: list[str] = []
    values = {}
    for c in (0, 1):
        tp = int(np.sum((yt == c) & (yp == c)))
        fp = int(np.sum((yt != c) & (yp == c)))
        fn = int(np.sum((yt == c) & (yp != c)))
        if tp + fp > 0:
            precision = tp / (tp + fp)
        else:
            precision = 0.0
            undefined.append(f"precision_{c}")
        if tp + fn > 0:
            recall = tp / (tp + fn)
        else:
            recall = 0.0
            undefined.append(f"recall_{c}")
        f1 = 2.0 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        values[c] = (precision, recall, f1, tp + fn)
    return ClassificationReport(
        precision_0=values[0][0],
        recall_0=values[0][1],
        f1_0=values[0][2],
        support_0=values[0][3],
        precision_1=values[1][0],
        recall_1=values[1][1],
        f1_1=values[1][2],
        support_1=values[1][3],
        undefined=tuple(undefined),
    )


def estimate_theta(per_window_probas, method: str = "mean_proba") -> ThetaEstimate:
    probas = np.asarray(per_window_probas, dtype=float)
    if probas.size == 0:
        raise ValueError("cannot estimate theta from zero windows")
    if method == "mean_proba":
        value = float(probas.mean())
    elif method == "positive_fraction":
        value = float(np.mean(probas >= 0.5))
    else:
        raise ValueError(f"unknown theta method {method!r}; expected one of {THETA_METHODS}")
    return ThetaEstimate(value=min(1.0, max(0.0, value)), per_window=probas, method=method)


@dataclass(frozen=True)
class SplitResult:
    split: SplitSpec
    n_train: int
    n_test: int
    reports: dict[str, ClassificationReport]  # keyed by letter A..F
    thetas: dict[str, ThetaEstimate]

    @property
    def theta_mean(self) -> float:
        return float(np.mean([t.value for t in self.thetas.values()]))


def _model_seed(master: int, split_index: int, algo_index: int) -> int:
    return int(np.random.SeedSequence([master, split_index, algo_index]).generate_state(1)[0])


def run_experiment_suite(series: PriceSeries, cfg: RunConfig) -> list[SplitResult]:
    """Steps 1-8 over every configured split and algorithm."""
    fuzzy = build_fuzzy_series(series, cfg.lambda_f)
    _, change_pcts = daily_changes(fuzzy)
    jumps = detect_big_jumps(change_pcts, cfg.jump_threshold)
    dataset = build_window_dataset(
        change_pcts,
        jumps,
        window=cfg.window,
        lookahead=cfg.lookahead,
        min_jumps=cfg.min_jumps,
        dates=fuzzy.dates[1:],
    )

    results = []
    for s_idx, split in enumerate(cfg.splits):
        try:
            train, test = split_by_date(dataset, split.train_start, split.train_end, split.test_end)
        except DataError as exc:
            raise DataError(f"split {split.name}: {exc}") from exc
        reports: dict[str, ClassificationReport] = {}
        thetas: dict[str, ThetaEstimate] = {}
        for a_idx, (letter, kind) in enumerate(ALGORITHM_LETTERS):
            if kind not in cfg.algorithms:
                continue
            spec = ClassifierSpec(
                kind=kind,
                hyperparameters=cfg.hyperparameters.get(kind, {}),
                seed=_model_seed(cfg.seed, s_idx, a_idx),
            )
            try:
                model = fit(spec, train.rows, train.labels)
                probas = predict_proba(model, test.rows)
            except (DataError, ValueError) as exc:
                raise DataError(f"split {split.name}, algorithm {letter} ({kind}): {exc}") from exc
            reports[letter] = classification_report(test.labels, predict(model, test.rows))
            thetas[letter] = estimate_theta(probas, cfg.theta_method)
        results.append(
            SplitResult(
                split=split,
                n_train=len(train),
                n_test=len(test),
                reports=reports,
                thetas=thetas,
            )
        )
    return results


def split_report_csv(result: SplitResult) -> str:
    """One CSV per split: rows in the published table order, columns A..F."""
    letters = [letter for letter, _ in ALGORITHM_LETTERS if letter in result.reports]
    lines = ["metric," + ",".join(letters)]
    for row in REPORT_ROWS:
        cells = []
        for letter in letters:
            v = result.reports[letter].row(row)
            cells.append(str(int(v)) if row.startswith("support") else f"{v:.6f}")
        lines.append(f"{row}," + ",".join(cells))
    return "\n".join(lines) + "\n"


def theta_summary_doc(results: list[SplitResult], theta_method: str) -> dict:
    """JSON-ready summary: per-split, per-algorithm theta plus the
    unweighted cross-algorithm mean used as the headline estimate."""
    doc: dict = {"theta_method": theta_method, "splits": {}}
    for res in results:
        doc["splits"][res.split.name] = {
            "train_rows": res.n_train,
            "test_rows": res.n_test,
            "support_theta0": res.reports[next(iter(res.reports))].support_0 if res.reports else 0,
            "support_theta1": res.reports[next(iter(res.reports))].support_1 if res.reports else 0,
            "theta_by_algorithm": {k: round(t.value, 10) for k, t in sorted(res.thetas.items())},
            "theta_mean": round(res.theta_mean, 10),
        }
    return doc


def theta_summary_json(results: list[SplitResult], theta_method: str) -> str:
    return json.dumps(theta_summary_doc(results, theta_method), sort_keys=True, indent=2) + "\n"
