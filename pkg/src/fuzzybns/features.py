"""Feature construction: fuzzy price series, daily changes, realized
volatility, big-jump flags, and the overlapping 10-day window matrix with
binary targets.

A "big jump" is a day whose fuzzy price fell by at least ``c`` percent
versus the prior business day.  A window row is labeled 1 when at least
``min_jumps`` big jumps occur in the following ``lookahead`` days; rows
whose lookahead horizon runs past the data are excluded rather than
padded, because their labels cannot be computed honestly.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .fuzzy import fuzzify_bar, fuzzy_expectation
from .ingest import PriceSeries

__all__ = [
    "FuzzySeries",
    "WindowDataset",
    "build_fuzzy_series",
    "daily_changes",
    "realized_volatility",
    "volatility_return",
    "detect_big_jumps",
    "build_window_dataset",
    "split_by_date",
]

ANNUALIZATION = np.sqrt(252.0)


@dataclass(frozen=True)
class FuzzySeries:
    """Aligned (date, fuzzy expectation) pairs, strictly increasing dates."""

    dates: tuple[dt.date, ...]
    values: np.ndarray

    def __post_init__(self):
        if len(self.dates) != len(self.values):
            raise ValueError("dates and values must align")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise ValueError("dates must be strictly increasing")

    def __len__(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class WindowDataset:
    """N x window matrix of change percentages with binary targets.

    Consecutive rows overlap in window-1 entries; ``row_dates[r]`` is the
    date of row r's last element.
    """

    window: int
    rows: np.ndarray
    labels: np.ndarray
    row_dates: tuple[dt.date, ...]

    def __post_init__(self):
        n = self.rows.shape[0]
        if self.rows.ndim != 2 or self.rows.shape[1] != self.window:
            raise ValueError("rows must be N x window")
        if len(self.labels) != n or len(self.row_dates) != n:
            raise ValueError("labels and row_dates must align with rows")
        if not np.isin(self.labels, (0, 1)).all():
            raise ValueError("labels must be binary")

    def __len__(self) -> int:
        return self.rows.shape[0]


def build_fuzzy_series(series: PriceSeries, lambda_f: float = 0.5) -> FuzzySeries:
    """Fuzzify each bar as (low, close, high) and take its expectation."""
    values = np.array(
        [fuzzy_expectation(fuzzify_bar(b.low, b.close, b.high), lambda_f) for b in series.bars]
    )
    return FuzzySeries(dates=tuple(series.dates()), values=values)


def _pct_changes(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    base = values[:-1]
    if np.any(base == 0.0):
        raise ZeroDivisionError("series contains a zero value; percentage change undefined")
    changes = np.diff(values)
    return changes, 100.0 * changes / base


def daily_changes(f: FuzzySeries | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(absolute changes, percentage changes), each one element shorter."""
    values = f.values if isinstance(f, FuzzySeries) else np.asarray(f, dtype=float)
    if len(values) < 2:
        raise ValueError("need at least two observations to form changes")
    return _pct_changes(values)


def realized_volatility(change_pcts: np.ndarray, window: int) -> np.ndarray:
    """Trailing sample standard deviation (ddof=1) annualized by sqrt(252)."""
    arr = np.asarray(change_pcts, dtype=float)
    if window < 2:
        raise ValueError(f"window must be >= 2, got {window}")
    if len(arr) < window:
        raise ValueError(f"series of length {len(arr)} shorter than window {window}")
    panes = np.lib.stride_tricks.sliding_window_view(arr, window)
    return panes.std(axis=1, ddof=1) * ANNUALIZATION


def volatility_return(vol: np.ndarray) -> np.ndarray:
    """Day-over-day percentage change of a realized-volatility series."""
    arr = np.asarray(vol, dtype=float)
    if len(arr) < 2:
        raise ValueError("need at least two volatility observations")
    return _pct_changes(arr)[1]


def detect_big_jumps(change_pcts: np.ndarray, c: float) -> np.ndarray:
    """True where the change percentage is a drop of at least c percent."""
    if c <= 0.0:
        raise ValueError(f"jump threshold c must be > 0, got {c}")
    return np.asarray(change_pcts, dtype=float) <= -c


def build_window_dataset(
    change_pcts: np.ndarray,
    jumps: np.ndarray,
    window: int = 10,
    lookahead: int = 10,
    min_jumps: int = 2,
    dates: tuple[dt.date, ...] | None = None,
) -> WindowDataset:
    """Overlapping rows of ``window`` consecutive change percentages,
    labeled 1 when the following ``lookahead`` days hold at least
    ``min_jumps`` big jumps.

    ``dates`` aligns with ``change_pcts`` (date each change realized);
    when omitted the rows carry ordinal dates and cannot be split by
    calendar date.
    """
    cp = np.asarray(change_pcts, dtype=float)
    jmp = np.asarray(jumps, dtype=bool)
    if len(cp) != len(jmp):
        raise ValueError("change_pcts and jumps must align")
    if window < 1 or lookahead < 1 or min_jumps < 1:
        raise ValueError("window, lookahead and min_jumps must be >= 1")
    n_rows = len(cp) - window - lookahead + 1
    if n_rows < 1:
        raise ValueError(
            f"{len(cp)} observations cannot fill one window of {window} "
            f"with a lookahead of {lookahead}"
        )
    rows = np.lib.stride_tricks.sliding_window_view(cp, window)[:n_rows].copy()
    future = np.lib.stride_tricks.sliding_window_view(jmp, lookahead)[window:window + n_rows]
    labels = (future.sum(axis=1) >= min_jumps).astype(np.int64)
    if dates is None:
        row_dates = tuple(dt.date.fromordinal(1 + r + window - 1) for r in range(n_rows))
    else:
        if len(dates) != len(cp):
            raise ValueError("dates must align with change_pcts")
        row_dates = tuple(dates[r + window - 1] for r in range(n_rows))
    return WindowDataset(window=window, rows=rows, labels=labels, row_dates=row_dates)


def _subset(ds: WindowDataset, mask: np.ndarray) -> WindowDataset:
    idx = np.flatnonzero(mask)
    return WindowDataset(
        window=ds.window,
        rows=ds.rows[idx],
        labels=ds.labels[idx],
        row_dates=tuple(ds.row_dates[i] for i in idx),
    )


def split_by_date(
    ds: WindowDataset,
    train_start: dt.date,
    split_date: dt.date,
    end: dt.date,
) -> tuple[WindowDataset, WindowDataset]:
    """Train rows dated in [train_start, split_date], test in (split_date, end]."""
    if not train_start <= split_date <= end:
        raise ValueError(
            f"require train_start <= split_date <= end, got "
            f"{train_start}, {split_date}, {end}"
        )
    rd = np.array(ds.row_dates)
    train_mask = (rd >= train_start) & (rd <= split_date)
    test_mask = (rd > split_date) & (rd <= end)
    if not train_mask.any() or not test_mask.any():
        raise DataError(
            f"split {train_start}..{split_date}..{end} leaves an empty side "
            f"(train {int(train_mask.sum())}, test {int(test_mask.sum())})"
        )
    return _subset(ds, train_mask), _subset(ds, test_mask)
