"""Loading and cleaning of daily OHLC bars from Yahoo-Finance style CSV.

Expected header tokens (any order, case-insensitive, whitespace-trimmed):
``Date, Open, High, Low, Close, Adj Close, Volume``.  Dates are
``YYYY-MM-DD``, decimals use ``.``, no thousands separators.  Missing
values (``null`` or empty cells) survive loading as NaN and are removed
by :func:`clean`; rows that cannot be parsed at all are collected as
issues with their line numbers.
"""

from __future__ import annotations

import datetime as dt
import io
import math
import urllib.request
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DataError

__all__ = [
    "OhlcBar",
    "PriceSeries",
    "RowIssue",
    "CleanSummary",
    "load_ohlc_csv",
    "fetch_csv",
    "clean",
    "summary_stats",
]

REQUIRED_COLUMNS = ("date", "open", "high", "low", "close", "adj close", "volume")


@dataclass(frozen=True)
class OhlcBar:
    """One trading day.  Prices may be NaN until the series is cleaned."""

    date: dt.date
    open: float
    high: float
    low: float
    close: float
    adj_close: float
    volume: int


@dataclass(frozen=True)
class RowIssue:
    line: int
    message: str


@dataclass(frozen=True)
class CleanSummary:
    n_input: int
    n_dropped_missing: int = 0
    n_dropped_nonpositive: int = 0
    n_deduplicated: int = 0
    n_dropped_ordering: int = 0
    n_clamped: int = 0
    n_output: int = 0


@dataclass(frozen=True)
class PriceSeries:
    """Date-ordered bars plus, once the pipeline has run, the aligned
    fuzzy-expectation values."""

    bars: tuple[OhlcBar, ...]
    fuzzy_expectations: tuple[float, ...] | None = None
    issues: tuple[RowIssue, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.fuzzy_expectations is not None and len(self.fuzzy_expectations) != len(self.bars):
            raise ValueError("fuzzy_expectations must align with bars")

    def __len__(self) -> int:
        return len(self.bars)

    def dates(self) -> list[dt.date]:
        return [b.date for b in self.bars]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(b, name) for b in self.bars], dtype=float)


def _parse_price(token: str) -> float:
    token = token.strip()
    if token == "" or token.lower() in ("null", "nan", "na"):
        return math.nan
    return float(token)


def _coerce_stream(source) -> io.TextIOBase:
    if isinstance(source, (str,)) and not source.startswith(("http://", "https://")):
        return open(source, "r", encoding="utf-8", newline="")
    if isinstance(source, str):
        return io.TextIOWrapper(io.BytesIO(fetch_csv(source)), encoding="utf-8")
    if isinstance(source, bytes):
        return io.TextIOWrapper(io.BytesIO(source), encoding="utf-8")
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            return io.TextIOWrapper(io.BytesIO(data), encoding="utf-8")
        return io.StringIO(data)
    return open(source, "r", encoding="utf-8", newline="")  # pathlib.Path


def fetch_csv(url: str, timeout: float = 30.0) -> bytes:
    """Plain GET of a CSV export; no authentication."""
    with urllib.request.urlopen(url, timeout=timeout) as resp:
        return resp.read()


def load_ohlc_csv(source, use_adj_close: bool = False) -> PriceSeries:
    """Parse a CSV export into a PriceSeries sorted ascending by date.

    ``use_adj_close`` substitutes the Adj Close column for the close
    (the raw Close is the default because the fuzzy triple mixes it with
    unadjusted highs/lows).  Unparseable rows are collected on
    ``PriceSeries.issues``; a file whose data rows all fail is an error.
    """
    stream = _coerce_stream(source)
    try:
        header_line = stream.readline()
        if not header_line:
            raise DataError("empty input: no header row")
        header = [h.strip().lower() for h in header_line.rstrip("\r\n").split(",")]
        col = {name: i for i, name in enumerate(header)}
        missing = [c for c in REQUIRED_COLUMNS if c not in col]
        if missing:
            raise DataError(f"missing required column(s): {', '.join(missing)}")

        bars: list[OhlcBar] = []
        issues: list[RowIssue] = []
        n_rows = 0
        for lineno, line in enumerate(stream, start=2):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            n_rows += 1
            parts = line.split(",")
            try:
                date = dt.date.fromisoformat(parts[col["date"]].strip())
                open_ = _parse_price(parts[col["open"]])
                high = _parse_price(parts[col["high"]])
                low = _parse_price(parts[col["low"]])
                close = _parse_price(parts[col["close"]])
                adj = _parse_price(parts[col["adj close"]])
                vol_token = parts[col["volume"]].strip()
                if vol_token == "" or vol_token.lower() == "null":
                    volume = 0
                    issues.append(RowIssue(lineno, "missing volume, recorded as 0"))
                else:
                    volume = int(float(vol_token))
                if volume < 0:
                    raise ValueError(f"negative volume {volume}")
            except (ValueError, IndexError) as exc:
                issues.append(RowIssue(lineno, f"unparseable row: {exc}"))
                continue
            if use_adj_close:
                close = adj
            bars.append(OhlcBar(date, open_, high, low, close, adj, volume))
    finally:
        stream.close()

    if n_rows > 0 and not bars:
        raise DataError(f"all {n_rows} data rows failed to parse")
    bars.sort(key=lambda b: b.date)  # stable: file order preserved per date
    return PriceSeries(bars=tuple(bars), issues=tuple(issues))


def _prices_ok(bar: OhlcBar) -> bool:
    vals = (bar.open, bar.high, bar.low, bar.close, bar.adj_close)
    return all(math.isfinite(v) for v in vals)


def _prices_positive(bar: OhlcBar) -> bool:
    return min(bar.open, bar.high, bar.low, bar.close, bar.adj_close) > 0.0


def clean(series: PriceSeries, clamp_close: bool = False) -> tuple[PriceSeries, CleanSummary]:
    """Drop unusable bars and resolve ordering violations.

    Rows with missing or nonpositive prices are dropped; duplicate dates
    keep the last occurrence; bars with close or open outside
    [low, high] are dropped, or clamped into range when ``clamp_close``
    is set.  Idempotent.  An empty result is fatal.
    """
    dropped_missing = dropped_nonpos = deduped = dropped_order = clamped = 0

    survivors: list[OhlcBar] = []
    for bar in series.bars:
        if not _prices_ok(bar):
            dropped_missing += 1
            continue
        if not _prices_positive(bar):
            dropped_nonpos += 1
            continue
        survivors.append(bar)

    by_date: dict[dt.date, OhlcBar] = {}
    for bar in survivors:
        if bar.date in by_date:
            deduped += 1
        by_date[bar.date] = bar

    out: list[OhlcBar] = []
    for date in sorted(by_date):
        bar = by_date[date]
        if bar.low > bar.high:
            dropped_order += 1
            continue
        bad_close = not (bar.low <= bar.close <= bar.high)
        bad_open = not (bar.low <= bar.open <= bar.high)
        if bad_close or bad_open:
            if clamp_close:
                bar = replace(
                    bar,
                    close=min(max(bar.close, bar.low), bar.high),
                    open=min(max(bar.open, bar.low), bar.high),
                )
                clamped += 1
            else:
                dropped_order += 1
                continue
        out.append(bar)

    if not out:
        raise DataError("cleaning removed every bar; no usable data")

    summary = CleanSummary(
        n_input=len(series.bars),
        n_dropped_missing=dropped_missing,
        n_dropped_nonpositive=dropped_nonpos,
        n_deduplicated=deduped,
        n_dropped_ordering=dropped_order,
        n_clamped=clamped,
        n_output=len(out),
    )
    return PriceSeries(bars=tuple(out)), summary


def summary_stats(values) -> dict[str, float]:
    """Mean/median/min/max; even-length medians average the midpoints."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("summary_stats requires a nonempty list")
    return {
        "mean": float(np.mean(arr)),
        "median": float(np.median(arr)),
        "min": float(np.min(arr)),
        "max": float(np.max(arr)),
    }
