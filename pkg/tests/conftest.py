"""Shared fixtures: synthetic OHLC data and optional real-data discovery."""

from __future__ import annotations

import datetime as dt
import os
from pathlib import Path

import numpy as np
import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent

# The published results use the S&P 500 daily export 2010-11-01..2020-10-30.
# It is not redistributable with the repo; drop it at data/sp500.csv or point
# FUZZYBNS_SP500_CSV at it to activate the data-reproduction tests.
SP500_ENV = "FUZZYBNS_SP500_CSV"


def sp500_path() -> Path | None:
    env = os.environ.get(SP500_ENV)
    if env and Path(env).exists():
        return Path(env)
    default = REPO_ROOT / "data" / "sp500.csv"
    return default if default.exists() else None


def business_days(start: dt.date, end: dt.date) -> list[dt.date]:
    days = []
    d = start
    while d <= end:
        if d.weekday() < 5:
            days.append(d)
        d += dt.timedelta(days=1)
    return days


def synthetic_ohlc_csv(
    path: Path,
    start: dt.date = dt.date(2010, 11, 1),
    end: dt.date = dt.date(2020, 10, 30),
    seed: int = 7,
) -> Path:
    """Deterministic random-walk OHLC series in the Yahoo export schema."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    days = business_days(start, end)
    n = len(days)
    # mild drift, ~1.1% daily noise, occasional 2-4% drops
    steps = rng.normal(0.0004, 0.011, size=n)
    crash = rng.random(n) < 0.02
    steps[crash] -= rng.uniform(0.02, 0.04, size=int(crash.sum()))
    log_close = np.log(1500.0) + np.cumsum(steps)
    close = np.exp(log_close)
    open_ = np.empty(n)
    open_[0] = close[0] * (1 + rng.normal(0, 0.003))
    open_[1:] = close[:-1] * (1 + rng.normal(0, 0.003, size=n - 1))
    spread_lo = np.abs(rng.normal(0, 0.004, size=n))
    spread_hi = np.abs(rng.normal(0, 0.004, size=n))
    low = np.minimum(open_, close) * (1 - spread_lo)
    high = np.maximum(open_, close) * (1 + spread_hi)
    volume = rng.integers(1_000_000, 5_000_000, size=n)

    lines = ["Date,Open,High,Low,Close,Adj Close,Volume"]
    for i, day in enumerate(days):
        lines.append(
            f"{day},{open_[i]:.6f},{high[i]:.6f},{low[i]:.6f},"
            f"{close[i]:.6f},{close[i]:.6f},{volume[i]}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def synthetic_csv(tmp_path_factory) -> Path:
    return synthetic_ohlc_csv(tmp_path_factory.mktemp("data") / "synthetic_ohlc.csv")


@pytest.fixture(scope="session")
def short_csv(tmp_path_factory) -> Path:
    return synthetic_ohlc_csv(
        tmp_path_factory.mktemp("data") / "short_ohlc.csv",
        start=dt.date(2020, 1, 1),
        end=dt.date(2020, 6, 30),
        seed=11,
    )


@pytest.fixture(scope="session")
def real_csv() -> Path:
    path = sp500_path()
    if path is None:
        pytest.skip(
            "S&P 500 CSV not available; set FUZZYBNS_SP500_CSV or add data/sp500.csv "
            "(Yahoo Finance daily export 2010-11-01..2020-10-30)"
        )
    return path
