"""Presentation aggregates behind the plot-data outputs: moving averages,
yearly box statistics, histograms, monthly bars, and year-by-month grids."""

from __future__ import annotations

import numpy as np

__all__ = [
    "moving_average",
    "yearly_box_stats",
    "histogram_counts",
    "monthly_mean",
    "month_grid",
]


def moving_average(values, window: int) -> np.ndarray:
    """Trailing mean over the last ``window`` observations; NaN during warm-up.

    Entry k (for k >= window-1) is the mean of values[k-window+1 .. k].
    """
    arr = np.asarray(values, dtype=float)
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    out = np.full(len(arr), np.nan)
    if len(arr) >= window:
        kernel = np.ones(window) / window
        out[window - 1:] = np.convolve(arr, kernel, mode="valid")
    return out


def yearly_box_stats(dates, values) -> list[tuple[int, float, float, float, float, float]]:
    """(year, min, q1, median, q3, max) per calendar year present."""
    arr = np.asarray(values, dtype=float)
    years = np.array([d.year for d in dates])
    rows = []
    for year in sorted(set(years.tolist())):
        sel = arr[years == year]
        q1, med, q3 = np.percentile(sel, [25, 50, 75])
        rows.append((year, float(sel.min()), float(q1), float(med), float(q3), float(sel.max())))
    return rows


def histogram_counts(values, bins: int = 50) -> tuple[np.ndarray, np.ndarray]:
    """(bin edges, counts) over the data range."""
    arr = np.asarray(values, dtype=float)
    counts, edges = np.histogram(arr, bins=bins)
    return edges, counts


def monthly_mean(dates, values) -> list[tuple[int, int, float]]:
    """(year, month, mean) per calendar month present, chronological."""
    arr = np.asarray(values, dtype=float)
    keys = np.array([d.year * 100 + d.month for d in dates])
    rows = []
    for key in sorted(set(keys.tolist())):
        sel = arr[keys == key]
        rows.append((key // 100, key % 100, float(sel.mean())))
    return rows


def month_grid(dates, values) -> tuple[list[int], np.ndarray]:
    """Year-by-month matrix of means (12 columns); NaN where absent.

    Intended for heatmaps: one cell per (year, month) present in the data.
    """
    rows = monthly_mean(dates, values)
    years = sorted({y for y, _, _ in rows})
    grid = np.full((len(years), 12), np.nan)
    index = {year: i for i, year in enumerate(years)}
    for year, month, mean in rows:
        grid[index[year], month - 1] = mean
    return years, grid
