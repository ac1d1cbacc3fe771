"""Figure rendering for the report path.

Every emitted CSV that backs a chart gets a PNG rendered next to it.
The Agg backend is forced so the CLI works headless, and figures carry
no volatile metadata, keeping reruns byte-identical.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "save_line",
    "save_moving_averages",
    "save_yearly_box",
    "save_histogram",
    "save_monthly_bars",
    "save_heatmap",
    "save_sim_paths",
    "save_correlation_decay",
    "save_theta_summary",
]

_SAVE_KW = {"dpi": 120, "metadata": {"Software": None}}


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def save_line(path, x, y, title, ylabel, xlabel="date"):
    fig, ax = plt.subplots(figsize=(10, 4))
    ax.plot(x, y, lw=0.9)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    _finish(fig, path)


def save_moving_averages(path, dates, series_by_window, title):
    fig, ax = plt.subplots(figsize=(10, 4))
    for window, values in series_by_window.items():
        ax.plot(dates, values, lw=0.9, label=f"{window}-day")
    ax.set_title(title)
    ax.set_ylabel("fuzzy price expectation")
    ax.legend()
    _finish(fig, path)


def save_yearly_box(path, box_rows, title):
    stats = [
        {"whislo": lo, "q1": q1, "med": med, "q3": q3, "whishi": hi, "label": str(year), "fliers": []}
        for year, lo, q1, med, q3, hi in box_rows
    ]
    fig, ax = plt.subplots(figsize=(10, 4))
    ax.bxp(stats, showfliers=False)
    ax.set_title(title)
    ax.set_ylabel("fuzzy price expectation")
    _finish(fig, path)


def save_histogram(path, edges, counts, title, xlabel):
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.bar(edges[:-1], counts, width=np.diff(edges), align="edge", edgecolor="white")
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("count")
    _finish(fig, path)


def save_monthly_bars(path, rows, title):
    labels = [f"{y}-{m:02d}" for y, m, _ in rows]
    values = [v for _, _, v in rows]
    fig, ax = plt.subplots(figsize=(12, 4))
    ax.bar(range(len(values)), values)
    step = max(1, len(labels) // 24)
    ax.set_xticks(range(0, len(labels), step))
    ax.set_xticklabels(labels[::step], rotation=75, fontsize=7)
    ax.set_title(title)
    ax.set_ylabel("mean fuzzy price expectation")
    _finish(fig, path)


def save_heatmap(path, years, grid, title, value_label):
    fig, ax = plt.subplots(figsize=(9, 0.4 * len(years) + 2))
    masked = np.ma.masked_invalid(grid)
    mesh = ax.pcolormesh(masked, cmap="viridis")
    ax.set_xticks(np.arange(12) + 0.5)
    ax.set_xticklabels(
        ["Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"],
        fontsize=8,
    )
    ax.set_yticks(np.arange(len(years)) + 0.5)
    ax.set_yticklabels([str(y) for y in years], fontsize=8)
    ax.invert_yaxis()
    ax.set_title(title)
    fig.colorbar(mesh, ax=ax, label=value_label)
    _finish(fig, path)


def save_sim_paths(path, classical, refined):
    fig, axes = plt.subplots(3, 1, figsize=(10, 8), sharex=True)
    for sim_path, label in ((classical, "classical"), (refined, "refined")):
        axes[0].plot(sim_path.times, sim_path.s, lw=0.8, label=label)
        axes[1].plot(sim_path.times, sim_path.sigma2, lw=0.8, label=label)
        axes[2].plot(sim_path.times, sim_path.x, lw=0.8, label=label)
    axes[0].set_ylabel("price S")
    axes[1].set_ylabel("variance sigma^2")
    axes[2].set_ylabel("log-return X")
    axes[2].set_xlabel("t (years)")
    for ax in axes:
        ax.legend(fontsize=8)
    axes[0].set_title("Matched-seed classical vs refined paths")
    _finish(fig, path)


def save_correlation_decay(path, ts, classical, refined, s_fixed):
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(ts, classical, label="classical")
    ax.plot(ts, refined, label="refined")
    ax.set_xlabel("t (years)")
    ax.set_ylabel(f"Corr(X_t, X_s), s = {s_fixed:g}")
    ax.set_title("Log-return correlation decay")
    ax.legend()
    _finish(fig, path)


def save_theta_summary(path, split_names, theta_by_algorithm, theta_means):
    fig, ax = plt.subplots(figsize=(10, 4))
    letters = sorted(theta_by_algorithm)
    n = len(split_names)
    width = 0.8 / max(1, len(letters))
    for j, letter in enumerate(letters):
        offs = np.arange(n) + j * width - 0.4 + width / 2
        ax.bar(offs, theta_by_algorithm[letter], width=width, label=letter)
    ax.plot(np.arange(n), theta_means, "k.--", label="mean")
    ax.set_xticks(np.arange(n))
    ax.set_xticklabels(split_names)
    ax.set_ylabel("estimated mixing weight")
    ax.set_ylim(0, 1)
    ax.set_title("Theta estimates per split and algorithm")
    ax.legend(ncol=4, fontsize=8)
    _finish(fig, path)
