"""Command-line orchestration.

Subcommands: fuzzify, plotdata, simulate, features, train, evaluate,
pipeline.  Every command reads an optional flat config file plus a few
override flags, writes only under --out, and is reproducible: the same
config and seed give byte-identical outputs.  Exit codes: 0 success,
2 config error, 3 data error, 4 numeric error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import bns, plots, summaries
from .config import RunConfig, apply_overrides, dump_config, load_config
from .errors import ConfigError, DataError, NumericError
from .evaluate import (
    ALGORITHM_LETTERS,
    run_experiment_suite,
    split_report_csv,
    theta_summary_doc,
)
from .features import (
    build_fuzzy_series,
    build_window_dataset,
    daily_changes,
    detect_big_jumps,
    realized_volatility,
    volatility_return,
)
from .fuzzy import fuzzify_bar, fuzzy_expectation
from .ingest import clean, load_ohlc_csv
from .ml import ClassifierSpec, fit, save_model

MOVING_AVERAGE_WINDOWS = (5, 42, 252)


class Outputs:
    """Collects files written under the output directory for the manifest."""

    def __init__(self, root: Path):
        self.root = root
        self.files: list[str] = []
        root.mkdir(parents=True, exist_ok=True)

    def path(self, rel: str) -> Path:
        self.files.append(rel)
        p = self.root / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        return p

    def write_text(self, rel: str, text: str) -> None:
        with open(self.path(rel), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)

    def manifest(self, complete: bool) -> None:
        digest = {}
        for rel in sorted(set(self.files)):
            p = self.root / rel
            if p.exists():
                digest[rel] = hashlib.sha256(p.read_bytes()).hexdigest()
        doc = {"complete": complete, "files": digest}
        with open(self.root / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
            json.dump(doc, fh, sort_keys=True, indent=2)
            fh.write("\n")


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load_series(cfg: RunConfig):
    if cfg.data_path is None:
        raise ConfigError("no input data configured; pass --data or set data.path")
    try:
        series = load_ohlc_csv(cfg.data_path, use_adj_close=cfg.use_adj_close)
    except FileNotFoundError as exc:
        raise DataError(f"cannot read {cfg.data_path}: {exc}") from exc
    except OSError as exc:
        raise DataError(f"cannot fetch {cfg.data_path}: {exc}") from exc
    for issue in series.issues:
        _info(f"{cfg.data_path}:{issue.line}: {issue.message}")
    cleaned, summary = clean(series, clamp_close=cfg.clamp_close)
    _info(
        f"loaded {summary.n_input} rows -> {summary.n_output} bars "
        f"(missing {summary.n_dropped_missing}, nonpositive {summary.n_dropped_nonpositive}, "
        f"duplicates {summary.n_deduplicated}, ordering {summary.n_dropped_ordering}, "
        f"clamped {summary.n_clamped})"
    )
    return cleaned


def _csv_lines(header: str, rows) -> str:
    return "\n".join([header, *rows]) + "\n"


def cmd_fuzzify(cfg: RunConfig, out: Outputs) -> None:
    from dataclasses import replace

    series = _load_series(cfg)
    rows = []
    expectations = []
    for bar in series.bars:
        tfn = fuzzify_bar(bar.low, bar.close, bar.high)
        e = fuzzy_expectation(tfn, cfg.lambda_f)
        expectations.append(e)
        rows.append(f"{bar.date},{tfn.a_l:.6f},{tfn.a_m:.6f},{tfn.a_u:.6f},{e:.6f}")
    series = replace(series, fuzzy_expectations=tuple(expectations))
    out.write_text("fuzzy.csv", _csv_lines("date,s_l,s_m,s_u,expectation", rows))
    _info(f"fuzzy.csv: {len(series.fuzzy_expectations)} rows at lambda_f={cfg.lambda_f}")


def cmd_plotdata(cfg: RunConfig, out: Outputs) -> None:
    series = _load_series(cfg)
    fuzzy = build_fuzzy_series(series, cfg.lambda_f)
    dates = list(fuzzy.dates)
    values = fuzzy.values

    # moving averages of the fuzzy price
    available = {}
    for window in MOVING_AVERAGE_WINDOWS:
        if len(values) >= window:
            available[window] = summaries.moving_average(values, window)
        else:
            _info(f"warning: {window}-day moving average omitted ({len(values)} points)")
    if available:
        header = "date," + ",".join(f"ma{w}" for w in available)
        rows = []
        for k, date in enumerate(dates):
            cells = [
                "" if np.isnan(available[w][k]) else f"{available[w][k]:.6f}" for w in available
            ]
            rows.append(f"{date}," + ",".join(cells))
        out.write_text("moving_averages.csv", _csv_lines(header, rows))
        plots.save_moving_averages(
            out.path("moving_averages.png"), dates, available, "Fuzzy price moving averages"
        )

    box = summaries.yearly_box_stats(dates, values)
    out.write_text(
        "yearly_box.csv",
        _csv_lines(
            "year,min,q1,median,q3,max",
            [f"{y},{lo:.6f},{q1:.6f},{med:.6f},{q3:.6f},{hi:.6f}" for y, lo, q1, med, q3, hi in box],
        ),
    )
    plots.save_yearly_box(out.path("yearly_box.png"), box, "Yearly fuzzy price distribution")

    def histogram(rel: str, data, title: str, xlabel: str) -> None:
        edges, counts = summaries.histogram_counts(data, bins=cfg.histogram_bins)
        out.write_text(
            f"{rel}.csv",
            _csv_lines(
                "bin_left,bin_right,count",
                [
                    f"{edges[i]:.6f},{edges[i + 1]:.6f},{int(counts[i])}"
                    for i in range(len(counts))
                ],
            ),
        )
        plots.save_histogram(out.path(f"{rel}.png"), edges, counts, title, xlabel)

    histogram("histogram_price", values, "Fuzzy price distribution", "fuzzy price expectation")

    monthly = summaries.monthly_mean(dates, values)
    out.write_text(
        "monthly_bars.csv",
        _csv_lines(
            "year,month,mean_expectation",
            [f"{y},{m},{v:.6f}" for y, m, v in monthly],
        ),
    )
    plots.save_monthly_bars(out.path("monthly_bars.png"), monthly, "Monthly mean fuzzy price")

    if len(values) < 2:
        _info("warning: too few points for change series; remaining outputs omitted")
        return
    changes, change_pcts = daily_changes(fuzzy)
    change_dates = dates[1:]
    histogram("histogram_change", changes, "Daily change in fuzzy price", "daily change")
    histogram(
        "histogram_change_pct",
        change_pcts,
        "Daily change percentage in fuzzy price",
        "daily change (%)",
    )

    if len(change_pcts) < cfg.vol_window:
        _info("warning: too few changes for realized volatility; volatility outputs omitted")
        return
    vol = realized_volatility(change_pcts, cfg.vol_window)
    vol_dates = change_dates[cfg.vol_window - 1:]
    out.write_text(
        "realized_vol.csv",
        _csv_lines("date,vol", [f"{d},{v:.6f}" for d, v in zip(vol_dates, vol)]),
    )
    plots.save_line(
        out.path("realized_vol.png"), vol_dates, vol,
        "Realized volatility of the fuzzy price", "annualized vol (%)",
    )
    years, grid = summaries.month_grid(vol_dates, vol)
    _write_grid(out, "realized_vol_heatmap", years, grid)
    plots.save_heatmap(
        out.path("realized_vol_heatmap.png"), years, grid,
        "Realized volatility by month", "annualized vol (%)",
    )

    if len(vol) >= 2 and np.all(vol != 0.0):
        vr = volatility_return(vol)
        vr_dates = vol_dates[1:]
        out.write_text(
            "vol_return.csv",
            _csv_lines("date,ret_pct", [f"{d},{v:.6f}" for d, v in zip(vr_dates, vr)]),
        )
        plots.save_line(
            out.path("vol_return.png"), vr_dates, vr,
            "Realized volatility return", "day-over-day change (%)",
        )
        years, grid = summaries.month_grid(vr_dates, vr)
        _write_grid(out, "vol_return_heatmap", years, grid)
        plots.save_heatmap(
            out.path("vol_return_heatmap.png"), years, grid,
            "Realized volatility return by month", "change (%)",
        )
    else:
        _info("warning: volatility-return series omitted (zero or too-short volatility)")


def _write_grid(out: Outputs, rel: str, years, grid) -> None:
    rows = []
    for i, year in enumerate(years):
        cells = ["" if np.isnan(v) else f"{v:.6f}" for v in grid[i]]
        rows.append(f"{year}," + ",".join(cells))
    out.write_text(
        f"{rel}.csv",
        _csv_lines("year," + ",".join(f"m{m:02d}" for m in range(1, 13)), rows),
    )


def _bns_params(cfg: RunConfig) -> bns.BnsParams:
    s = cfg.sim
    return bns.BnsParams(
        mu=s.mu, beta=s.beta, rho=s.rho, lam=s.lam, rho_prime=s.rho_prime,
        theta=s.theta, theta_prime=s.theta_prime,
        z=bns.SubordinatorParams(s.a, s.b),
        z_b=bns.SubordinatorParams(s.a_b, s.b_b),
    )


def cmd_simulate(cfg: RunConfig, out: Outputs) -> None:
    p = _bns_params(cfg)
    s = cfg.sim
    if s.stationary_start and p.z.mean_unit > 0.0:
        # each model on its own stationary variance level
        sig_classical = p.z.mean_unit
        sig_refined = (1.0 - p.theta_prime) * p.z.mean_unit + p.theta_prime * p.z_b.mean_unit
    else:
        sig_classical = sig_refined = s.sigma2_0
    classical = bns.simulate_classical(p, s.s0, sig_classical, s.horizon, s.dt, cfg.seed)
    refined = bns.simulate_refined(p, s.s0, sig_refined, s.horizon, s.dt, cfg.seed)
    classical.save_csv(out.path("classical_path.csv"))
    refined.save_csv(out.path("refined_path.csv"))
    plots.save_sim_paths(out.path("paths.png"), classical, refined)

    s_fixed = s.corr_s
    n_pts = 25
    ts, corr_c, corr_r = [], [], []
    for k in range(1, n_pts + 1):
        t = s_fixed + k * (s.horizon - s_fixed) / n_pts
        t = round(t / s.dt) * s.dt
        if t <= s_fixed + s.dt / 2:
            continue
        ts.append(t)
        corr_c.append(bns.correlation_classical(classical, t, s_fixed, p))
        corr_r.append(bns.correlation_refined(refined, t, s_fixed, p))
    out.write_text(
        "correlation_decay.csv",
        _csv_lines(
            "s,t,corr_classical,corr_refined",
            [
                f"{s_fixed:.10g},{t:.10g},{c:.10g},{r:.10g}"
                for t, c, r in zip(ts, corr_c, corr_r)
            ],
        ),
    )
    plots.save_correlation_decay(
        out.path("correlation_decay.png"), ts, corr_c, corr_r, s_fixed
    )
    _info(f"simulated {len(classical.times) - 1} steps; correlation table: {len(ts)} points")


def _window_dataset(cfg: RunConfig, series):
    fuzzy = build_fuzzy_series(series, cfg.lambda_f)
    _, change_pcts = daily_changes(fuzzy)
    jumps = detect_big_jumps(change_pcts, cfg.jump_threshold)
    return build_window_dataset(
        change_pcts,
        jumps,
        window=cfg.window,
        lookahead=cfg.lookahead,
        min_jumps=cfg.min_jumps,
        dates=fuzzy.dates[1:],
    )


def cmd_features(cfg: RunConfig, out: Outputs) -> None:
    dataset = _window_dataset(cfg, _load_series(cfg))
    header = "row_date," + ",".join(f"a{i + 1}" for i in range(cfg.window)) + ",label"
    rows = [
        f"{dataset.row_dates[r]},"
        + ",".join(f"{v:.10g}" for v in dataset.rows[r])
        + f",{int(dataset.labels[r])}"
        for r in range(len(dataset))
    ]
    out.write_text("windows.csv", _csv_lines(header, rows))
    _info(f"windows.csv: {len(dataset)} rows, {int(dataset.labels.sum())} labeled 1")


def cmd_train(cfg: RunConfig, out: Outputs, split_name: str | None = None) -> None:
    from .features import split_by_date

    series = _load_series(cfg)
    dataset = _window_dataset(cfg, series)
    names = [sp.name for sp in cfg.splits]
    if split_name is None:
        split = cfg.splits[-1]
    else:
        if split_name not in names:
            raise ConfigError(f"unknown split {split_name!r}; configured: {', '.join(names)}")
        split = cfg.splits[names.index(split_name)]
    train, _ = split_by_date(dataset, split.train_start, split.train_end, split.test_end)
    _info(f"training on split {split.name}: {len(train)} rows")
    for a_idx, (letter, kind) in enumerate(ALGORITHM_LETTERS):
        if kind not in cfg.algorithms:
            continue
        seed = int(np.random.SeedSequence([cfg.seed, names.index(split.name), a_idx]).generate_state(1)[0])
        spec = ClassifierSpec(kind=kind, hyperparameters=cfg.hyperparameters.get(kind, {}), seed=seed)
        model = fit(spec, train.rows, train.labels)
        save_model(model, out.path(f"model_{kind}.npz"))
        if model.training_log is not None:
            out.write_text(
                f"training_log_{kind}.csv",
                _csv_lines(
                    "epoch,loss",
                    [f"{e},{v:.10g}" for e, v in enumerate(model.training_log)],
                ),
            )
        _info(f"trained {letter} ({kind})")


def cmd_evaluate(cfg: RunConfig, out: Outputs) -> None:
    series = _load_series(cfg)
    results = run_experiment_suite(series, cfg)
    for res in results:
        out.write_text(f"report_{res.split.name}.csv", split_report_csv(res))
    doc = theta_summary_doc(results, cfg.theta_method)
    out.write_text("theta_summary.json", json.dumps(doc, sort_keys=True, indent=2) + "\n")
    letters = sorted(results[0].thetas) if results else []
    plots.save_theta_summary(
        out.path("theta_summary.png"),
        [res.split.name for res in results],
        {k: [res.thetas[k].value for res in results] for k in letters},
        [res.theta_mean for res in results],
    )
    _info(f"wrote {len(results)} split reports x {len(letters)} algorithms")


def cmd_pipeline(cfg: RunConfig, out: Outputs) -> None:
    cmd_fuzzify(cfg, out)
    cmd_features(cfg, out)
    cmd_evaluate(cfg, out)


_COMMANDS = {
    "fuzzify": cmd_fuzzify,
    "plotdata": cmd_plotdata,
    "simulate": cmd_simulate,
    "features": cmd_features,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "pipeline": cmd_pipeline,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzybns",
        description="Fuzzy-preprocessed BN-S model pipeline for stock-index data",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} stage")
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--data", help="input OHLC CSV path or URL")
        p.add_argument("--out", default="out", help="output directory (default: out)")
        p.add_argument("--seed", type=int, help="master seed override")
        p.add_argument("--lambda-f", type=float, dest="lambda_f",
                       help="fuzzy expectation weight in [0, 1]")
        p.add_argument("--jump-threshold", type=float, dest="jump_threshold",
                       help="big-jump threshold C in percent")
        if name == "train":
            p.add_argument("--split", help="named split to train on (default: last configured)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        cfg = apply_overrides(
            cfg,
            data_path=args.data,
            seed=args.seed,
            lambda_f=args.lambda_f,
            jump_threshold=args.jump_threshold,
        )
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    out = Outputs(Path(args.out))
    out.write_text("resolved_config.txt", dump_config(cfg))
    command = _COMMANDS[args.command]
    try:
        if args.command == "train":
            command(cfg, out, split_name=args.split)
        else:
            command(cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        if args.command == "pipeline":
            out.manifest(complete=False)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        if args.command == "pipeline":
            out.manifest(complete=False)
        return 3
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        if args.command == "pipeline":
            out.manifest(complete=False)
        return 4
    if args.command == "pipeline":
        out.manifest(complete=True)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
