"""Fuzzy-preprocessed BN-S stochastic volatility modeling and the window
classification pipeline that extracts its deterministic mixing weight."""

from .bns import (
    BnsParams,
    SimPath,
    SubordinatorParams,
    correlation_classical,
    correlation_refined,
    epsilon,
    integrated_variance,
    realized_variance,
    simulate_classical,
    simulate_generalized,
    simulate_refined,
    simulate_subordinator,
)
from .errors import ConfigError, DataError, FuzzyBnsError, NumericError
from .fuzzy import (
    TriangularFuzzyNumber,
    alpha_cut,
    fuzzify_bar,
    fuzzy_expectation,
    membership,
)
from .ingest import OhlcBar, PriceSeries, clean, load_ohlc_csv, summary_stats

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "FuzzyBnsError",
    "ConfigError",
    "DataError",
    "NumericError",
    "TriangularFuzzyNumber",
    "membership",
    "alpha_cut",
    "fuzzy_expectation",
    "fuzzify_bar",
    "OhlcBar",
    "PriceSeries",
    "load_ohlc_csv",
    "clean",
    "summary_stats",
    "SubordinatorParams",
    "BnsParams",
    "SimPath",
    "simulate_subordinator",
    "simulate_classical",
    "simulate_generalized",
    "simulate_refined",
    "epsilon",
    "integrated_variance",
    "realized_variance",
    "correlation_classical",
    "correlation_refined",
]
