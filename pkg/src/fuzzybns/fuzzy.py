"""Triangular fuzzy-number algebra for daily prices.

A trading day's (low, close, high) is read as a triangular fuzzy number
whose kernel is the close.  The weighted expectation collapses the triple
back to a single daily price indicator; the weight ``lambda_f`` encodes
risk preference (0 = pessimistic, 1 = optimistic, 0.5 = neutral).

``lambda_f`` is deliberately not called ``lam``: that name is taken by the
mean-reversion rate of the variance process in :mod:`fuzzybns.bns`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DataError

__all__ = [
    "TriangularFuzzyNumber",
    "membership",
    "alpha_cut",
    "fuzzy_expectation",
    "fuzzify_bar",
]


@dataclass(frozen=True)
class TriangularFuzzyNumber:
    """Ordered triple (a_l, a_m, a_u); degenerate triples behave as crisp reals."""

    a_l: float
    a_m: float
    a_u: float

    def __post_init__(self):
        if not (self.a_l <= self.a_m <= self.a_u):
            raise ValueError(
                f"triangular fuzzy number requires a_l <= a_m <= a_u, "
                f"got ({self.a_l}, {self.a_m}, {self.a_u})"
            )

    @property
    def is_crisp(self) -> bool:
        return self.a_l == self.a_m == self.a_u


def _check_lambda_f(lambda_f: float) -> float:
    if not 0.0 <= lambda_f <= 1.0:
        raise ValueError(f"lambda_f must lie in [0, 1], got {lambda_f}")
    return float(lambda_f)


def membership(a: TriangularFuzzyNumber, x: float) -> float:
    """Piecewise-linear membership of ``x`` in ``a``.

    Returns 1 exactly at the kernel, 0 outside the open support interval.
    Degenerate edges (zero-width rising or falling leg) keep membership 1
    at the shared point.
    """
    if x == a.a_m:
        return 1.0
    if x <= a.a_l or x >= a.a_u:
        return 0.0
    if x < a.a_m:
        return (x - a.a_l) / (a.a_m - a.a_l)
    return (a.a_u - x) / (a.a_u - a.a_m)


def alpha_cut(a: TriangularFuzzyNumber, alpha: float) -> tuple[float, float]:
    """Closed interval of points with membership at least ``alpha``.

    alpha=0 returns the full support (a_l, a_u); alpha=1 the kernel.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    left = (1.0 - alpha) * a.a_l + alpha * a.a_m
    right = (1.0 - alpha) * a.a_u + alpha * a.a_m
    return (left, right)


def fuzzy_expectation(a: TriangularFuzzyNumber, lambda_f: float = 0.5) -> float:
    """Weighted expectation ((1-lambda_f)*a_l + a_m + lambda_f*a_u) / 2.

    Affine and nondecreasing in ``lambda_f`` with slope (a_u - a_l) / 2;
    a crisp triple returns its value for every weight.
    """
    w = _check_lambda_f(lambda_f)
    return ((1.0 - w) * a.a_l + a.a_m + w * a.a_u) / 2.0


def fuzzify_bar(low: float, close: float, high: float) -> TriangularFuzzyNumber:
    """Build the day's fuzzy price from its low/close/high.

    Rejects non-finite inputs and bars whose close falls outside
    [low, high]; callers that prefer repair over rejection clamp before
    calling (see ingest.clean).
    """
    for name, v in (("low", low), ("close", close), ("high", high)):
        if not math.isfinite(v):
            raise DataError(f"non-finite {name} price: {v!r}", bar=(low, close, high))
    if not (low <= close <= high):
        raise DataError(
            f"bar violates low <= close <= high: ({low}, {close}, {high})",
            bar=(low, close, high),
        )
    return TriangularFuzzyNumber(low, close, high)
