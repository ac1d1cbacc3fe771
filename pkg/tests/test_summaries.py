import datetime as dt

import numpy as np
import pytest

from fuzzybns.summaries import (
    histogram_counts,
    month_grid,
    monthly_mean,
    moving_average,
    yearly_box_stats,
)


def dates_from(start, n, step_days=1):
    return [start + dt.timedelta(days=i * step_days) for i in range(n)]


class TestMovingAverage:
    def test_constant_series_stays_constant(self):
        ma = moving_average(np.full(300, 7.25), 252)
        assert np.all(np.isnan(ma[:251]))
        assert np.allclose(ma[251:], 7.25)

    def test_entry_k_is_trailing_mean(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=400)
        ma = moving_average(x, 252)
        for k in (251, 300, 399):
            assert ma[k] == pytest.approx(x[k - 251:k + 1].mean(), rel=1e-10)

    def test_short_series_is_all_nan(self):
        assert np.all(np.isnan(moving_average(np.ones(10), 42)))


class TestYearlyBox:
    def test_one_row_per_year_with_quartiles(self):
        days = dates_from(dt.date(2018, 6, 1), 500)
        values = np.arange(500, dtype=float)
        rows = yearly_box_stats(days, values)
        assert [r[0] for r in rows] == [2018, 2019]
        year_mask = np.array([d.year == 2018 for d in days])
        sel = values[year_mask]
        q1, med, q3 = np.percentile(sel, [25, 50, 75])
        assert rows[0][1:] == (sel.min(), q1, med, q3, sel.max())


class TestHistogram:
    def test_counts_sum_to_n(self):
        x = np.random.default_rng(5).normal(size=777)
        edges, counts = histogram_counts(x, bins=50)
        assert counts.sum() == 777
        assert len(edges) == 51


class TestMonthly:
    def test_one_cell_per_present_month(self):
        days = [dt.date(2020, 1, 15), dt.date(2020, 1, 20), dt.date(2020, 3, 2),
                dt.date(2021, 3, 9)]
        rows = monthly_mean(days, [1.0, 3.0, 5.0, 9.0])
        assert rows == [(2020, 1, 2.0), (2020, 3, 5.0), (2021, 3, 9.0)]
        years, grid = month_grid(days, [1.0, 3.0, 5.0, 9.0])
        assert years == [2020, 2021]
        assert grid.shape == (2, 12)
        assert grid[0, 0] == 2.0 and grid[0, 2] == 5.0 and grid[1, 2] == 9.0
        assert np.isnan(grid[0, 1]) and np.isnan(grid[1, 0])
        assert np.count_nonzero(~np.isnan(grid)) == 3
