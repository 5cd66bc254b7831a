import math
from datetime import datetime, timezone

import numpy as np
import pytest

from stylefacts.ingest import BarSeries
from stylefacts.returns import (
    ReturnSeries,
    log_returns,
    period_bounds,
    read_returns,
    standardize,
    write_returns,
)


def bars_from(prices, start=0, interval=60):
    prices = np.asarray(prices, dtype=float)
    return BarSeries(start, interval, prices, np.zeros(prices.size, dtype=bool))


class TestLogReturns:
    def test_unchanged_price_gives_zero(self):
        r = log_returns(bars_from([100.0, 100.0]))
        assert r.values.tolist() == [0.0]
        assert not r.standardized

    def test_log_identity(self):
        r = log_returns(bars_from([100.0, 100.0 * math.e]))
        assert r.values[0] == pytest.approx(1.0, abs=1e-14)

    def test_direct_formula(self):
        r = log_returns(bars_from([100.0, 110.0, 99.0]))
        assert r.values == pytest.approx([math.log(1.1), math.log(0.9)], abs=1e-14)

    def test_filled_span_is_identically_zero(self):
        r = log_returns(bars_from([42.0] * 50))
        assert np.all(r.values == 0.0)

    def test_telescoping_sum(self):
        rng = np.random.default_rng(8)
        prices = np.exp(np.cumsum(rng.standard_normal(10_000) * 0.01)) * 100
        r = log_returns(bars_from(prices))
        total = math.log(prices[-1]) - math.log(prices[0])
        assert r.values.sum() == pytest.approx(total, rel=1e-9)

    def test_timestamps_follow_bars(self):
        r = log_returns(bars_from([1.0, 2.0, 3.0], start=600, interval=300))
        assert r.timestamps().tolist() == [900, 1200]


class TestStandardize:
    def test_two_point_case(self):
        out = standardize(ReturnSeries(np.array([-1.0, 1.0]), 60))
        assert out.values == pytest.approx([-1 / math.sqrt(2), 1 / math.sqrt(2)])
        assert out.mean_used == 0.0
        assert out.sd_used == pytest.approx(math.sqrt(2))
        assert out.standardized

    @pytest.mark.parametrize("a,b", [(0.5, -2.0), (3.7, 5.0), (1e-4, 0.0)])
    def test_affine_invariance(self, a, b):
        rng = np.random.default_rng(17)
        x = rng.standard_normal(5000)
        base = standardize(ReturnSeries(x, 60)).values
        shifted = standardize(ReturnSeries(a * x + b, 60)).values
        np.testing.assert_allclose(shifted, base, atol=1e-12)

    def test_large_gaussian_maps_to_unit_moments(self):
        rng = np.random.default_rng(21)
        x = rng.standard_normal(10**6) * 5.0 + 3.0
        out = standardize(ReturnSeries(x, 60))
        assert abs(out.values.mean()) < 1e-10
        assert abs(out.values.std(ddof=1) - 1.0) < 1e-10

    def test_idempotent(self):
        rng = np.random.default_rng(3)
        once = standardize(ReturnSeries(rng.standard_normal(1000) * 4 + 2, 60))
        twice = standardize(once)
        np.testing.assert_allclose(twice.values, once.values, atol=1e-10)

    def test_degenerate_series_error(self):
        with pytest.raises(ValueError, match="degenerate series"):
            standardize(ReturnSeries(np.zeros(100), 60))

    def test_too_short_error(self):
        with pytest.raises(ValueError, match="at least 2"):
            standardize(ReturnSeries(np.array([1.0]), 60))


class TestPeriods:
    @pytest.mark.parametrize(
        "name,start,end",
        [
            ("I", (2011, 9, 11), (2014, 1, 1)),
            ("II", (2015, 1, 1), (2020, 6, 22)),
            ("full", (2011, 9, 11), (2020, 6, 22)),
        ],
    )
    def test_bounds_match_calendar(self, name, start, end):
        t0, t1 = period_bounds(name)
        assert t0 == int(datetime(*start, tzinfo=timezone.utc).timestamp())
        assert t1 == int(datetime(*end, tzinfo=timezone.utc).timestamp())

    def test_unknown_period(self):
        with pytest.raises(ValueError, match="unknown period"):
            period_bounds("III")


class TestReturnsCsv:
    def test_roundtrip(self, tmp_path):
        series = ReturnSeries(np.array([0.01, -0.02, 0.005]), 60, start=120)
        path = tmp_path / "returns.csv"
        write_returns(series, path)
        assert path.read_text().splitlines()[0] == "timestamp,return"
        back = read_returns(path)
        assert back.interval == 60
        assert back.start == 120
        np.testing.assert_array_equal(back.values, series.values)

    def test_synthetic_series_written_on_index_grid(self, tmp_path):
        series = ReturnSeries(np.array([0.1, 0.2]), 60)
        path = tmp_path / "r.csv"
        write_returns(series, path)
        rows = path.read_text().splitlines()[1:]
        assert [int(r.split(",")[0]) for r in rows] == [60, 120]
