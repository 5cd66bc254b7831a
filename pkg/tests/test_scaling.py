import numpy as np
import pytest

from stylefacts.returns import standardize
from stylefacts.scaling import CcdfPoints, ccdf, fit_tail, hill_estimator, log_binned, write_ccdf
from stylefacts.synth import pareto_returns, student_t_returns
from stylefacts._fit import fit_line


def exact_ccdf(kappa, mu, x_lo=1.0, x_hi=50.0, n=40, side="positive"):
    x = np.geomspace(x_lo, x_hi, n)
    return CcdfPoints(side, x, kappa * x ** (-mu), n)


class TestCcdf:
    def test_rank_counting(self, as_standardized):
        c = ccdf(as_standardized([1.0, 2.0, 3.0]), "positive", min_count=1)
        assert c.x.tolist() == [1.0, 2.0, 3.0]
        assert c.p.tolist() == [1.0, 2 / 3, 1 / 3]
        assert c.n_side == 3

    def test_duplicates_collapse(self, as_standardized):
        c = ccdf(as_standardized([-1.0, -1.0, 2.0]), "negative", min_count=1)
        assert c.x.tolist() == [1.0]
        assert c.p.tolist() == [1.0]
        assert c.n_side == 2

    def test_zeros_belong_to_neither_side(self, as_standardized):
        series = as_standardized([0.0, 0.0, 1.0, -2.0])
        assert ccdf(series, "positive", min_count=1).n_side == 1
        assert ccdf(series, "negative", min_count=1).n_side == 1

    def test_p_strictly_decreasing(self, as_standardized):
        rng = np.random.default_rng(0)
        c = ccdf(as_standardized(rng.standard_normal(5000)), "positive")
        assert np.all(np.diff(c.p) < 0)

    def test_requires_standardized_flag(self, as_returns):
        with pytest.raises(ValueError, match="must be standardized"):
            ccdf(as_returns([1.0, 2.0, 3.0]), "positive", min_count=1)

    def test_min_count(self, as_standardized):
        with pytest.raises(ValueError, match="need at least 100"):
            ccdf(as_standardized(np.arange(1.0, 51.0)), "positive")

    def test_unknown_side(self, as_standardized):
        with pytest.raises(ValueError, match="unknown side"):
            ccdf(as_standardized([1.0, 2.0]), "both", min_count=1)

    def test_pareto_matches_analytic_within_binomial_error(self, as_standardized):
        # Oracle: unit-Pareto CCDF is exactly x**-2 beyond 1.
        series = as_standardized(pareto_returns(2.0, 10**6, 123))
        c = ccdf(series, "positive")
        for x0 in (2.0, 3.0, 5.0, 8.0, 12.0, 16.0, 20.0):
            q = x0**-2.0
            i = np.searchsorted(c.x, x0, side="left")
            p_emp = c.p[i] if i < c.x.size else 0.0
            se = np.sqrt(q * (1 - q) / c.n_side)
            assert abs(p_emp - q) <= 3 * se

    def test_csv_emission(self, tmp_path, as_standardized):
        c = ccdf(as_standardized([1.0, 2.0, 3.0]), "positive", min_count=1)
        path = tmp_path / "ccdf.csv"
        write_ccdf(c, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "x,p"
        assert len(lines) == 4


class TestFitTail:
    def test_exact_power_law(self):
        fit = fit_tail(exact_ccdf(0.5, 3.0), (2, 20))
        assert fit.mu == pytest.approx(3.0, abs=1e-9)
        assert fit.kappa == pytest.approx(0.5, abs=1e-9)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-9)
        assert fit.stderr_mu == pytest.approx(0.0, abs=1e-9)

    def test_region_selection_counts_points(self):
        fit = fit_tail(exact_ccdf(1.0, 2.0, n=40), (2, 20))
        assert 3 <= fit.n_points < 40

    def test_too_few_points_error(self):
        with pytest.raises(ValueError, match="fewer than 3 points"):
            fit_tail(exact_ccdf(1.0, 2.0, n=40), (45, 50))

    def test_bad_region_error(self):
        with pytest.raises(ValueError, match="0 < lo < hi"):
            fit_tail(exact_ccdf(1.0, 2.0), (20, 2))

    def test_zero_x_variance_error(self):
        c = CcdfPoints("positive", np.array([2.0, 2.0, 2.0]), np.array([1.0, 0.5, 0.25]), 3)
        with pytest.raises(ValueError, match="zero x-variance"):
            fit_tail(c, (1, 10))

    def test_increasing_ccdf_rejected(self):
        c = CcdfPoints("positive", np.array([2.0, 4.0, 8.0]), np.array([0.1, 0.5, 0.9]), 3)
        with pytest.raises(ValueError, match="no power-law decay"):
            fit_tail(c, (1, 10))

    def test_scale_equivariance(self, as_returns):
        rng = np.random.default_rng(33)
        raw = rng.standard_t(3, 200_000)
        fits = []
        for c_scale in (1.0, 250.0):
            std = standardize(as_returns(raw * c_scale))
            fits.append(fit_tail(ccdf(std, "positive"), (2, 20)))
        assert fits[0].mu == pytest.approx(fits[1].mu, abs=1e-10)
        assert fits[0].kappa == pytest.approx(fits[1].kappa, abs=1e-10)

    def test_estimate_tightens_with_sample_size(self, as_returns):
        # Consistency: mean absolute error shrinks from n=1e4 to n=1e6.
        def mean_err(n, min_count):
            errs = []
            for seed in range(5):
                std = standardize(as_returns(pareto_returns(3.0, n, seed)))
                fit = fit_tail(ccdf(std, "positive", min_count=min_count), (2, 20))
                errs.append(abs(fit.mu - 3.0))
            return np.mean(errs)

        assert mean_err(10**6, 100) < mean_err(10**4, 50)

    def test_gaussian_tail_is_not_a_power_law(self, as_returns):
        # Negative control: thin tails give wildly region-dependent slopes.
        std = standardize(as_returns(np.random.default_rng(4).standard_normal(10**6)))
        c = ccdf(std, "positive")
        near = fit_tail(c, (2, 3))
        far = fit_tail(c, (3, 4.5))
        assert abs(far.mu - near.mu) > 1.0
        with pytest.raises(ValueError, match="fewer than 3 points"):
            fit_tail(c, (10, 20))

    def test_log_binned_preserves_exact_power_law(self):
        c = exact_ccdf(0.5, 3.0, n=400)
        binned = log_binned(c, 30)
        assert binned.x.size <= 30
        fit = fit_tail(binned, (2, 20))
        assert fit.mu == pytest.approx(3.0, abs=1e-9)
        assert fit.kappa == pytest.approx(0.5, abs=1e-9)

    def test_to_dict_fields(self):
        d = fit_tail(exact_ccdf(0.5, 3.0), (2, 20)).to_dict()
        assert set(d) == {"side", "region", "mu", "kappa", "stderr_mu", "r_squared", "n_points"}
        assert d["region"] == [2.0, 20.0]


class TestHillEstimator:
    def test_exact_pareto_quantiles(self, as_standardized):
        # Oracle: plug-in on the analytic quantile function of a mu=2 Pareto.
        n = 10**4
        x = (np.arange(1, n + 1) / n) ** (-1.0 / 2.0)
        series = as_standardized(np.concatenate([x, -x]))
        mu, stderr = hill_estimator(series, "positive", k=n // 10)
        assert mu == pytest.approx(2.0, rel=0.05)
        assert stderr == pytest.approx(mu / np.sqrt(n // 10))

    def test_student_t_tail(self, as_returns):
        std = standardize(as_returns(student_t_returns(3.0, 10**6, 1)))
        n_side = int((std.values > 0).sum())
        mu, _ = hill_estimator(std, "positive", k=n_side // 1000)
        assert 2.5 <= mu <= 3.5

    def test_all_equal_tail_errors(self, as_standardized):
        series = as_standardized(np.ones(200))
        with pytest.raises(ValueError, match="tied order statistics"):
            hill_estimator(series, "positive", k=50)

    def test_k_validation(self, as_standardized):
        series = as_standardized(np.arange(1.0, 101.0))
        with pytest.raises(ValueError, match="k must be at least 10"):
            hill_estimator(series, "positive", k=5)
        with pytest.raises(ValueError, match="need more than k"):
            hill_estimator(series, "positive", k=100)

    def test_agrees_with_regression_on_pareto(self, as_returns):
        # Dual route: regression fit and Hill must agree on clean data.
        std = standardize(as_returns(pareto_returns(3.0, 10**6, 9)))
        reg = fit_tail(ccdf(std, "positive"), (2, 20))
        hill_mu, hill_se = hill_estimator(std, "positive", k=5000)
        assert abs(reg.mu - hill_mu) < max(0.3, 4 * hill_se)


class TestLineFit:
    def test_matches_scipy_linregress(self):
        scipy_stats = pytest.importorskip("scipy.stats")
        rng = np.random.default_rng(7)
        x = rng.standard_normal(500)
        y = 2.5 * x - 1.0 + rng.standard_normal(500) * 0.3
        ours = fit_line(x, y)
        ref = scipy_stats.linregress(x, y)
        assert ours.slope == pytest.approx(ref.slope, rel=1e-12)
        assert ours.intercept == pytest.approx(ref.intercept, rel=1e-12)
        assert ours.stderr_slope == pytest.approx(ref.stderr, rel=1e-10)
        assert ours.r_squared == pytest.approx(ref.rvalue**2, rel=1e-10)
