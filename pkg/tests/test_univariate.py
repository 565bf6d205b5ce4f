import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import levy_stable

from stablegof.univariate import (
    EstimationError,
    ParameterError,
    PositiveStableSpec,
    UnivStableParams,
    fit_univ_ml,
    fit_univ_ml_fixed_alpha,
    sample_positive_stable,
    sample_univ_stable,
    univ_cdf,
    univ_density,
    univ_quantile,
)


class TestDensityClosedForms:
    def test_gaussian_at_zero(self):
        # alpha=2, sigma=1 is N(0, 2)
        val = univ_density(0.0, UnivStableParams(2.0, 0.0, 1.0, 0.0))
        assert val == pytest.approx(1.0 / (2.0 * math.sqrt(math.pi)), rel=1e-12)

    def test_cauchy_at_zero(self):
        val = univ_density(0.0, UnivStableParams(1.0, 0.0, 1.0, 0.0))
        assert val == pytest.approx(1.0 / math.pi, rel=1e-12)

    def test_levy_case(self):
        # S(0.5, beta=1, sigma, 0) is the Levy law with c = sigma
        for sigma in (1.0, 2.5):
            params = UnivStableParams(0.5, 1.0, sigma, 0.0)
            for x in (0.5, 1.0, 3.0):
                expected = (math.sqrt(sigma / (2.0 * math.pi))
                            * x ** -1.5 * math.exp(-sigma / (2.0 * x)))
                assert univ_density(x, params) == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("alpha,closed", [
        (2.0, lambda x: math.exp(-x * x / 4.0) / (2.0 * math.sqrt(math.pi))),
        (1.0, lambda x: 1.0 / (math.pi * (1.0 + x * x))),
    ])
    def test_gaussian_cauchy_grid(self, alpha, closed):
        xs = np.linspace(-10.0, 10.0, 201)
        vals = univ_density(xs, UnivStableParams(alpha, 0.0, 1.0, 0.0))
        expected = np.array([closed(x) for x in xs])
        assert np.max(np.abs(vals - expected) / expected) < 1e-8

    @pytest.mark.parametrize("alpha", [0.6, 1.0, 1.3, 1.8])
    @pytest.mark.parametrize("beta", [0.0, 0.5, 1.0])
    def test_integrates_to_one(self, alpha, beta):
        params = UnivStableParams(alpha, beta, 1.0, 0.0)

        def pdf(x):
            return float(univ_density(np.array([x]), params)[0])

        total = 0.0
        cuts = [-np.inf, -1e4, -100, -10, 0, 10, 100, 1e4, np.inf]
        for a, b in zip(cuts[:-1], cuts[1:]):
            total += quad(pdf, a, b, limit=300, epsabs=1e-10)[0]
        assert total == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("alpha,beta", [
        (1.8, 0.3), (1.5, -0.7), (1.2, 0.0), (0.9, 0.5), (0.7, 1.0),
    ])
    def test_matches_scipy(self, alpha, beta):
        xs = np.linspace(-8.0, 8.0, 33)
        mine = univ_density(xs, UnivStableParams(alpha, beta, 1.0, 0.0))
        ref = levy_stable.pdf(xs, alpha, beta)
        mask = ref > 1e-12
        assert np.max(np.abs(mine[mask] - ref[mask]) / ref[mask]) < 1e-6

    def test_rejects_nonfinite_x(self):
        with pytest.raises(ParameterError):
            univ_density(np.array([np.nan]), UnivStableParams(1.5))

    def test_rejects_bad_alpha(self):
        with pytest.raises(ParameterError):
            UnivStableParams(2.3)
        with pytest.raises(ParameterError):
            UnivStableParams(0.0)


class TestCdfQuantile:
    @pytest.mark.parametrize("alpha,beta", [(1.7, 0.0), (1.3, 0.6), (0.8, -0.4)])
    def test_cdf_matches_scipy(self, alpha, beta):
        xs = np.linspace(-6.0, 6.0, 13)
        mine = univ_cdf(xs, UnivStableParams(alpha, beta, 1.0, 0.0))
        ref = levy_stable.cdf(xs, alpha, beta)
        assert np.max(np.abs(mine - ref)) < 1e-7

    def test_quantile_round_trip(self):
        params = UnivStableParams(1.6, 0.2, 2.0, -1.0)
        for q in (0.05, 0.5, 0.95, 0.99):
            x = univ_quantile(q, params)
            assert univ_cdf(x, params) == pytest.approx(q, abs=1e-8)

    def test_gaussian_quantile(self):
        # quantile of S_2(sigma=1) = sqrt(2) * standard normal quantile
        from scipy.stats import norm
        q = univ_quantile(0.95, UnivStableParams(2.0))
        assert q == pytest.approx(math.sqrt(2.0) * norm.ppf(0.95), abs=1e-8)

    def test_cauchy_quantile(self):
        q = univ_quantile(0.975, UnivStableParams(1.0))
        assert q == pytest.approx(math.tan(math.pi * 0.475), rel=1e-9)


class TestPositiveStable:
    def test_laplace_transform(self):
        rng = np.random.default_rng(321)
        for index in (0.5, 0.75, 0.9):
            a = sample_positive_stable(PositiveStableSpec(index), 200_000, rng)
            assert np.all(a > 0.0)
            for u in (0.5, 1.0, 2.0):
                vals = np.exp(-u * a)
                se = vals.std() / math.sqrt(vals.shape[0])
                assert abs(vals.mean() - math.exp(-u ** index)) < 3.0 * se + 5e-4

    def test_u_zero_trivial(self):
        rng = np.random.default_rng(1)
        a = sample_positive_stable(PositiveStableSpec(0.9), 100, rng)
        assert np.mean(np.exp(-0.0 * a)) == 1.0

    def test_index_validation(self):
        with pytest.raises(ParameterError):
            PositiveStableSpec(1.0)
        with pytest.raises(ParameterError):
            sample_positive_stable(PositiveStableSpec(0.5), 0, np.random.default_rng(0))


class TestUnivSampling:
    def test_gaussian_reduction(self):
        rng = np.random.default_rng(5)
        x = sample_univ_stable(UnivStableParams(2.0, 0.0, 1.5, 0.0), 200_000, rng)
        # variance of S_2(sigma) is 2 sigma^2
        assert x.var() == pytest.approx(2.0 * 1.5 ** 2, rel=0.02)

    def test_cauchy_cf(self):
        rng = np.random.default_rng(6)
        x = sample_univ_stable(UnivStableParams(1.0, 0.0, 1.0, 0.0), 200_000, rng)
        emp = np.mean(np.exp(1j * x))
        assert abs(emp - math.exp(-1.0)) < 0.01

    def test_levy_support(self):
        rng = np.random.default_rng(7)
        delta = 2.0
        x = sample_univ_stable(UnivStableParams(0.5, 1.0, 1.0, delta), 50_000, rng)
        assert x.min() > delta - 1e-9

    @pytest.mark.parametrize("alpha,beta", [(1.7, 0.5), (1.0, 0.8), (0.8, -0.6)])
    def test_cf_match(self, alpha, beta):
        rng = np.random.default_rng(8)
        params = UnivStableParams(alpha, beta, 1.0, 0.0)
        x = sample_univ_stable(params, 200_000, rng)
        for t in (0.5, 1.0, 2.0):
            emp = np.mean(np.exp(1j * t * x))
            if alpha == 1.0:
                expo = -abs(t) * (1.0 + 1j * beta * (2.0 / math.pi)
                                  * np.sign(t) * math.log(abs(t)))
            else:
                expo = -abs(t) ** alpha * (1.0 - 1j * beta * np.sign(t)
                                           * math.tan(math.pi * alpha / 2.0))
            assert abs(emp - np.exp(expo)) < 0.012


class TestFit:
    @pytest.mark.slow
    def test_mc_self_consistency(self):
        rng = np.random.default_rng(42)
        x = sample_univ_stable(UnivStableParams(1.8, 0.0, 1.0, 0.0), 5000, rng)
        fit = fit_univ_ml(x)
        assert abs(fit.alpha - 1.8) < 0.08

    def test_location_equivariance(self):
        rng = np.random.default_rng(43)
        x = sample_univ_stable(UnivStableParams(1.6, 0.3, 1.0, 0.0), 400, rng)
        base = fit_univ_ml(x)
        shifted = fit_univ_ml(x + 7.5)
        assert shifted.delta - base.delta == pytest.approx(7.5, abs=1e-4)
        assert shifted.alpha == pytest.approx(base.alpha, abs=1e-4)
        assert shifted.sigma == pytest.approx(base.sigma, abs=1e-4)

    def test_scale_equivariance(self):
        rng = np.random.default_rng(44)
        x = sample_univ_stable(UnivStableParams(1.6, 0.3, 1.0, 0.0), 400, rng)
        base = fit_univ_ml(x)
        scaled = fit_univ_ml(3.0 * x)
        assert scaled.sigma / base.sigma == pytest.approx(3.0, abs=1e-3)
        assert scaled.alpha == pytest.approx(base.alpha, abs=1e-4)
        assert scaled.beta == pytest.approx(base.beta, abs=1e-3)

    def test_degenerate_data(self):
        with pytest.raises(EstimationError):
            fit_univ_ml(np.ones(100))

    def test_too_few_points(self):
        with pytest.raises(EstimationError):
            fit_univ_ml(np.arange(5, dtype=float))

    def test_fixed_alpha_recovers_beta_sigma(self):
        rng = np.random.default_rng(45)
        x = sample_univ_stable(UnivStableParams(1.5, 0.6, 2.0, 1.0), 3000, rng)
        fit = fit_univ_ml_fixed_alpha(x, 1.5)
        assert fit.beta == pytest.approx(0.6, abs=0.12)
        assert fit.sigma == pytest.approx(2.0, rel=0.08)
        assert fit.delta == pytest.approx(1.0, abs=0.2)
