import math

import numpy as np
import pytest
from scipy.integrate import dblquad

from stablegof.estimation import fit_ml, standardize
from stablegof.sampling import sample_alternative, sample_spherical, substream
from stablegof.statistics import (
    highdim_degeneracy_probe,
    sp_kernel,
    statistic_kotz,
    statistic_stablecf,
    statistic_twosample,
    statistic_twosample_avg,
)
from stablegof.univariate import ParameterError


def quadrature_statistic(y, alpha0, r, nu=0):
    """Direct 2D quadrature of n * int |phi_n - phi_alpha0|^2 w, p = 2."""
    n = y.shape[0]

    def integrand(t2, t1):
        t = np.array([t1, t2])
        phi_n = np.mean(np.exp(1j * (y @ t)))
        phi_0 = math.exp(-np.linalg.norm(t) ** alpha0)
        q = t1 * t1 + t2 * t2
        return abs(phi_n - phi_0) ** 2 * q ** nu * math.exp(-r * q ** (alpha0 / 2.0))

    half = (46.0 / r) ** (1.0 / alpha0)
    val, _ = dblquad(integrand, -half, half, lambda _: -half, lambda _: half,
                     epsabs=1e-11, epsrel=1e-9)
    return n * val


class TestOneSampleExamples:
    def test_kotz_n1_at_origin(self):
        val = statistic_kotz(np.zeros((1, 2)), 2.0, 0, 1.0)
        assert val == pytest.approx(math.pi / 3.0, rel=1e-12)

    def test_stablecf_n1_at_origin(self, amp_table):
        val = statistic_stablecf(np.zeros((1, 2)), 2.0, 1.0, amp_table(2.0, 2))
        assert val == pytest.approx(math.pi / 3.0, rel=1e-10)

    def test_nonnegative_on_random_data(self, amp_table):
        rng = substream(30, 0)
        for alpha0, tab in ((2.0, amp_table(2.0, 2)), (1.5, amp_table(1.5, 2))):
            for _ in range(5):
                y = rng.standard_normal((15, 2)) * 2.0
                assert statistic_stablecf(y, alpha0, 1.0, tab) >= 0.0
                assert statistic_kotz(y, alpha0, 1, 1.0) >= 0.0

    @pytest.mark.parametrize("r", [0.5, 1.0, 5.0])
    def test_weight_equivalence_alpha2(self, r, amp_table):
        rng = substream(31, 0)
        y = rng.standard_normal((25, 2))
        a = statistic_kotz(y, 2.0, 0, r)
        b = statistic_stablecf(y, 2.0, r, amp_table(2.0, 2))
        assert b == pytest.approx(a, rel=1e-8)

    @pytest.mark.parametrize("alpha0", [1.0, 1.5, 2.0])
    def test_quadrature_oracle(self, alpha0, amp_table):
        rng = substream(32, int(alpha0 * 10))
        y = rng.standard_normal((3, 2)) * 1.5
        ref = quadrature_statistic(y, alpha0, 1.0)
        tab = amp_table(alpha0, 2)
        assert statistic_stablecf(y, alpha0, 1.0, tab) == \
            pytest.approx(ref, rel=1e-4)
        assert statistic_kotz(y, alpha0, 0, 1.0) == pytest.approx(ref, rel=1e-4)

    def test_quadrature_oracle_n5_nu1(self):
        rng = substream(33, 0)
        y = rng.standard_normal((5, 2))
        ref = quadrature_statistic(y, 1.5, 1.0, nu=1)
        assert statistic_kotz(y, 1.5, 1, 1.0) == pytest.approx(ref, rel=1e-4)

    def test_permutation_invariance(self, amp_table):
        rng = substream(34, 0)
        y = rng.standard_normal((12, 2))
        perm = rng.permutation(12)
        tab = amp_table(1.5, 2)
        assert statistic_stablecf(y, 1.5, 1.0, tab) == \
            statistic_stablecf(y[perm], 1.5, 1.0, tab)
        assert statistic_kotz(y, 1.5, 0, 1.0) == statistic_kotz(y[perm], 1.5, 0, 1.0)


class TestTwoSample:
    def test_identical_samples_zero(self):
        rng = substream(35, 0)
        x = rng.standard_normal((10, 2))
        assert statistic_twosample(x, x, sp_kernel(1.0, 2.0)) == 0.0

    def test_hand_computed_n1(self):
        x = np.zeros((1, 2))
        x0 = np.array([[1.0, 0.0]])
        val = statistic_twosample(x, x0, sp_kernel(1.0, 2.0))
        assert val == pytest.approx(2.0 - 2.0 * math.exp(-1.0), abs=1e-12)

    def test_swap_symmetry_exact(self):
        rng = substream(35, 1)
        x = rng.standard_normal((15, 2))
        x0 = rng.standard_normal((15, 2))
        k = sp_kernel(0.7, 1.5)
        assert statistic_twosample(x, x0, k) == statistic_twosample(x0, x, k)

    def test_size_mismatch(self):
        with pytest.raises(ParameterError):
            statistic_twosample(np.zeros((3, 2)), np.zeros((4, 2)),
                                sp_kernel(1.0, 2.0))

    def test_average_reductions(self):
        rng = substream(35, 2)
        x = rng.standard_normal((8, 2))
        x0 = rng.standard_normal((8, 2))
        x1 = rng.standard_normal((8, 2))
        k = sp_kernel(1.0, 2.0)
        single = statistic_twosample(x, x0, k)
        assert statistic_twosample_avg(x, [x0], k) == single
        a, b = single, statistic_twosample(x, x1, k)
        assert statistic_twosample_avg(x, [x0, x1], k) == \
            pytest.approx((a + b) / 2.0, rel=1e-15)
        assert statistic_twosample_avg(x, [x, x], k) == 0.0
        with pytest.raises(ParameterError):
            statistic_twosample_avg(x, [], k)


class TestConsistencyDirection:
    @pytest.mark.slow
    def test_t_over_n_stabilizes(self, amp_table):
        # under a fixed alternative, T/n approaches a positive limit
        tab = amp_table(2.0, 2)
        vals = {}
        for n in (2000, 8000):
            x = sample_alternative("mv-t", 2, n, substream(36, n), nu=3.0)
            fit = fit_ml(x, 2.0, tab)
            y = standardize(x, fit.delta_hat, fit.dispersion_hat)
            vals[n] = statistic_stablecf(y, 2.0, 1.0, tab) / n
        assert abs(vals[2000] - vals[8000]) / vals[8000] < 0.10


class TestAffineInvariance:
    def test_end_to_end(self, amp_table):
        # fit -> standardize -> statistic changes by < 1e-2 under affine maps
        tab = amp_table(1.8, 2)
        x = sample_spherical(1.8, 2, 300, substream(37, 0))
        rng = substream(37, 1)

        def pipeline(data):
            fit = fit_ml(data, 1.8, tab)
            y = standardize(data, fit.delta_hat, fit.dispersion_hat)
            return statistic_stablecf(y, 1.8, 1.0, tab)

        base = pipeline(x)
        for _ in range(3):
            a = rng.standard_normal((2, 2)) + 2.0 * np.eye(2)
            b = rng.standard_normal(2) * 3.0
            assert abs(pipeline(x @ a.T + b) - base) < 1e-2


class TestHighDimProbe:
    def test_trichotomy(self):
        rng = np.random.default_rng(38)
        grow = highdim_degeneracy_probe([20, 60], 250, 1.0, rng)
        assert grow[1]["statistic"] > 10.0 * grow[0]["statistic"]
        decay = highdim_degeneracy_probe([20, 60], 250, 6.0,
                                         np.random.default_rng(38))
        assert decay[1]["statistic"] < 0.1 * decay[0]["statistic"]

    def test_section72_approximation(self):
        rng = np.random.default_rng(39)
        out = highdim_degeneracy_probe([50], 250, 4.0, rng)[0]
        approx = (math.pi / 4.0) ** 25 + 250.0 * (math.pi / 6.0) ** 25
        assert approx / 2.0 < out["statistic"] < approx * 2.0
