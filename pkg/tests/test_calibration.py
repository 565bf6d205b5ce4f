import math

import numpy as np
import pytest
from scipy.optimize import minimize
from scipy.stats import chi2

from stablegof.calibration import (
    ExperimentConfig,
    christoffersen_lrcc,
    garch_bootstrap_pvalue,
    iid_test,
    mc_critical_value_iid,
    parse_config_file,
    power_study,
    skew_bootstrap_pvalue,
    var_backtest,
)
from stablegof.garch import default_simulation_preset, sample_ccc
from stablegof.sampling import sample_skew, sample_spherical, substream
from stablegof.univariate import ParameterError


def spherical_sampler(alpha, p):
    return lambda n, rng: sample_spherical(alpha, p, n, rng)


class TestMcCriticalValue:
    def test_decreasing_in_level(self, amp_table, table_cache):
        import os
        os.environ["STABLE_GOF_CACHE"] = table_cache
        tab = amp_table(2.0, 2)
        crits = [mc_critical_value_iid(2.0, 50, 2, {"r": 1.0}, 100, 7, xi,
                                       table=tab) for xi in (0.05, 0.10, 0.20)]
        assert crits[0] > crits[1] > crits[2]

    def test_deterministic(self, amp_table):
        tab = amp_table(2.0, 2)
        a = mc_critical_value_iid(2.0, 40, 2, {"r": 1.0}, 50, 11, table=tab)
        b = mc_critical_value_iid(2.0, 40, 2, {"r": 1.0}, 50, 11, table=tab)
        assert a == b

    @pytest.mark.slow
    def test_size_self_check(self, amp_table):
        # rejection rate on fresh null data is close to nominal
        tab = amp_table(2.0, 3)
        crit = mc_critical_value_iid(2.0, 80, 3, {"r": 1.0}, 500, 13, 0.10,
                                     table=tab)
        from stablegof.calibration import iid_pipeline
        rejections = 0
        reps = 400
        for i in range(reps):
            x = sample_spherical(2.0, 3, 80, substream(14, i))
            rejections += iid_pipeline(x, 2.0, [{"r": 1.0}], tab)[0] > crit
        assert abs(rejections / reps - 0.10) < 0.05

    @pytest.mark.slow
    def test_invariance_to_true_parameters(self, amp_table):
        # critical values from (0, I) hold for arbitrary (delta, Q)
        from stablegof.calibration import iid_pipeline
        from stablegof.sampling import EllipticalStableModel, sample_elliptical
        tab = amp_table(2.0, 2)
        crit = mc_critical_value_iid(2.0, 60, 2, {"r": 1.0}, 400, 15, 0.10,
                                     table=tab)
        model = EllipticalStableModel(2.0, np.array([5.0, -3.0]),
                                      np.array([[4.0, 1.0], [1.0, 2.0]]))
        rejections = 0
        reps = 300
        for i in range(reps):
            x = sample_elliptical(model, 60, substream(16, i))
            rejections += iid_pipeline(x, 2.0, [{"r": 1.0}], tab)[0] > crit
        assert abs(rejections / reps - 0.10) < 0.05


class TestIidTest:
    def test_outcome_fields(self, amp_table):
        x = sample_spherical(2.0, 2, 60, substream(17, 0))
        out = iid_test(x, 2.0, {"r": 1.0}, 99, 18, table=amp_table(2.0, 2))
        assert 0.0 <= out.p_value <= 1.0
        assert out.statistic >= 0.0
        assert out.n == 60 and out.p == 2


class TestGarchBootstrap:
    def test_pvalue_granularity_b19(self, amp_table):
        preset = default_simulation_preset(2)
        x = sample_ccc(preset, 150, spherical_sampler(2.0, 2), substream(19, 0))
        out = garch_bootstrap_pvalue(x, 2.0, {"r": 1.0}, 19, 20)
        assert out.p_value in [k / 20.0 for k in range(1, 21)]


class TestSkewBootstrap:
    def test_trivial_null_statistic_zero(self):
        # testing data that literally equals a generated artificial set
        from stablegof.statistics import sp_kernel, statistic_twosample_avg
        x = sample_spherical(1.5, 2, 50, substream(21, 0))
        assert statistic_twosample_avg(x, [x.copy()], sp_kernel(1.0, 1.5)) == 0.0

    @pytest.mark.slow
    def test_fixed_alpha_pvalue_valid(self):
        pts = sample_spherical(1.5, 2, 100, substream(21, 1))
        out = skew_bootstrap_pvalue(pts, 1.5, 1.0, 5, 19, 22)
        assert 0.0 < out.p_value <= 1.0


class TestPowerStudy:
    def test_deterministic_across_workers(self, amp_table, table_cache):
        import os
        os.environ["STABLE_GOF_CACHE"] = table_cache
        cfg = dict(mode="iid", alpha0=2.0,
                   alternative={"kind": "stable", "alpha": 1.7},
                   n=50, p=2, tunings=[{"statistic": "stablecf", "r": 1.0}],
                   replications=40, bootstrap=40, seed=23)
        r1 = power_study(ExperimentConfig(**cfg, workers=1))
        r2 = power_study(ExperimentConfig(**cfg, workers=2))
        assert r1[0]["rejections"] == r2[0]["rejections"]

    def test_validation(self):
        with pytest.raises(ParameterError):
            ExperimentConfig(mode="bogus", alpha0=2.0, alternative={},
                             n=10, p=2, tunings=[])
        with pytest.raises(ParameterError):
            ExperimentConfig(mode="iid", alpha0=2.0, alternative={},
                             n=10, p=2, tunings=[], bootstrap=5)

    @pytest.mark.slow
    def test_null_row_sanity(self, amp_table, table_cache):
        import os
        os.environ["STABLE_GOF_CACHE"] = table_cache
        cfg = ExperimentConfig(mode="iid", alpha0=2.0,
                               alternative={"kind": "stable", "alpha": 2.0},
                               n=100, p=4,
                               tunings=[{"statistic": "stablecf", "r": 5.0}],
                               replications=500, bootstrap=500, seed=24,
                               workers=2)
        rec = power_study(cfg)[0]
        assert abs(rec["rejections"] - 10.0) < 3.0


class TestChristoffersen:
    def test_nominal_iid_pattern(self):
        rng = np.random.default_rng(25)
        v = (rng.random(2000) < 0.05).astype(int)
        out = christoffersen_lrcc(v, 0.05)
        assert out["p_uc"] > 0.01
        assert out["lr_uc"] < 6.0

    def test_exact_rate_lruc_zero(self):
        v = np.zeros(100, dtype=int)
        v[:5] = 1
        rng = np.random.default_rng(26)
        rng.shuffle(v)
        out = christoffersen_lrcc(v, 0.05)
        assert out["lr_uc"] == pytest.approx(0.0, abs=1e-12)

    def test_lr_ind_vs_brute_force(self):
        # brute-force profile likelihood over (pi01, pi11) on a length-40 path
        rng = np.random.default_rng(27)
        v = (rng.random(40) < 0.3).astype(int)
        out = christoffersen_lrcc(v, 0.3)

        pairs = np.stack([v[:-1], v[1:]], axis=1)
        n00 = np.sum((pairs[:, 0] == 0) & (pairs[:, 1] == 0))
        n01 = np.sum((pairs[:, 0] == 0) & (pairs[:, 1] == 1))
        n10 = np.sum((pairs[:, 0] == 1) & (pairs[:, 1] == 0))
        n11 = np.sum((pairs[:, 0] == 1) & (pairs[:, 1] == 1))

        def negll_markov(u):
            p01 = 1.0 / (1.0 + math.exp(-u[0]))
            p11 = 1.0 / (1.0 + math.exp(-u[1]))
            return -(n00 * math.log(1 - p01) + n01 * math.log(p01)
                     + n10 * math.log(1 - p11) + n11 * math.log(p11))

        def negll_iid(u):
            q = 1.0 / (1.0 + math.exp(-u[0]))
            return -((n00 + n10) * math.log(1 - q) + (n01 + n11) * math.log(q))

        best_markov = minimize(negll_markov, [0.0, 0.0], method="Nelder-Mead",
                               options={"xatol": 1e-10, "fatol": 1e-13}).fun
        best_iid = minimize(negll_iid, [0.0], method="Nelder-Mead",
                            options={"xatol": 1e-10, "fatol": 1e-13}).fun
        lr_ref = 2.0 * (best_iid - best_markov)
        assert out["lr_ind"] == pytest.approx(lr_ref, abs=1e-8)

    def test_borderline_rate_band(self):
        # 891 forecasts with 56 violations (rate 0.063) at the 5% level
        v = np.zeros(891, dtype=int)
        idx = np.linspace(0, 890, 56).astype(int)
        v[idx] = 1
        out = christoffersen_lrcc(v, 0.05)
        assert 0.05 < out["p_uc"] < 0.15

    def test_zero_violations_flagged(self):
        out = christoffersen_lrcc(np.zeros(50, dtype=int), 0.05)
        assert "no_violations" in out["flags"]
        assert out["p_ind"] is None
        assert out["lr_uc"] > 0.0

    def test_short_sequence_rejected(self):
        with pytest.raises(ParameterError):
            christoffersen_lrcc(np.zeros(10, dtype=int), 0.05)

    def test_lrcc_is_sum(self):
        rng = np.random.default_rng(28)
        v = (rng.random(300) < 0.1).astype(int)
        out = christoffersen_lrcc(v, 0.05)
        assert out["lr_cc"] == pytest.approx(out["lr_uc"] + out["lr_ind"])
        assert out["p_cc"] == pytest.approx(chi2.sf(out["lr_cc"], 2))


class TestVarBacktest:
    @pytest.mark.slow
    def test_coverage_on_simulated_data(self, amp_table):
        preset = default_simulation_preset(2)
        x = sample_ccc(preset, 1800, spherical_sampler(1.8, 2), substream(29, 0))
        res = var_backtest(x, 1.8, [0.05], 1000, np.array([0.5, 0.5]),
                           intercept=False)
        rate = res["levels"][0.05]["long"]["violation_rate"]
        assert 0.035 <= rate <= 0.065

    def test_window_validation(self):
        with pytest.raises(ParameterError):
            var_backtest(np.zeros((100, 2)), 1.8, [0.05], 100,
                         np.array([0.5, 0.5]))


class TestConfigFile:
    def test_round_trip(self, tmp_path):
        cfg_text = """
# study configuration
mode = iid
alpha0 = 2.0
alt.kind = stable
alt.alpha = 1.7
n = 100
p = 4
statistic = stablecf
r = 1.0,5.0
replications = 50
bootstrap = 100
level = 0.10
seed = 42
workers = 2
"""
        path = tmp_path / "study.cfg"
        path.write_text(cfg_text)
        cfg = parse_config_file(path)
        assert cfg.mode == "iid" and cfg.alpha0 == 2.0
        assert cfg.alternative == {"kind": "stable", "alpha": 1.7}
        assert cfg.tunings == [{"statistic": "stablecf", "r": 1.0},
                               {"statistic": "stablecf", "r": 5.0}]
        assert cfg.workers == 2

    def test_estimated_alpha_and_kotz(self, tmp_path):
        path = tmp_path / "study.cfg"
        path.write_text("mode = skew\nalpha0 = estimated\nstatistic = kotz\n"
                        "nu = 0,1\nr = 1.0\n")
        cfg = parse_config_file(path)
        assert cfg.alpha0 is None
        assert len(cfg.tunings) == 2 and cfg.tunings[0]["statistic"] == "kotz"

    def test_bad_line_rejected(self, tmp_path):
        path = tmp_path / "study.cfg"
        path.write_text("mode iid\n")
        with pytest.raises(ParameterError):
            parse_config_file(path)
