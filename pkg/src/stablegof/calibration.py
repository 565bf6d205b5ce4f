"""Resampling calibration: Monte-Carlo critical values, parametric bootstrap
p-values for the GARCH and skew tests, the power-study harness (with the
warp-speed shortcut), and the Christoffersen VaR backtest.

Replicates draw from independent RNG substreams keyed by (master seed,
replicate index), so results are bit-identical for any parallelism width.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np
from scipy.stats import chi2

from .estimation import estimate_alpha, estimate_spectral_measure, fit_ml, standardize
from .garch import CCCParams, GarchFit, ebe_fit, simulate_ccc, sample_ccc, \
    default_simulation_preset, _sym_sqrt
from .sampling import (
    DiscreteSpectralMeasure,
    EllipticalStableModel,
    SkewStableModel,
    sample_alternative,
    sample_elliptical,
    sample_skew,
    sample_spherical,
    substream,
)
from .spherical import AmplitudeTable, load_or_build_amplitude_table
from .statistics import TestOutcome, sp_kernel, statistic_kotz, statistic_stablecf, \
    statistic_twosample_avg
from .univariate import ParameterError

__all__ = [
    "ExperimentConfig",
    "mc_critical_value_iid",
    "iid_test",
    "garch_bootstrap_pvalue",
    "skew_bootstrap_pvalue",
    "power_study",
    "christoffersen_lrcc",
    "var_backtest",
    "parse_config_file",
]


# ---------------------------------------------------------------------------
# shared pipeline pieces
# ---------------------------------------------------------------------------

def _one_sample_statistic(y, alpha0, tuning, table):
    if tuning.get("statistic", "stablecf") == "kotz":
        return statistic_kotz(y, alpha0, int(tuning["nu"]), float(tuning["r"]))
    return statistic_stablecf(y, alpha0, float(tuning["r"]), table)


def iid_pipeline(x, alpha0, tunings, table):
    """fit -> standardize -> statistic for each tuning; the fit is shared."""
    fit = fit_ml(x, alpha0, table)
    y = standardize(x, fit.delta_hat, fit.dispersion_hat)
    return [_one_sample_statistic(y, alpha0, t, table) for t in tunings]


def _amp_table(alpha0, p, cache_dir=None):
    return load_or_build_amplitude_table(alpha0, p, cache_dir=cache_dir)


def _needs_table(tunings):
    return any(t.get("statistic", "stablecf") == "stablecf" for t in tunings)


# ---------------------------------------------------------------------------
# i.i.d. test: Monte Carlo critical values (affine-invariant pipeline)
# ---------------------------------------------------------------------------

def mc_critical_value_iid(alpha0, n, p, tuning, n_replicates, seed, xi=0.10,
                          table=None):
    """(1-xi) empirical quantile of the statistic under spherical null samples
    pushed through the full fit/standardize/statistic pipeline."""
    tunings = [tuning] if isinstance(tuning, dict) else list(tuning)
    if table is None and (_needs_table(tunings) or alpha0 < 2.0):
        table = _amp_table(alpha0, p)
    stats = np.empty((n_replicates, len(tunings)))
    for b in range(n_replicates):
        rng = substream(seed, b)
        x = sample_spherical(alpha0, p, n, rng)
        stats[b] = iid_pipeline(x, alpha0, tunings, table)
    crit = np.quantile(stats, 1.0 - xi, axis=0)
    if isinstance(tuning, dict):
        return float(crit[0])
    return crit


def iid_test(x, alpha0, tuning, n_replicates, seed, xi=0.10, table=None) -> TestOutcome:
    """One-sample test with Monte-Carlo null calibration."""
    x = np.asarray(x, dtype=float)
    n, p = x.shape
    if table is None:
        table = _amp_table(alpha0, p)
    stat = iid_pipeline(x, alpha0, [tuning], table)[0]
    null_stats = np.empty(n_replicates)
    for b in range(n_replicates):
        rng = substream(seed, b)
        null_stats[b] = iid_pipeline(sample_spherical(alpha0, p, n, rng),
                                     alpha0, [tuning], table)[0]
    p_value = (1.0 + np.sum(null_stats >= stat)) / (n_replicates + 1.0)
    crit = float(np.quantile(null_stats, 1.0 - xi))
    return TestOutcome(statistic=float(stat), method="iid-" +
                       tuning.get("statistic", "stablecf"), n=n, p=p,
                       tuning=dict(tuning), p_value=float(p_value),
                       critical_value=crit, seed=seed)


# ---------------------------------------------------------------------------
# GARCH parametric bootstrap
# ---------------------------------------------------------------------------

def _garch_statistic(fit: GarchFit, alpha0, tunings, table):
    return [_one_sample_statistic(fit.residuals, alpha0, t, table) for t in tunings]


def _garch_bootstrap_once(fit: GarchFit, alpha0, tunings, table, n, p, rng,
                          intercept, univ_table):
    # regenerate a genuine CCC-GARCH path at the fitted parameters (the
    # volatility recursion is driven by the bootstrap observations themselves)
    eps_star = sample_spherical(alpha0, p, n, rng)
    x_star = simulate_ccc(fit.params_hat, eps_star)
    refit = ebe_fit(x_star, alpha0, table=univ_table, intercept=intercept,
                    b_acts_on=fit.params_hat.b_acts_on)
    return _garch_statistic(refit, alpha0, tunings, table)


def garch_bootstrap_pvalue(x, alpha0, tuning, n_boot, seed, xi=0.10,
                           warp_speed=False, intercept=False,
                           b_acts_on="squared") -> TestOutcome:
    """Parametric bootstrap for CCC-GARCH innovations: simulate eps* under the
    null, rebuild X* on the fitted scale paths, refit, recompute the statistic.
    warp_speed=True draws a single bootstrap replicate (used by power studies).
    """
    x = np.asarray(x, dtype=float)
    n, p = x.shape
    tunings = [tuning] if isinstance(tuning, dict) else list(tuning)
    table = _amp_table(alpha0, p) if _needs_table(tunings) else None
    univ_table = _amp_table(alpha0, 1)
    fit = ebe_fit(x, alpha0, table=univ_table, intercept=intercept,
                  b_acts_on=b_acts_on)
    stat = _garch_statistic(fit, alpha0, tunings, table)[0]
    n_draws = 1 if warp_speed else n_boot
    t_star = []
    failures = 0
    for b in range(n_draws):
        rng = substream(seed, b)
        try:
            t_star.append(_garch_bootstrap_once(fit, alpha0, tunings, table,
                                                n, p, rng, intercept,
                                                univ_table)[0])
        except (FloatingPointError, np.linalg.LinAlgError):
            failures += 1
    if failures > 0.1 * n_draws:
        raise RuntimeError(f"{failures}/{n_draws} bootstrap refits failed")
    t_star = np.asarray(t_star)
    p_value = (1.0 + np.sum(t_star >= stat)) / (t_star.shape[0] + 1.0)
    out = TestOutcome(statistic=float(stat), method="garch-" +
                      tunings[0].get("statistic", "stablecf"), n=n, p=p,
                      tuning=dict(tunings[0]), p_value=float(p_value),
                      critical_value=float(np.quantile(t_star, 1.0 - xi))
                      if t_star.shape[0] > 1 else None, seed=seed)
    if failures:
        out.warnings.append(f"{failures} bootstrap refits dropped")
    return out


# ---------------------------------------------------------------------------
# skew test parametric bootstrap
# ---------------------------------------------------------------------------

def _fit_skew_null(x, alpha_mode, n_points):
    if alpha_mode == "estimated":
        alpha_hat = estimate_alpha(x)
    else:
        alpha_hat = float(alpha_mode)
    delta_hat, measure = estimate_spectral_measure(x, alpha_hat, n_points)
    return SkewStableModel(alpha_hat, delta_hat, measure)


def _skew_kernels(tunings, alpha_mode):
    kernel_alpha = 2.0 if alpha_mode == "estimated" else float(alpha_mode)
    return [sp_kernel(float(t["r"]), kernel_alpha) for t in tunings]


def _skew_statistics(x, model, kernels, m, seed, offset):
    """Averaged two-sample statistics; the m artificial sets are shared
    across the kernel/tuning grid."""
    sets = [sample_skew(model, x.shape[0], substream(seed, offset, r))
            for r in range(m)]
    return [statistic_twosample_avg(x, sets, k) for k in kernels]


def _skew_boot_draw(model, alpha_mode, kernels, n, m, seed, offset, n_points):
    x_star = sample_skew(model, n, substream(seed, offset, m))
    model_star = _fit_skew_null(x_star, alpha_mode, n_points)
    return _skew_statistics(x_star, model_star, kernels, m, seed, offset)


def skew_bootstrap_pvalue(x, alpha_mode, r, m, n_boot, seed, xi=0.10,
                          n_points=10, warp_speed=False) -> TestOutcome:
    """Two-sample skew test with parametric bootstrap.

    alpha_mode: a fixed alpha0, or "estimated" (projection estimate; the
    kernel then uses alpha = 2 as in the unknown-alpha study).
    """
    x = np.asarray(x, dtype=float)
    n, p = x.shape
    model = _fit_skew_null(x, alpha_mode, n_points)
    tunings = [{"r": r}]
    kernels = _skew_kernels(tunings, alpha_mode)
    stat = _skew_statistics(x, model, kernels, m, seed, 0)[0]
    n_draws = 1 if warp_speed else n_boot
    t_star = []
    failures = 0
    for b in range(n_draws):
        try:
            t_star.append(_skew_boot_draw(model, alpha_mode, kernels, n, m,
                                          seed, 1 + b, n_points)[0])
        except (RuntimeError, np.linalg.LinAlgError, ParameterError):
            failures += 1
    if failures > 0.1 * n_draws:
        raise RuntimeError(f"{failures}/{n_draws} bootstrap refits failed")
    t_star = np.asarray(t_star)
    p_value = (1.0 + np.sum(t_star >= stat)) / (t_star.shape[0] + 1.0)
    out = TestOutcome(statistic=float(stat), method="skew-twosample",
                      n=n, p=p,
                      tuning={"r": r, "m": m, "alpha_mode": str(alpha_mode)},
                      p_value=float(p_value),
                      critical_value=float(np.quantile(t_star, 1.0 - xi))
                      if t_star.shape[0] > 1 else None, seed=seed)
    if failures:
        out.warnings.append(f"{failures} bootstrap refits dropped")
    return out


# ---------------------------------------------------------------------------
# power studies
# ---------------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    """One power/size study: null spec, alternative, tuning grid, MC budget."""

    mode: str                      # "iid" | "garch" | "skew"
    alpha0: float                  # hypothesized index; None => estimated (skew)
    alternative: dict              # {"kind": ..., **params}
    n: int
    p: int
    tunings: list                  # list of tuning dicts
    replications: int = 500
    bootstrap: int = 500           # B for critical values / full bootstrap
    level: float = 0.10
    seed: int = 20240101
    m_artificial: int = 10         # m for the skew statistic
    workers: int = 1
    warp_speed: bool = True        # garch/skew modes
    garch_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in ("iid", "garch", "skew"):
            raise ParameterError(f"unknown mode {self.mode!r}")
        if not (0.0 < self.level < 1.0):
            raise ParameterError("level must be in (0, 1)")
        if self.replications < 1 or self.bootstrap < 19:
            raise ParameterError("need replications >= 1 and bootstrap >= 19")


def _draw_alternative(alt, n, p, rng):
    kind = alt["kind"]
    if kind == "stable":
        return sample_spherical(float(alt["alpha"]), p, n, rng)
    if kind == "elliptical-stable":
        model = EllipticalStableModel(float(alt["alpha"]),
                                      np.asarray(alt.get("delta", np.zeros(p))),
                                      np.asarray(alt.get("dispersion", np.eye(p))))
        return sample_elliptical(model, n, rng)
    if kind == "skew-stable":
        measure = DiscreteSpectralMeasure(np.asarray(alt["points"]),
                                          np.asarray(alt["weights"]))
        model = SkewStableModel(float(alt["alpha"]),
                                np.asarray(alt.get("delta", np.zeros(p))), measure)
        return sample_skew(model, n, rng)
    return sample_alternative(kind, p, n, rng, nu=alt.get("nu"))


def _iid_power_rep(args):
    cfg, rep = args
    rng = substream(cfg.seed, 1, rep)
    x = _draw_alternative(cfg.alternative, cfg.n, cfg.p, rng)
    table = _POWER_TABLE["table"]
    try:
        return iid_pipeline(x, cfg.alpha0, cfg.tunings, table)
    except Exception:
        return None


def _garch_power_rep(args):
    cfg, rep = args
    rng = substream(cfg.seed, 1, rep)
    p = cfg.p
    preset = _garch_preset(cfg)
    x = sample_ccc(preset, cfg.n,
                   lambda m, r: _draw_alternative(cfg.alternative, m, p, r), rng)
    table = _POWER_TABLE["table"]
    univ_table = _POWER_TABLE["univ_table"]
    try:
        fit = ebe_fit(x, cfg.alpha0, table=univ_table)
        stats = _garch_statistic(fit, cfg.alpha0, cfg.tunings, table)
        boot = _garch_bootstrap_once(fit, cfg.alpha0, cfg.tunings, table,
                                     cfg.n, p, substream(cfg.seed, 2, rep),
                                     False, univ_table)
        return stats, boot
    except Exception:
        return None


def _skew_power_rep(args):
    cfg, rep = args
    rng = substream(cfg.seed, 1, rep)
    x = _draw_alternative(cfg.alternative, cfg.n, cfg.p, rng)
    alpha_mode = "estimated" if cfg.alpha0 is None else cfg.alpha0
    rep_seed = _mix_seed(cfg.seed, rep)
    try:
        model = _fit_skew_null(x, alpha_mode, 10)
        kernels = _skew_kernels(cfg.tunings, alpha_mode)
        stats = _skew_statistics(x, model, kernels, cfg.m_artificial,
                                 rep_seed, 0)
        boots = _skew_boot_draw(model, alpha_mode, kernels, cfg.n,
                                cfg.m_artificial, rep_seed, 1, 10)
        return stats, boots
    except Exception:
        return None


def _mix_seed(seed, rep):
    return (seed * 1_000_003 + rep) % (2 ** 63)


_POWER_TABLE = {}


def _garch_preset(cfg) -> CCCParams:
    gp = dict(cfg.garch_params)
    return default_simulation_preset(cfg.p, a=gp.get("a", 0.2),
                                     b=gp.get("b", 0.3), rho=gp.get("rho", 0.5))


def _run_parallel(fn, args_list, workers):
    if workers <= 1:
        return [fn(a) for a in args_list]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, args_list, chunksize=8))


def power_study(config: ExperimentConfig):
    """Rejection table across the tuning grid.

    iid mode calibrates with Monte Carlo critical values computed once (the
    pipeline is affine invariant, so the null is parameter free); garch and
    skew modes use the warp-speed bootstrap unless warp_speed=False.
    """
    cfg = config
    records = []
    if cfg.mode == "iid":
        table = (_amp_table(cfg.alpha0, cfg.p)
                 if (_needs_table(cfg.tunings) or cfg.alpha0 < 2.0) else None)
        _POWER_TABLE["table"] = table
        crit = mc_critical_value_iid(cfg.alpha0, cfg.n, cfg.p, cfg.tunings,
                                     cfg.bootstrap, cfg.seed, cfg.level,
                                     table=table)
        results = _run_parallel(_iid_power_rep,
                                [(cfg, i) for i in range(cfg.replications)],
                                cfg.workers)
        stats = np.array([r for r in results if r is not None])
        failures = sum(r is None for r in results)
        for j, t in enumerate(cfg.tunings):
            rej = float(np.mean(stats[:, j] > crit[j]))
            records.append(_record(cfg, t, rej, stats.shape[0], failures))
    elif cfg.mode == "garch":
        table = _amp_table(cfg.alpha0, cfg.p) if _needs_table(cfg.tunings) else None
        _POWER_TABLE["table"] = table
        _POWER_TABLE["univ_table"] = _amp_table(cfg.alpha0, 1)
        results = _run_parallel(_garch_power_rep,
                                [(cfg, i) for i in range(cfg.replications)],
                                cfg.workers)
        ok = [r for r in results if r is not None]
        failures = len(results) - len(ok)
        stats = np.array([r[0] for r in ok])
        boots = np.array([r[1] for r in ok])
        for j, t in enumerate(cfg.tunings):
            crit = np.quantile(boots[:, j], 1.0 - cfg.level)
            rej = float(np.mean(stats[:, j] > crit))
            records.append(_record(cfg, t, rej, stats.shape[0], failures))
    else:  # skew
        results = _run_parallel(_skew_power_rep,
                                [(cfg, i) for i in range(cfg.replications)],
                                cfg.workers)
        ok = [r for r in results if r is not None]
        failures = len(results) - len(ok)
        stats = np.array([r[0] for r in ok])
        boots = np.array([r[1] for r in ok])
        for j, t in enumerate(cfg.tunings):
            crit = np.quantile(boots[:, j], 1.0 - cfg.level)
            rej = float(np.mean(stats[:, j] > crit))
            records.append(_record(cfg, t, rej, stats.shape[0], failures))
    return records


def _record(cfg, tuning, rej, reps, failures):
    se = math.sqrt(max(rej * (1.0 - rej), 1e-12) / max(reps, 1))
    rec = {
        "method": cfg.mode + "-" + tuning.get("statistic", "stablecf"),
        "tuning": dict(tuning),
        "alt": dict(cfg.alternative),
        "n": cfg.n,
        "p": cfg.p,
        "rejections": 100.0 * rej,
        "reps": int(reps),
        "se": 100.0 * se,
        "seed": cfg.seed,
    }
    if failures:
        rec["failures"] = int(failures)
    return rec


# ---------------------------------------------------------------------------
# Christoffersen backtest
# ---------------------------------------------------------------------------

def christoffersen_lrcc(violations, level):
    """Unconditional-coverage, independence, and joint LR tests.

    Returns a dict with LR statistics and chi-square p-values (1, 1, 2 dof).
    Zero violations: LR_uc uses the likelihood limit; LR_ind is undefined and
    flagged (set to 0 with flag 'no_violations').
    """
    v = np.asarray(violations, dtype=int)
    if v.ndim != 1 or v.shape[0] < 20:
        raise ParameterError("need a binary sequence of length >= 20")
    if np.any((v != 0) & (v != 1)):
        raise ParameterError("violations must be 0/1")
    if not (0.0 < level < 1.0):
        raise ParameterError("level must be in (0, 1)")
    t_total = v.shape[0]
    t1 = int(v.sum())
    t0 = t_total - t1
    rate = t1 / t_total

    def xlogy(a, b):
        return 0.0 if a == 0 else a * math.log(b)

    ll_null = xlogy(t0, 1.0 - level) + xlogy(t1, level)
    ll_hat = xlogy(t0, 1.0 - rate if rate < 1.0 else 1.0) + xlogy(t1, rate if rate > 0.0 else 1.0)
    lr_uc = -2.0 * (ll_null - ll_hat)

    pairs = np.stack([v[:-1], v[1:]], axis=1)
    n00 = int(np.sum((pairs[:, 0] == 0) & (pairs[:, 1] == 0)))
    n01 = int(np.sum((pairs[:, 0] == 0) & (pairs[:, 1] == 1)))
    n10 = int(np.sum((pairs[:, 0] == 1) & (pairs[:, 1] == 0)))
    n11 = int(np.sum((pairs[:, 0] == 1) & (pairs[:, 1] == 1)))
    flags = []
    if t1 == 0 or t1 == t_total:
        lr_ind = 0.0
        flags.append("no_violations" if t1 == 0 else "all_violations")
    else:
        pi01 = n01 / (n00 + n01) if (n00 + n01) else 0.0
        pi11 = n11 / (n10 + n11) if (n10 + n11) else 0.0
        pi = (n01 + n11) / (n00 + n01 + n10 + n11)
        ll_markov = (xlogy(n00, 1.0 - pi01 if pi01 < 1.0 else 1.0)
                     + xlogy(n01, pi01 if pi01 > 0.0 else 1.0)
                     + xlogy(n10, 1.0 - pi11 if pi11 < 1.0 else 1.0)
                     + xlogy(n11, pi11 if pi11 > 0.0 else 1.0))
        ll_iid = (xlogy(n00 + n10, 1.0 - pi if pi < 1.0 else 1.0)
                  + xlogy(n01 + n11, pi if pi > 0.0 else 1.0))
        lr_ind = -2.0 * (ll_iid - ll_markov)
    lr_cc = lr_uc + lr_ind
    return {
        "violation_rate": rate,
        "n_violations": t1,
        "lr_uc": lr_uc,
        "lr_ind": lr_ind,
        "lr_cc": lr_cc,
        "p_uc": float(chi2.sf(lr_uc, 1)),
        "p_ind": float(chi2.sf(lr_ind, 1)) if not flags else None,
        "p_cc": float(chi2.sf(lr_cc, 2)),
        "flags": flags,
    }


def var_backtest(x, alpha0, levels, window, weights, intercept=True,
                 b_acts_on="squared"):
    """Fit on the first `window` observations, then one-step-ahead portfolio
    VaR for the remainder; report violation rates and Christoffersen tests
    for long (lower bound) and short (upper bound) positions."""
    from .garch import _filter_scales
    from .univariate import UnivStableParams, univ_quantile

    x = np.asarray(x, dtype=float)
    n, p = x.shape
    if not (20 <= window < n):
        raise ParameterError("window must satisfy 20 <= window < n")
    w = np.atleast_1d(np.asarray(weights, dtype=float))
    fit = ebe_fit(x[:window], alpha0, intercept=intercept, b_acts_on=b_acts_on)
    params = fit.params_hat
    centered = x - params.omega if params.omega is not None else x
    h = _filter_scales(params, centered)          # h[j] uses data through j-1
    port = x @ w
    center = float(w @ params.omega) if params.omega is not None else 0.0
    q_lo = {lv: univ_quantile(lv, UnivStableParams(alpha0)) for lv in levels}
    results = {"alpha0": alpha0, "window": window, "n_forecasts": n - window,
               "levels": {}}
    q_path = np.sqrt(h[window:])                      # (n-window, p)
    # portfolio scale sqrt(w' D R D w) per step, vectorized
    wq = q_path * w[None, :]
    sig = np.sqrt(np.einsum("ji,ik,jk->j", wq, params.corr, wq))
    for lv in levels:
        z = q_lo[lv]
        lower = center + sig * z
        upper = center - sig * z
        viol_long = (port[window:] < lower).astype(int)
        viol_short = (port[window:] > upper).astype(int)
        results["levels"][lv] = {
            "long": christoffersen_lrcc(viol_long, lv),
            "short": christoffersen_lrcc(viol_short, lv),
        }
    return results


# ---------------------------------------------------------------------------
# key=value config files
# ---------------------------------------------------------------------------

def parse_config_file(path) -> ExperimentConfig:
    """Parse a key=value experiment file.

    Recognized keys: mode, alpha0 ("estimated" allowed in skew mode),
    alt.kind, alt.alpha, alt.nu, n, p, statistic, r (comma list), nu (comma
    list, kotz), replications, bootstrap, level, seed, m, workers, warp_speed,
    garch.a, garch.b, garch.rho.  Lines starting with # are comments.
    """
    kv = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParameterError(f"bad config line: {line!r}")
            key, val = line.split("=", 1)
            kv[key.strip()] = val.strip()

    mode = kv.get("mode", "iid")
    alpha0 = None if kv.get("alpha0", "").lower() == "estimated" \
        else float(kv.get("alpha0", 2.0))
    alt = {"kind": kv.get("alt.kind", "stable")}
    for key in ("alpha", "nu"):
        if f"alt.{key}" in kv:
            alt[key] = float(kv[f"alt.{key}"])
    rs = [float(v) for v in kv.get("r", "1.0").split(",")]
    statistic = kv.get("statistic", "stablecf")
    if statistic == "kotz":
        nus = [int(v) for v in kv.get("nu", "0").split(",")]
        tunings = [{"statistic": "kotz", "nu": nu, "r": r}
                   for nu in nus for r in rs]
    else:
        tunings = [{"statistic": "stablecf", "r": r} for r in rs]
    garch_params = {k.split(".", 1)[1]: float(v) for k, v in kv.items()
                    if k.startswith("garch.")}
    return ExperimentConfig(
        mode=mode, alpha0=alpha0, alternative=alt,
        n=int(kv.get("n", 100)), p=int(kv.get("p", 2)), tunings=tunings,
        replications=int(kv.get("replications", 500)),
        bootstrap=int(kv.get("bootstrap", 500)),
        level=float(kv.get("level", 0.10)), seed=int(kv.get("seed", 20240101)),
        m_artificial=int(kv.get("m", 10)),
        workers=int(kv.get("workers", 1)),
        warp_speed=kv.get("warp_speed", "true").lower() != "false",
        garch_params=garch_params)
