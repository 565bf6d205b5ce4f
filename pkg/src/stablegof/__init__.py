"""Goodness-of-fit testing for multivariate stable-Paretian laws.

Characteristic-function tests for elliptical stable laws (i.i.d. data and
CCC-GARCH innovations) and for asymmetric stable laws, with the supporting
numerics: univariate and spherical stable densities, Kotz-type weight
integrals, stable samplers, ML estimation, bootstrap calibration, and a
VaR backtesting pipeline.
"""

__version__ = "0.1.0"

from .calibration import (
    ExperimentConfig,
    christoffersen_lrcc,
    garch_bootstrap_pvalue,
    iid_test,
    mc_critical_value_iid,
    power_study,
    skew_bootstrap_pvalue,
    var_backtest,
)
from .estimation import (
    FitResult,
    estimate_alpha,
    estimate_skew_model,
    estimate_spectral_measure,
    fit_ml,
    projection_init,
    standardize,
)
from .garch import (
    CCCParams,
    GarchFit,
    default_simulation_preset,
    ebe_fit,
    forecast_var,
    residuals,
    sample_ccc,
    simulate_ccc,
)
from .kotz import KotzSpec, kotz_at_zero, kotz_integral
from .sampling import (
    DiscreteSpectralMeasure,
    EllipticalStableModel,
    SkewStableModel,
    elliptical_cf,
    sample_alternative,
    sample_elliptical,
    sample_skew,
    sample_spherical,
    skew_cf,
    substream,
)
from .spherical import (
    AmplitudeTable,
    amplitude_density,
    build_amplitude_table,
    lambda_weight,
    load_or_build_amplitude_table,
    spherical_density,
)
from .statistics import (
    TestOutcome,
    highdim_degeneracy_probe,
    sp_kernel,
    statistic_kotz,
    statistic_stablecf,
    statistic_twosample,
    statistic_twosample_avg,
)
from .univariate import (
    EstimationError,
    ParameterError,
    PositiveStableSpec,
    UnivStableParams,
    fit_univ_ml,
    sample_positive_stable,
    sample_univ_stable,
    univ_cdf,
    univ_density,
    univ_quantile,
)

__all__ = [name for name in dir() if not name.startswith("_")]
