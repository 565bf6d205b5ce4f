"""Univariate stable-Paretian laws: densities, CDF/quantiles, sampling, ML fitting.

Parameterizations
-----------------
The library convention (the "1-parameterization") fixes the characteristic
function of ``UnivStableParams(alpha, beta, sigma, delta)`` as

    E exp(itX) = exp( i*delta*t - sigma^alpha |t|^alpha
                      * (1 - i*beta*sign(t)*tan(pi*alpha/2)) )      alpha != 1
    E exp(itX) = exp( i*delta*t - sigma|t|
                      * (1 + i*beta*(2/pi)*sign(t)*log|t|) )        alpha == 1

so that alpha=2 gives N(delta, 2*sigma^2) and (alpha=1, beta=0) the Cauchy
law with scale sigma.  Internally all density work uses the continuous
0-parameterization (location shifted by beta*sigma*tan(pi*alpha/2)), which
is numerically stable across alpha=1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as _gamma
from scipy.optimize import brentq, minimize

__all__ = [
    "UnivStableParams",
    "PositiveStableSpec",
    "ParameterError",
    "EstimationError",
    "univ_density",
    "univ_logpdf",
    "univ_cdf",
    "univ_quantile",
    "fit_univ_ml",
    "fit_univ_ml_fixed_alpha",
    "sample_univ_stable",
    "sample_positive_stable",
    "quantile_init",
]


class ParameterError(ValueError):
    """Invalid distribution or tuning parameter."""


class EstimationError(RuntimeError):
    """Estimation failed (degenerate data, optimizer breakdown)."""


@dataclass(frozen=True)
class UnivStableParams:
    """Parameters of a univariate stable law in the 1-parameterization."""

    alpha: float
    beta: float = 0.0
    sigma: float = 1.0
    delta: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0):
            raise ParameterError(f"alpha must be in (0, 2], got {self.alpha}")
        if not (-1.0 <= self.beta <= 1.0):
            raise ParameterError(f"beta must be in [-1, 1], got {self.beta}")
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ParameterError(f"sigma must be positive, got {self.sigma}")
        if not math.isfinite(self.delta):
            raise ParameterError("delta must be finite")
        if self.alpha == 2.0 and self.beta != 0.0:
            # beta is unidentifiable at alpha=2
            object.__setattr__(self, "beta", 0.0)

    @property
    def delta0(self) -> float:
        """Location in the continuous 0-parameterization."""
        if self.alpha == 1.0:
            return self.delta + self.beta * (2.0 / math.pi) * self.sigma * math.log(self.sigma)
        return self.delta + self.beta * self.sigma * math.tan(math.pi * self.alpha / 2.0)


@dataclass(frozen=True)
class PositiveStableSpec:
    """Totally right-skewed positive stable variable with E exp(-uA) = exp(-u^index)."""

    index: float

    def __post_init__(self):
        if not (0.0 < self.index < 1.0):
            raise ParameterError(f"index must be in (0, 1), got {self.index}")


# ---------------------------------------------------------------------------
# Standard S0 density/CDF: numba kernels in _stable_core (Zolotarev-Nolan
# single integral with spike-splitting adaptive quadrature).
# ---------------------------------------------------------------------------

from ._stable_core import std_pdf_cdf_s0


def _std_pdf_cdf(x, alpha, beta, fast=False):
    """Density and CDF of the standard S0 law at points x."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    pdf, cdf = std_pdf_cdf_s0(np.atleast_1d(x), alpha, beta, fast=fast)
    if scalar:
        return pdf[0], cdf[0]
    return pdf, cdf


# ---------------------------------------------------------------------------
# Public density / CDF / quantile in the 1-parameterization
# ---------------------------------------------------------------------------

def univ_density(x, params: UnivStableParams, fast: bool = False):
    """Stable density at x (scalar or array) under the library CF convention."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ParameterError("x must be finite")
    z = (x - params.delta0) / params.sigma
    pdf, _ = _std_pdf_cdf(z, params.alpha, params.beta, fast=fast)
    return pdf / params.sigma


def univ_logpdf(x, params: UnivStableParams, fast: bool = False):
    """log density with tails clamped at 1e-300 to keep likelihoods finite."""
    return np.log(np.maximum(univ_density(x, params, fast=fast), 1e-300))


def univ_cdf(x, params: UnivStableParams):
    """Stable CDF at x under the library CF convention."""
    x = np.asarray(x, dtype=float)
    z = (x - params.delta0) / params.sigma
    _, cdf = _std_pdf_cdf(z, params.alpha, params.beta)
    return cdf


def univ_quantile(q, params: UnivStableParams) -> float:
    """Quantile by bracketed root search on the CDF."""
    if not (0.0 < q < 1.0):
        raise ParameterError("q must be in (0, 1)")
    lo, hi = -2.0, 2.0
    for _ in range(200):
        if univ_cdf(lo, params) < q:
            break
        lo *= 2.0
    for _ in range(200):
        if univ_cdf(hi, params) > q:
            break
        hi *= 2.0
    return brentq(lambda v: float(univ_cdf(v, params)) - q, lo, hi, xtol=1e-10)


# ---------------------------------------------------------------------------
# Sampling: Chambers-Mallows-Stuck
# ---------------------------------------------------------------------------

def _cms_standard(alpha, beta, n, rng):
    """Standard S(alpha, beta) draws in the 1-parameterization (sigma=1, delta=0)."""
    v = rng.uniform(-math.pi / 2.0, math.pi / 2.0, size=n)
    w = rng.exponential(1.0, size=n)
    if alpha == 1.0:
        return (2.0 / math.pi) * ((math.pi / 2.0 + beta * v) * np.tan(v)
                                  - beta * np.log((math.pi / 2.0) * w * np.cos(v)
                                                  / (math.pi / 2.0 + beta * v)))
    if alpha == 2.0:
        # X = 2*sqrt(W)*sin(V) reduces to N(0, 2)
        return 2.0 * np.sqrt(w) * np.sin(v)
    tpa = math.tan(math.pi * alpha / 2.0)
    b = math.atan(beta * tpa) / alpha
    s = (1.0 + beta * beta * tpa * tpa) ** (1.0 / (2.0 * alpha))
    return (s * np.sin(alpha * (v + b)) / np.cos(v) ** (1.0 / alpha)
            * (np.cos(v - alpha * (v + b)) / w) ** ((1.0 - alpha) / alpha))


def sample_univ_stable(params: UnivStableParams, n: int, rng) -> np.ndarray:
    """Draw n variates under the library CF convention."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    z = _cms_standard(params.alpha, params.beta, n, rng)
    if params.alpha == 1.0:
        return (params.sigma * z
                + (2.0 / math.pi) * params.beta * params.sigma * math.log(params.sigma)
                + params.delta)
    return params.sigma * z + params.delta


def sample_positive_stable(spec: PositiveStableSpec, n: int, rng) -> np.ndarray:
    """Positive stable draws with Laplace transform E exp(-uA) = exp(-u^index).

    Realized as sigma * S(index, beta=1) with sigma = cos(pi*index/2)^(1/index),
    the scale at which the totally skewed S1 law has the unit Laplace transform.
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    rho = spec.index
    sigma = math.cos(math.pi * rho / 2.0) ** (1.0 / rho)
    return sigma * _cms_standard(rho, 1.0, n, rng)


# ---------------------------------------------------------------------------
# Quantile-based initialization and maximum likelihood
# ---------------------------------------------------------------------------

_Z75_CACHE: dict = {}
_RATIO_GRID: dict = {}


def _z75(alpha: float) -> float:
    """0.75-quantile of the standard symmetric stable law, cached on a grid."""
    key = round(alpha, 3)
    if key not in _Z75_CACHE:
        _Z75_CACHE[key] = univ_quantile(0.75, UnivStableParams(key, 0.0, 1.0, 0.0))
    return _Z75_CACHE[key]


def _ratio_grid():
    # tail-weight ratio (q95-q05)/IQR of the standard symmetric law vs alpha,
    # computed once per process from the library's own quantiles
    if "grid" not in _RATIO_GRID:
        grid = np.linspace(0.35, 2.0, 34)
        ratios = np.array([
            (univ_quantile(0.95, UnivStableParams(a))
             - univ_quantile(0.05, UnivStableParams(a))) / (2.0 * _z75(a))
            for a in grid])
        _RATIO_GRID["grid"] = grid
        _RATIO_GRID["ratios"] = ratios
    return _RATIO_GRID["grid"], _RATIO_GRID["ratios"]


def quantile_init(data: np.ndarray) -> UnivStableParams:
    """Crude McCulloch-style starting point from sample quantiles."""
    x = np.sort(np.asarray(data, dtype=float))
    q05, q25, q50, q75, q95 = np.quantile(x, [0.05, 0.25, 0.5, 0.75, 0.95])
    iqr = q75 - q25
    if iqr <= 0.0:
        raise EstimationError("degenerate data: zero interquartile range")
    grid, ratios = _ratio_grid()
    ratio = (q95 - q05) / iqr
    alpha0 = float(grid[np.argmin(np.abs(ratios - ratio))])
    skew = np.clip(((q95 - q50) - (q50 - q05)) / (q95 - q05) * 2.0, -0.9, 0.9)
    if alpha0 > 1.95:
        skew = 0.0
    sigma0 = iqr / (2.0 * _z75(alpha0))
    return UnivStableParams(alpha0, float(skew), float(sigma0), float(q50))


def _loglik(data, params: UnivStableParams, fast: bool = True) -> float:
    data = np.asarray(data, dtype=float)
    if data.size <= 600:
        return float(np.sum(univ_logpdf(data, params, fast=fast)))
    # large samples: evaluate the density on an asinh-spaced grid once per
    # call and interpolate log f; the grid is dense enough for optimizer use
    z = (data - params.delta0) / params.sigma
    u = np.arcsinh(z)
    lo, hi = u.min(), u.max()
    span = max(hi - lo, 1e-6)
    nodes_u = np.linspace(lo - 1e-9 * span, hi + 1e-9 * span, 800)
    pdf_nodes, _ = _std_pdf_cdf(np.sinh(nodes_u), params.alpha, params.beta,
                                fast=True)
    log_nodes = np.log(np.maximum(pdf_nodes, 1e-300))
    vals = np.interp(u, nodes_u, log_nodes)
    return float(np.sum(vals) - data.size * math.log(params.sigma))


def fit_univ_ml(data, min_n: int = 10) -> UnivStableParams:
    """Maximum likelihood over (alpha, beta, sigma, delta) via Nelder-Mead.

    Box constraints are imposed through a smooth reparameterization; alpha is
    kept off the alpha=1 pinch by the 0-parameterization continuity.
    """
    x = np.asarray(data, dtype=float)
    if x.size < min_n:
        raise EstimationError(f"need at least {min_n} observations, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise EstimationError("data must be finite")
    init = quantile_init(x)

    def unpack(u):
        alpha = 0.3 + 1.7 / (1.0 + math.exp(-u[0]))       # (0.3, 2)
        beta = math.tanh(u[1])
        sigma = math.exp(u[2])
        return UnivStableParams(alpha, beta, sigma, u[3])

    def pack(p):
        a = min(max((p.alpha - 0.3) / 1.7, 1e-3), 1.0 - 1e-3)
        return np.array([math.log(a / (1.0 - a)),
                         math.atanh(min(max(p.beta, -0.999), 0.999)),
                         math.log(p.sigma), p.delta])

    def neg_ll(u):
        try:
            return -_loglik(x, unpack(u))
        except (ParameterError, FloatingPointError):
            return 1e12

    res = minimize(neg_ll, pack(init), method="Nelder-Mead",
                   options={"xatol": 1e-4, "fatol": 1e-5, "maxiter": 600})
    fitted = unpack(res.x)
    if fitted.alpha > 1.995:
        fitted = UnivStableParams(2.0, 0.0, fitted.sigma, fitted.delta)
        # re-polish the Gaussian corner analytically
        fitted = UnivStableParams(2.0, 0.0,
                                  float(np.std(x) / math.sqrt(2.0)), float(np.mean(x)))
        if _loglik(x, fitted) < -res.fun:
            fitted = unpack(res.x)
    if _loglik(x, fitted) < _loglik(x, init) - 1e-8:
        raise EstimationError("optimizer failed to improve on the quantile initializer")
    return fitted


def fit_univ_ml_fixed_alpha(data, alpha: float, symmetric: bool = False) -> UnivStableParams:
    """ML over (beta, sigma, delta) with alpha held fixed (beta=0 if symmetric)."""
    x = np.asarray(data, dtype=float)
    init = quantile_init(x)
    alpha = min(max(alpha, 0.3), 2.0)

    if symmetric:
        def unpack(u):
            return UnivStableParams(alpha, 0.0, math.exp(u[0]), u[1])
        u0 = np.array([math.log(init.sigma), init.delta])
    else:
        def unpack(u):
            return UnivStableParams(alpha, math.tanh(u[0]), math.exp(u[1]), u[2])
        u0 = np.array([math.atanh(min(max(init.beta, -0.999), 0.999)),
                       math.log(init.sigma), init.delta])

    def neg_ll(u):
        try:
            return -_loglik(x, unpack(u))
        except (ParameterError, FloatingPointError):
            return 1e12

    res = minimize(neg_ll, u0, method="Nelder-Mead",
                   options={"xatol": 1e-4, "fatol": 1e-6, "maxiter": 350})
    return unpack(res.x)
