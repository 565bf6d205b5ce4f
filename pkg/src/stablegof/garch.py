"""CCC-GARCH(1,1) with stable innovations: simulation, equation-by-equation
estimation, residual extraction, and one-step-ahead VaR forecasting.

The volatility recursion acts on the squared-scale state vector

    h_j = mu + A1 x_{j-1}^(2) + B1 h_{j-1},      Q_j = D_j R D_j,

with D_j = diag(sqrt(h_j)); observations are X_j = D_j R^(1/2) eps_j so the
exact inverse eps_j = R^(-1/2) D_j^(-1) X_j reproduces the innovations.  A
config switch lets B1 act on the unsquared scales instead (an alternative
reading of the recursion; the squared form is the default).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy.optimize import minimize
from scipy.stats import kendalltau

from .spherical import AmplitudeTable, build_amplitude_table
from .univariate import ParameterError, UnivStableParams, univ_quantile

__all__ = [
    "CCCParams",
    "GarchFit",
    "simulate_ccc",
    "sample_ccc",
    "residuals",
    "ebe_fit",
    "one_step_scales",
    "forecast_var",
    "default_simulation_preset",
]


@dataclass(frozen=True)
class CCCParams:
    """Parameters of the CCC-GARCH(1,1) recursion."""

    mu: np.ndarray
    a1: np.ndarray
    b1: np.ndarray
    corr: np.ndarray
    omega: np.ndarray = None          # optional observation intercept
    q0_squared: np.ndarray = None     # initial squared scales; stationary mean if None
    b_acts_on: str = "squared"        # "squared" (as printed) or "scales"

    def __post_init__(self):
        mu = np.atleast_1d(np.asarray(self.mu, dtype=float))
        p = mu.shape[0]
        a1 = np.asarray(self.a1, dtype=float)
        b1 = np.asarray(self.b1, dtype=float)
        if a1.ndim == 1:
            a1 = np.diag(a1)
        if b1.ndim == 1:
            b1 = np.diag(b1)
        corr = np.atleast_2d(np.asarray(self.corr, dtype=float))
        if np.any(mu <= 0.0):
            raise ParameterError("mu must be positive elementwise")
        if a1.shape != (p, p) or b1.shape != (p, p) or corr.shape != (p, p):
            raise ParameterError("A1, B1, R must be p x p")
        if np.any(a1 < 0.0) or np.any(b1 < 0.0):
            raise ParameterError("A1 and B1 must be nonnegative elementwise")
        if not np.allclose(corr, corr.T, atol=1e-10) or \
                not np.allclose(np.diag(corr), 1.0, atol=1e-10):
            raise ParameterError("R must be symmetric with unit diagonal")
        if np.any(np.linalg.eigvalsh(corr) <= 0.0):
            raise ParameterError("R must be positive definite")
        if self.b_acts_on not in ("squared", "scales"):
            raise ParameterError("b_acts_on must be 'squared' or 'scales'")
        rho = np.max(np.abs(np.linalg.eigvals(a1 + b1)))
        if rho >= 1.0:
            warnings.warn(f"nonstationary recursion: spectral radius {rho:.3f} >= 1")
        omega = self.omega
        if omega is not None:
            omega = np.atleast_1d(np.asarray(omega, dtype=float))
            if omega.shape[0] != p:
                raise ParameterError("omega must have length p")
        q0 = self.q0_squared
        if q0 is not None:
            q0 = np.atleast_1d(np.asarray(q0, dtype=float))
            if q0.shape[0] != p or np.any(q0 <= 0.0):
                raise ParameterError("q0_squared must be positive of length p")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "b1", b1)
        object.__setattr__(self, "corr", corr)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "q0_squared", q0)

    @property
    def dim(self) -> int:
        return self.mu.shape[0]

    def stationary_squared_scales(self) -> np.ndarray:
        if self.b_acts_on == "squared":
            m = self.a1 + self.b1
            if np.max(np.abs(np.linalg.eigvals(m))) < 1.0:
                return np.linalg.solve(np.eye(self.dim) - m, self.mu)
        return self.mu.copy()

    def initial_squared_scales(self) -> np.ndarray:
        if self.q0_squared is not None:
            return self.q0_squared.copy()
        return self.stationary_squared_scales()


def default_simulation_preset(p: int, a: float = 0.2, b: float = 0.3,
                              rho: float = 0.5) -> CCCParams:
    """The simulation-study preset: A1 = a I, B1 = b I, R off-diagonals rho."""
    corr = np.full((p, p), rho)
    np.fill_diagonal(corr, 1.0)
    return CCCParams(np.ones(p), a * np.eye(p), b * np.eye(p), corr)


def _sym_sqrt(m):
    vals, vecs = np.linalg.eigh(m)
    if np.any(vals <= 0.0):
        raise ParameterError("matrix not positive definite")
    return (vecs * np.sqrt(vals)) @ vecs.T


def _filter_scales(params: CCCParams, x_centered: np.ndarray) -> np.ndarray:
    """Squared-scale paths h_j driven by observed (centered) data."""
    n, p = x_centered.shape
    h = np.empty((n, p))
    h[0] = params.initial_squared_scales()
    x2 = x_centered * x_centered
    on_squared = params.b_acts_on == "squared"
    for j in range(1, n):
        carry = h[j - 1] if on_squared else np.sqrt(h[j - 1])
        h[j] = params.mu + params.a1 @ x2[j - 1] + params.b1 @ carry
        if np.any(h[j] > 1e100):
            raise FloatingPointError(f"explosive volatility path at step {j}")
    return h


def simulate_ccc(params: CCCParams, innovations) -> np.ndarray:
    """Deterministic transform of innovations into CCC-GARCH observations."""
    eps = np.asarray(innovations, dtype=float)
    if eps.ndim != 2 or eps.shape[1] != params.dim:
        raise ParameterError("innovations must be n x p")
    n, p = eps.shape
    corr_half = _sym_sqrt(params.corr)
    eps_corr = eps @ corr_half          # rows R^(1/2) eps_j
    x = np.empty((n, p))
    h = params.initial_squared_scales()
    on_squared = params.b_acts_on == "squared"
    for j in range(n):
        x[j] = np.sqrt(h) * eps_corr[j]
        carry = h if on_squared else np.sqrt(h)
        h = params.mu + params.a1 @ (x[j] * x[j]) + params.b1 @ carry
        if np.any(h > 1e100):
            raise FloatingPointError(f"explosive volatility path at step {j}")
    if params.omega is not None:
        x = x + params.omega
    return x


def sample_ccc(params: CCCParams, n: int, innovation_sampler, rng,
               burn_in: int = 50) -> np.ndarray:
    """Simulate n observations after a burn-in period."""
    eps = innovation_sampler(n + burn_in, rng)
    x = simulate_ccc(params, eps)
    return x[burn_in:]


def residuals(x, params: CCCParams) -> np.ndarray:
    """eps_j = R^(-1/2) D_j^(-1) (X_j - omega): exact inverse of simulate_ccc."""
    x = np.asarray(x, dtype=float)
    centered = x - params.omega if params.omega is not None else x
    h = _filter_scales(params, centered)
    corr_inv_half = np.linalg.inv(_sym_sqrt(params.corr))
    return (centered / np.sqrt(h)) @ corr_inv_half


@dataclass
class GarchFit:
    """EbE estimate with scale paths and standardized residuals."""

    params_hat: CCCParams
    conditional_scales: np.ndarray      # q_{k,j} (unsquared), n x p
    residuals: np.ndarray
    loglik_per_equation: np.ndarray
    converged: np.ndarray


@njit(cache=True)
def _h_path_1d(x2, mu, a, b, h0, on_squared):
    n = x2.shape[0]
    h = np.empty(n)
    h[0] = h0
    for j in range(1, n):
        carry = h[j - 1] if on_squared else math.sqrt(h[j - 1])
        h[j] = mu + a * x2[j - 1] + b * carry
        if h[j] > 1e100:
            return h, j
    return h, -1


def _equation_negll(u, x_k, x2_k, table_radial, on_squared):
    u = np.minimum(u, 700.0)
    mu, a, b = math.exp(u[0]), math.exp(u[1]), math.exp(u[2])
    unstable = (a + b > 0.9995) if on_squared else (b > 0.9995)
    if unstable:
        return 1e15
    h0 = mu / max(1.0 - a - b, 1e-3) if on_squared else mu / max(1.0 - b, 1e-3)
    h, bad = _h_path_1d(x2_k, mu, a, b, h0, on_squared)
    if bad >= 0:
        return 1e15
    q = np.sqrt(h)
    z = x_k / q
    dens = np.maximum(table_radial(np.abs(z)), 1e-300)
    # the 1e-4*b term breaks the (mu, b) ridge at a = 0 (constant-volatility
    # models are exactly equivalent along mu/(1-b)); negligible elsewhere
    return float(np.sum(np.log(q)) - np.sum(np.log(dens))) + 1e-4 * b


def _estimate_correlation(resid_corr, method: str):
    p = resid_corr.shape[1]
    if method == "kendall":
        r = np.eye(p)
        for i in range(p):
            for j in range(i + 1, p):
                tau = kendalltau(resid_corr[:, i], resid_corr[:, j]).statistic
                r[i, j] = r[j, i] = math.sin(math.pi * tau / 2.0)
    else:
        r = np.corrcoef(resid_corr.T)
    # shrink and project to a PD correlation matrix
    r = 0.999 * r + 0.001 * np.eye(p)
    vals, vecs = np.linalg.eigh(r)
    if np.any(vals <= 1e-8):
        vals = np.maximum(vals, 1e-8)
        r = (vecs * vals) @ vecs.T
        d = np.sqrt(np.diag(r))
        r = r / np.outer(d, d)
    np.fill_diagonal(r, 1.0)
    return r


def ebe_fit(x, alpha0, table: AmplitudeTable = None, intercept: bool = False,
            corr_method: str = "kendall", b_acts_on: str = "squared") -> GarchFit:
    """Equation-by-equation fit: per-series (mu_k, a_k, b_k) by stable QML with
    the symmetric unit-dispersion density, then the correlation matrix from the
    scale-standardized residuals."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ParameterError("sample must be n x p")
    n, p = x.shape
    if table is None:
        table = build_amplitude_table(alpha0, 1, 4000)
    if table.dim != 1 or abs(table.alpha - alpha0) > 1e-12:
        raise ParameterError("need a univariate amplitude table at alpha0")
    on_squared = b_acts_on == "squared"

    omega_hat = np.median(x, axis=0) if intercept else None
    centered = x - omega_hat if intercept else x

    mus = np.empty(p)
    avec = np.empty(p)
    bvec = np.empty(p)
    logliks = np.empty(p)
    conv = np.zeros(p, dtype=bool)
    for k in range(p):
        xk = centered[:, k]
        x2k = xk * xk
        scale2 = np.quantile(np.abs(xk), 0.75) ** 2
        best = None
        for (a0_, b0_) in ((0.15, 0.4), (0.05, 0.85)):
            u0 = np.array([math.log(max(scale2 * (1.0 - a0_ - b0_), 1e-6)),
                           math.log(a0_), math.log(b0_)])
            res = minimize(_equation_negll, u0,
                           args=(xk, x2k, table.radial, on_squared),
                           method="Nelder-Mead",
                           options={"xatol": 1e-5, "fatol": 1e-7, "maxiter": 800})
            if best is None or res.fun < best.fun:
                best = res
        if not best.success:
            # refit from a perturbed start, keep the better optimum
            jitter = best.x + 0.25 * np.random.default_rng(k).standard_normal(3)
            res2 = minimize(_equation_negll, jitter,
                            args=(xk, x2k, table.radial, on_squared),
                            method="Nelder-Mead",
                            options={"xatol": 1e-5, "fatol": 1e-7, "maxiter": 800})
            if res2.fun < best.fun:
                best = res2
        mus[k], avec[k], bvec[k] = np.exp(best.x)
        logliks[k] = -best.fun
        conv[k] = bool(best.success)

    params_mid = CCCParams(mus, np.diag(avec), np.diag(bvec), np.eye(p),
                           omega=omega_hat, b_acts_on=b_acts_on)
    h = _filter_scales(params_mid, centered)
    q = np.sqrt(h)
    resid_corr = centered / q
    corr = _estimate_correlation(resid_corr, corr_method)
    params_hat = CCCParams(mus, np.diag(avec), np.diag(bvec), corr,
                           omega=omega_hat, b_acts_on=b_acts_on)
    inv_half = np.linalg.inv(_sym_sqrt(corr))
    resid = resid_corr @ inv_half
    return GarchFit(params_hat, q, resid, logliks, conv)


def one_step_scales(params: CCCParams, x) -> np.ndarray:
    """Squared scales h_{n+1} one step beyond the sample."""
    x = np.asarray(x, dtype=float)
    centered = x - params.omega if params.omega is not None else x
    h = _filter_scales(params, centered)
    carry = h[-1] if params.b_acts_on == "squared" else np.sqrt(h[-1])
    return params.mu + params.a1 @ (centered[-1] ** 2) + params.b1 @ carry


def forecast_var(fit: GarchFit, x, alpha0, level, weights):
    """One-step-ahead portfolio VaR bounds (lower, upper) at the given level.

    The portfolio w'X_{n+1} is symmetric stable with scale sqrt(w'Q_{n+1}w)
    around w'omega; bounds are its level- and (1-level)-quantiles.
    """
    if not (0.0 < level < 0.5):
        raise ParameterError("level must be in (0, 0.5)")
    w = np.atleast_1d(np.asarray(weights, dtype=float))
    params = fit.params_hat
    if w.shape[0] != params.dim:
        raise ParameterError("weights must have length p")
    if abs(w.sum() - 1.0) > 1e-8:
        raise ParameterError("weights must sum to 1")
    h_next = one_step_scales(params, x)
    d = np.diag(np.sqrt(h_next))
    q_next = d @ params.corr @ d
    sigma_pf = math.sqrt(float(w @ q_next @ w))
    center = float(w @ params.omega) if params.omega is not None else 0.0
    dist = UnivStableParams(alpha0, 0.0, sigma_pf, center)
    lower = univ_quantile(level, dist)
    upper = univ_quantile(1.0 - level, dist)
    return lower, upper
