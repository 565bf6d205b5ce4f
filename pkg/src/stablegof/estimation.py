"""Parameter estimation for the elliptical and skew stable models.

Location/dispersion (delta, Q) by maximum likelihood over (delta, L) with
Q = L L' and L lower triangular, initialized from projection estimates;
the stability index by averaged coordinate-wise univariate ML; the discrete
spectral measure (p = 2) by projections onto an equispaced circle grid and a
nonnegative least-squares inversion of the scale/skewness functionals.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular
from scipy.optimize import minimize, nnls

from .sampling import DiscreteSpectralMeasure, SkewStableModel
from .spherical import AmplitudeTable
from .univariate import (
    EstimationError,
    ParameterError,
    UnivStableParams,
    _z75,
    fit_univ_ml,
    fit_univ_ml_fixed_alpha,
)

__all__ = [
    "FitResult",
    "projection_init",
    "fit_ml",
    "standardize",
    "estimate_alpha",
    "estimate_spectral_measure",
    "estimate_skew_model",
]


@dataclass
class FitResult:
    """Fitted location and dispersion with the optimizer trace."""

    delta_hat: np.ndarray
    chol_hat: np.ndarray
    loglik: float
    iterations: int
    converged: bool

    @property
    def dispersion_hat(self) -> np.ndarray:
        return self.chol_hat @ self.chol_hat.T


def _as_matrix(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ParameterError("sample must be an n x p matrix")
    if not np.all(np.isfinite(x)):
        raise ParameterError("sample must be finite")
    return x


def projection_init(x, alpha0):
    """Quantile-based (delta0, Q0): coordinate axes give the diagonal of Q,
    (e_i +/- e_j)/sqrt(2) projections give off-diagonals."""
    x = _as_matrix(x)
    n, p = x.shape
    if n <= p:
        raise EstimationError("need n > p observations")
    z75 = _z75(min(max(alpha0, 0.5), 2.0))

    def disp(v):
        q25, q75 = np.quantile(v, [0.25, 0.75])
        iqr = q75 - q25
        if iqr <= 0.0:
            raise EstimationError("degenerate projection: zero IQR")
        return (iqr / (2.0 * z75)) ** 2

    delta0 = np.median(x, axis=0)
    q0 = np.empty((p, p))
    for i in range(p):
        q0[i, i] = disp(x[:, i])
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for i in range(p):
        for j in range(i + 1, p):
            plus = disp((x[:, i] + x[:, j]) * inv_sqrt2)
            minus = disp((x[:, i] - x[:, j]) * inv_sqrt2)
            q0[i, j] = q0[j, i] = 0.5 * (plus - minus)
    # project to the SPD cone
    vals, vecs = np.linalg.eigh(q0)
    floor = 1e-6 * np.trace(q0) / p
    vals = np.maximum(vals, floor)
    return delta0, (vecs * vals) @ vecs.T


def _stable_loglik(x, delta, chol, table: AmplitudeTable) -> float:
    n = x.shape[0]
    z = solve_triangular(chol, (x - delta).T, lower=True).T
    r = np.sqrt(np.sum(z * z, axis=1))
    dens = np.maximum(table.radial(r), 1e-300)
    return float(-n * np.sum(np.log(np.diag(chol))) + np.sum(np.log(dens)))


def fit_ml(x, alpha0, table: AmplitudeTable = None, *, max_iter: int = 2000,
           tol: float = 1e-6) -> FitResult:
    """ML for (delta, Q) with Q = L L'.  alpha0=2 has the Gaussian closed form;
    otherwise Nelder-Mead over (delta, vech L) with log-reparameterized diagonal,
    restarted once from a perturbed copy of the projection initializer."""
    x = _as_matrix(x)
    n, p = x.shape
    if n <= p * (p + 3) // 2:
        raise EstimationError("not enough observations for all parameters")

    if alpha0 == 2.0:
        delta_hat = x.mean(axis=0)
        centered = x - delta_hat
        q_hat = (centered.T @ centered) / n / 2.0
        chol = np.linalg.cholesky(q_hat)
        ll = (_stable_loglik(x, delta_hat, chol, table) if table is not None
              else float(-n / 2.0 * np.log(np.linalg.det(2.0 * q_hat))
                         - n * p / 2.0 * math.log(2.0 * math.pi) - n * p / 2.0))
        return FitResult(delta_hat, chol, ll, 0, True)

    if table is None:
        raise ParameterError("fit_ml with alpha0 < 2 needs an AmplitudeTable")
    if abs(table.alpha - alpha0) > 1e-12 or table.dim != p:
        raise ParameterError("table does not match (alpha0, p)")

    delta0, q0 = projection_init(x, alpha0)
    chol0 = np.linalg.cholesky(q0)
    tril_idx = np.tril_indices(p, k=-1)

    def unpack(u):
        delta = u[:p]
        chol = np.zeros((p, p))
        chol[np.diag_indices(p)] = np.exp(u[p:2 * p])
        chol[tril_idx] = u[2 * p:]
        return delta, chol

    def pack(delta, chol):
        return np.concatenate([delta, np.log(np.diag(chol)), chol[tril_idx]])

    def neg_ll(u):
        delta, chol = unpack(u)
        try:
            return -_stable_loglik(x, delta, chol, table)
        except (np.linalg.LinAlgError, FloatingPointError):
            return 1e15

    best = None
    iterations = 0
    converged = False
    rng = np.random.default_rng(12345)
    for attempt in range(2):
        u0 = pack(delta0, chol0)
        if attempt == 1:
            u0 = u0 + 0.05 * rng.standard_normal(u0.shape[0])
        res = minimize(neg_ll, u0, method="Nelder-Mead",
                       options={"xatol": tol, "fatol": tol, "maxiter": max_iter})
        iterations += res.nit
        if best is None or res.fun < best.fun:
            best = res
        converged = converged or res.success
        if best.fun < 1e14 and attempt == 0 and res.success:
            break
    delta_hat, chol_hat = unpack(best.x)
    ll = -best.fun
    init_ll = _stable_loglik(x, delta0, chol0, table)
    if ll < init_ll:
        delta_hat, chol_hat, ll = delta0, chol0, init_ll
        converged = False
    return FitResult(delta_hat, chol_hat, ll, iterations, converged)


def standardize(x, delta_hat, q_hat) -> np.ndarray:
    """Y_j = Q^(-1/2) (X_j - delta) with the symmetric square root."""
    x = _as_matrix(x)
    q_hat = np.asarray(q_hat, dtype=float)
    vals, vecs = np.linalg.eigh(q_hat)
    if np.any(vals <= 0.0):
        raise ParameterError("dispersion estimate is not positive definite")
    inv_sqrt = (vecs / np.sqrt(vals)) @ vecs.T
    return (x - np.asarray(delta_hat, dtype=float)) @ inv_sqrt


def estimate_alpha(x, clamp=(0.1, 2.0)) -> float:
    """Average of coordinate-wise univariate ML stability indices."""
    x = _as_matrix(x)
    alphas = [fit_univ_ml(x[:, j]).alpha for j in range(x.shape[1])]
    return float(min(max(np.mean(alphas), clamp[0] + 1e-9), clamp[1]))


def estimate_spectral_measure(x, alpha, n_points: int = 10,
                              return_projections: bool = False):
    """Projection estimator of the discrete spectral measure on the circle (p=2).

    Coordinates are centered by univariate ML locations; each projection onto
    the grid direction s_k yields (beta_k, sigma_k) by fixed-alpha ML, and the
    weights solve sigma_k^alpha = sum_j gamma_j |s_k's_j|^alpha and
    beta_k sigma_k^alpha = sum_j gamma_j |s_k's_j|^alpha sign(s_k's_j)
    by nonnegative least squares.
    """
    x = _as_matrix(x)
    n, p = x.shape
    if p != 2:
        raise ParameterError("spectral measure estimation is implemented for p = 2")

    def location(v):
        try:
            return fit_univ_ml(v).delta
        except EstimationError:
            return float(np.median(v))  # constant coordinate: point mass

    delta_hat = np.array([location(x[:, j]) for j in range(p)])
    centered = x - delta_hat

    pts = DiscreteSpectralMeasure.circle_grid(n_points)
    sig = np.empty(n_points)
    bet = np.empty(n_points)
    for k in range(n_points):
        proj = centered @ pts[k]
        try:
            fk = fit_univ_ml_fixed_alpha(proj, alpha)
            sig[k] = fk.sigma
            bet[k] = fk.beta
        except EstimationError:
            sig[k] = 0.0  # degenerate projection carries no spectral mass
            bet[k] = 0.0

    dot = pts @ pts.T                            # (K, K)
    a_abs = np.abs(dot) ** alpha
    a_sgn = a_abs * np.sign(dot)
    design = np.vstack([a_abs, a_sgn])
    rhs = np.concatenate([sig ** alpha, bet * sig ** alpha])
    flagged = False
    try:
        gamma, _ = nnls(design, rhs)
    except RuntimeError:
        flagged = True
        ridge = np.vstack([design, 1e-6 * np.eye(n_points)])
        gamma, _ = nnls(ridge, np.concatenate([rhs, np.zeros(n_points)]))
    if np.linalg.cond(design) > 1e12:
        flagged = True
    if flagged:
        warnings.warn("spectral-measure design nearly singular; solution regularized")
    measure = DiscreteSpectralMeasure(pts, gamma)
    if return_projections:
        return delta_hat, measure, (sig, bet)
    return delta_hat, measure


def estimate_skew_model(x, alpha=None, n_points: int = 10):
    """Fitted SkewStableModel; alpha estimated coordinate-wise when None."""
    x = _as_matrix(x)
    if alpha is None:
        alpha = estimate_alpha(x)
    delta_hat, measure = estimate_spectral_measure(x, alpha, n_points)
    return SkewStableModel(alpha, delta_hat, measure)
