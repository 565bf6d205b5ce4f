"""Fourier-cosine integrals of the Kotz-type weight function.

    I_{nu,r}(x; s) = int_{R^p} cos(t'x) (||t||^2)^nu exp(-r (||t||^2)^s) dt

for r > 0, integer nu >= 0 and 0 < s <= 1.  Closed forms exist for s = 1 and
for (s = 1/2, p = 2); elsewhere the value comes from one of two series, with
adaptive truncation, or from a radial-quadrature fallback when a series is
numerically unusable (the fallback is flagged to the caller).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln, jv

from .univariate import ParameterError

__all__ = ["KotzSpec", "kotz_at_zero", "kotz_integral", "kotz_integral_many"]

_REL_TAIL = 1e-14     # adaptive truncation: stop when |term| < _REL_TAIL * |sum|
_MAX_TERMS = 500
_STREIT_ARG_CAP = 40.0  # ||x||^2/(4 r^(1/s)) beyond this: catastrophic cancellation


@dataclass(frozen=True)
class KotzSpec:
    """Weight (||t||^2)^nu * exp(-r (||t||^2)^s) in dimension p."""

    nu: int
    r: float
    s: float
    dim: int

    def __post_init__(self):
        if not (isinstance(self.nu, (int, np.integer)) and self.nu >= 0):
            raise ParameterError(f"nu must be a nonnegative integer, got {self.nu}")
        if not self.r > 0.0:
            raise ParameterError(f"r must be positive, got {self.r}")
        if not (0.0 < self.s <= 1.0):
            raise ParameterError(f"s must be in (0, 1], got {self.s}")
        if not (isinstance(self.dim, (int, np.integer)) and self.dim >= 1):
            raise ParameterError(f"dim must be a positive integer, got {self.dim}")


def kotz_at_zero(spec: KotzSpec) -> float:
    """I_{nu,r}(0; s) = pi^(p/2) Gamma((2nu+p)/(2s)) / (s Gamma(p/2) r^((2nu+p)/(2s)))."""
    nu, r, s, p = spec.nu, spec.r, spec.s, spec.dim
    e = (2.0 * nu + p) / (2.0 * s)
    return math.exp(0.5 * p * math.log(math.pi) + gammaln(e) - gammaln(p / 2.0)
                    - e * math.log(r)) / s


def _iyengar_s1(y, spec: KotzSpec) -> float:
    # s = 1 finite form (Gaussian weight with polynomial factor)
    nu, r, p = spec.nu, spec.r, spec.dim
    pref = math.exp(0.5 * p * math.log(math.pi) + gammaln((2.0 * nu + p) / 2.0)
                    - ((2.0 * nu + p) / 2.0) * math.log(r)) * math.exp(-y / (4.0 * r))
    acc = 0.0
    for k in range(nu + 1):
        acc += (math.comb(nu, k) * (-y / (4.0 * r)) ** k
                * math.exp(-gammaln((p + 2.0 * k) / 2.0)))
    return pref * acc


def _nk01_s_half_p2(y, spec: KotzSpec) -> float:
    # s = 1/2, p = 2 finite double sum
    nu, r = spec.nu, spec.r
    w = y + r * r
    pref = (2.0 * math.pi * math.gamma(2.0 * (nu + 1.0)) * math.factorial(nu + 1)
            / (4.0 ** nu * r ** (2 * (nu + 1)) * w ** (2 * nu + 1.5)))
    outer = 0.0
    for k in range(nu + 1):
        c_k = (math.factorial(2 * (nu - k)) * math.factorial(2 * k)
               / (math.factorial(nu - k) * math.factorial(k) ** 2))
        inner = 0.0
        for ell in range(nu - k + 1):
            inner += ((-1.0) ** ell * 4.0 ** ell
                      * r ** (4 * nu + 3 - 2 * k - 2 * ell) * y ** ell
                      / (math.factorial(nu + 1 - ell) * math.factorial(nu - k - ell)
                         * math.factorial(2 * ell)))
        outer += c_k * w ** k * inner
    return pref * outer


def _streit_series(y, spec: KotzSpec):
    """Series in powers of ||x||^2; stated for 1/2 < s < 1. Returns (val, ok)."""
    nu, r, s, p = spec.nu, spec.r, spec.s, spec.dim
    yp = y / (4.0 * r ** (1.0 / s))
    if yp > _STREIT_ARG_CAP:
        return np.nan, False
    log_pref = (0.5 * p * math.log(math.pi) - math.log(s)
                - (2.0 * nu + p) / (2.0 * s) * math.log(r))
    total = 0.0
    max_mag = 0.0
    log_yp = math.log(yp) if yp > 0.0 else -math.inf
    for k in range(_MAX_TERMS):
        lt = (-gammaln(k + 1.0) + (k * log_yp if k > 0 else 0.0)
              + gammaln((2.0 * nu + p + 2.0 * k) / (2.0 * s))
              - gammaln((p + 2.0 * k) / 2.0))
        term = (-1.0) ** k * math.exp(lt)
        total += term
        max_mag = max(max_mag, abs(term))
        if k >= 2 and abs(term) < _REL_TAIL * abs(total):
            break
    else:
        return np.nan, False
    if max_mag * 1e-16 > 1e-11 * abs(total) or not math.isfinite(total):
        return np.nan, False
    return math.exp(log_pref) * total, True


def _gamma_sin_series(y, spec: KotzSpec):
    """Series in negative powers of ||x||^2; stated for 0 < s < 1/2."""
    nu, r, s, p = spec.nu, spec.r, spec.s, spec.dim
    if y <= 0.0:
        return np.nan, False
    yp = y / r ** (1.0 / s)
    log_pref = (0.5 * p - 1.0) * math.log(math.pi) - (2.0 * nu + p) / (2.0 * s) * math.log(r)
    log_yp = math.log(yp)
    total = 0.0
    max_mag = 0.0
    prev_mag = math.inf
    for k in range(1, _MAX_TERMS):  # k = 0 term vanishes: sin(pi*nu) = 0
        lt = (-gammaln(k + 1.0) + (2.0 * s * k + 2.0 * nu + p) * math.log(2.0)
              + gammaln(s * k + nu + p / 2.0) + gammaln(s * k + nu + 1.0)
              + (-(s * k + nu + p / 2.0)) * log_yp)
        if lt > 700.0:
            return np.nan, False
        mag = math.exp(lt)
        term = (-1.0) ** (k + 1) * mag * math.sin(math.pi * (s * k + nu))
        total += term
        max_mag = max(max_mag, mag)
        if s >= 0.5 and mag > prev_mag:
            # asymptotic use outside the stated regime: stop at smallest term
            if mag < _REL_TAIL * abs(total):
                break
            return np.nan, False
        prev_mag = mag
        if k >= 2 and mag < _REL_TAIL * abs(total):
            break
    else:
        return np.nan, False
    if max_mag * 1e-16 > 1e-11 * abs(total) or not math.isfinite(total):
        return np.nan, False
    return math.exp(log_pref) * total, True


def _radial_quadrature(y, spec: KotzSpec) -> float:
    """Fallback: 1D radial Fourier integral of the weight, adaptive quadrature."""
    nu, r, s, p = spec.nu, spec.r, spec.s, spec.dim
    xn = math.sqrt(y)
    t_max = (-math.log(1e-21) / r) ** (1.0 / (2.0 * s))
    if p == 1:
        val = quad(lambda t: t ** (2 * nu) * math.exp(-r * t ** (2.0 * s)),
                   0.0, t_max, weight="cos", wvar=xn, limit=400,
                   epsabs=1e-13, epsrel=1e-10)[0]
        return 2.0 * val
    bessel_nu = p / 2.0 - 1.0

    def integrand(t):
        return (t ** (2.0 * nu + p / 2.0) * math.exp(-r * t ** (2.0 * s))
                * jv(bessel_nu, t * xn))

    n_osc = int(xn * t_max / math.pi) + 1
    edges = [0.0] + [k * math.pi / xn for k in range(1, min(n_osc, 2000))] + [t_max]
    val = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        val += quad(integrand, a, b, epsabs=1e-13, epsrel=1e-10, limit=200)[0]
    return (2.0 * math.pi) ** (p / 2.0) * xn ** (1.0 - p / 2.0) * val


def kotz_integral(x, spec: KotzSpec, return_flag: bool = False):
    """I_{nu,r}(x; s) for a single point x (p-vector or scalar norm-squared ok).

    With return_flag=True also reports whether the quadrature fallback fired.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(~np.isfinite(x)):
        raise ParameterError("x must be finite")
    if x.shape[0] != spec.dim and x.shape[0] != 1:
        raise ParameterError(f"x has dimension {x.shape[0]}, spec has {spec.dim}")
    y = float(np.dot(x, x))
    val, flag = _kotz_scalar(y, spec)
    return (val, flag) if return_flag else val


def _kotz_scalar(y, spec: KotzSpec):
    if y == 0.0:
        return kotz_at_zero(spec), False
    if spec.s == 1.0:
        return _iyengar_s1(y, spec), False
    if spec.s == 0.5 and spec.dim == 2:
        return _nk01_s_half_p2(y, spec), False
    if spec.s > 0.5:
        val, ok = _streit_series(y, spec)
    else:
        val, ok = _gamma_sin_series(y, spec)
    if ok:
        return val, False
    return _radial_quadrature(y, spec), True


def kotz_integral_many(y_squared, spec: KotzSpec):
    """Vector version over squared norms; returns (values, n_fallbacks)."""
    y_squared = np.asarray(y_squared, dtype=float)
    out = np.empty(y_squared.shape[0])
    n_fallback = 0
    for i, y in enumerate(y_squared):
        out[i], flagged = _kotz_scalar(float(y), spec)
        n_fallback += flagged
    return out, n_fallback
