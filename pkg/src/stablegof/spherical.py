"""Density of the p-variate spherical stable law (CF exp(-||t||^alpha)).

The radial profile comes from three matched branches:

* a power series around 0 (absolutely convergent for alpha > 1),
* a tail series in negative powers (absolutely convergent for alpha < 1,
  asymptotic otherwise),
* a one-dimensional radial Fourier (Hankel) integral
  f(r) = (2 pi)^(-p/2) r^(1-p/2) int_0^inf e^(-t^alpha) J_{p/2-1}(t r) t^(p/2) dt
  for the band where neither series attains the target accuracy.

On top of the profile sits the amplitude machinery: f_R(u), the density of
||X||, is tabulated on the grid u_k = k/(N-k) and interpolated by a cubic
spline; beyond the grid the amplitude is treated as zero.
"""

from __future__ import annotations

import io
import math
import os
import struct
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
from scipy.special import gammaln, jv

from .univariate import ParameterError

__all__ = [
    "AmplitudeTable",
    "amplitude_density",
    "build_amplitude_table",
    "load_or_build_amplitude_table",
    "spherical_density",
    "spherical_density_radial",
    "lambda_weight",
    "save_amplitude_table",
    "load_amplitude_table",
]

_SERIES_TOL = 1e-11
_MAX_TERMS = 400


def _check_alpha_p(alpha, p):
    if not (0.0 < alpha <= 2.0):
        raise ParameterError(f"alpha must be in (0, 2], got {alpha}")
    if not (isinstance(p, (int, np.integer)) and p >= 1):
        raise ParameterError(f"dimension p must be a positive integer, got {p}")


def _density_at_zero(alpha, p):
    return math.exp(gammaln(p / alpha) - gammaln(p / 2.0)) / (
        alpha * 2.0 ** (p - 1) * math.pi ** (p / 2.0))


def _power_series(r, alpha, p):
    """Series around r=0; returns (values, ok mask)."""
    r = np.asarray(r, dtype=float)
    ks = np.arange(_MAX_TERMS)
    log_c = gammaln((p + 2 * ks) / alpha) - gammaln((p + 2 * ks) / 2.0) - gammaln(ks + 1.0)
    with np.errstate(divide="ignore"):
        log_rk = np.where(r[:, None] > 0.0,
                          ks[None, :] * (2.0 * np.log(np.maximum(r[:, None], 1e-300))
                                         - math.log(4.0)),
                          np.where(ks[None, :] == 0, 0.0, -np.inf))
    log_terms = log_c[None, :] + log_rk
    signs = np.where(ks % 2 == 0, 1.0, -1.0)
    terms = signs[None, :] * np.exp(np.minimum(log_terms, 705.0))
    mags = np.abs(terms)
    # alpha > 1: absolutely convergent; alpha <= 1: truncate at smallest term
    if alpha <= 1.0:
        growing = np.cumsum(mags[:, 1:] > mags[:, :-1], axis=1) > 0
        terms[:, 1:] = np.where(growing, 0.0, terms[:, 1:])
        kept_min = np.where(growing, np.inf, mags[:, 1:]).min(axis=1, initial=np.inf)
    else:
        kept_min = mags[:, -1]
    sums = terms.sum(axis=1)
    pref = 2.0 ** (1 - p) * math.pi ** (-p / 2.0) / alpha
    vals = pref * sums
    max_mag = np.abs(terms).max(axis=1)
    # accept when float cancellation and truncation are both inside tolerance
    ok = (max_mag * 1e-16 < _SERIES_TOL * np.abs(sums)) & \
         (kept_min < _SERIES_TOL * np.abs(sums)) & (sums > 0.0) & np.isfinite(sums)
    return vals, ok


def _tail_series(r, alpha, p):
    """Series in negative powers of r; returns (values, ok mask)."""
    r = np.asarray(r, dtype=float)
    ks = np.arange(1, _MAX_TERMS)
    log_c = (ks * alpha * math.log(2.0)
             + gammaln((alpha * ks + p) / 2.0) + gammaln(alpha * ks / 2.0 + 1.0)
             - gammaln(ks + 1.0))
    sin_k = np.sin(math.pi * alpha * ks / 2.0)
    signs = np.where(ks % 2 == 1, 1.0, -1.0)
    safe_r = np.maximum(r, 1e-300)
    log_rk = (-(alpha * ks + p))[None, :] * np.log(safe_r[:, None])
    log_terms = log_c[None, :] + log_rk
    with np.errstate(over="ignore"):
        terms = signs[None, :] * sin_k[None, :] * np.exp(np.minimum(log_terms, 700.0))
    mags = np.exp(np.minimum(log_terms, 700.0))
    if alpha >= 1.0:
        growing = np.cumsum(mags[:, 1:] > mags[:, :-1], axis=1) > 0
        terms[:, 1:] = np.where(growing, 0.0, terms[:, 1:])
        kept_min = np.where(growing, np.inf, mags[:, 1:]).min(axis=1, initial=np.inf)
        kept_min = np.minimum(kept_min, mags[:, 0])
    else:
        kept_min = mags[:, -1]
    sums = terms.sum(axis=1)
    vals = math.pi ** (-p / 2.0 - 1.0) * sums
    max_mag = mags.max(axis=1)
    ok = (max_mag * 1e-16 < _SERIES_TOL * np.abs(sums)) & \
         (kept_min < _SERIES_TOL * np.abs(sums)) & (sums > 0.0) & (r > 0.0)
    return vals, ok


def _bessel_integral(r, alpha, p):
    """Radial Fourier inversion at scalar r > 0 by adaptive quadrature."""
    nu = p / 2.0 - 1.0
    t_max = (-math.log(1e-21)) ** (1.0 / alpha)

    def integrand(t):
        return math.exp(-t ** alpha) * jv(nu, t * r) * t ** (p / 2.0)

    # breakpoints near Bessel oscillation nodes keep quad honest
    n_osc = int(r * t_max / math.pi) + 1
    if n_osc > 2:
        pts = [k * math.pi / r for k in range(1, min(n_osc, 1000))]
        val = 0.0
        edges = [0.0] + pts + [t_max]
        for a, b in zip(edges[:-1], edges[1:]):
            val += quad(integrand, a, b, epsabs=1e-14, epsrel=1e-11, limit=200)[0]
    else:
        val = quad(integrand, 0.0, t_max, epsabs=1e-14, epsrel=1e-11, limit=400)[0]
    return (2.0 * math.pi) ** (-p / 2.0) * r ** (1.0 - p / 2.0) * val


def spherical_density_radial(r, alpha, p):
    """Radial profile f_alpha(r) of the spherical stable density, vectorized."""
    _check_alpha_p(alpha, p)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r < 0.0):
        raise ParameterError("radius must be nonnegative")
    out = np.empty_like(r)
    if alpha == 2.0:
        out[:] = (4.0 * math.pi) ** (-p / 2.0) * np.exp(-r * r / 4.0)
        return out
    if alpha == 1.0:
        c = math.exp(gammaln((p + 1) / 2.0)) / math.pi ** ((p + 1) / 2.0)
        out[:] = c * (1.0 + r * r) ** (-(p + 1) / 2.0)
        return out
    out[:] = np.nan
    zero = r == 0.0
    out[zero] = _density_at_zero(alpha, p)
    todo = ~zero
    if np.any(todo):
        vals, ok = _power_series(r[todo], alpha, p)
        idx = np.flatnonzero(todo)
        out[idx[ok]] = vals[ok]
        rest = idx[~ok]
        if rest.size:
            vals_t, ok_t = _tail_series(r[rest], alpha, p)
            out[rest[ok_t]] = vals_t[ok_t]
            for i in rest[~ok_t]:
                out[i] = _bessel_integral(float(r[i]), alpha, p)
    return np.clip(out, 0.0, None)


def _surface_const(p):
    # total (p-1)-sphere measure 2 pi^{p/2} / Gamma(p/2)
    return 2.0 * math.pi ** (p / 2.0) / math.exp(gammaln(p / 2.0))


def amplitude_density(u, alpha, p):
    """Density of ||X|| at u >= 0 for the spherical stable law."""
    _check_alpha_p(alpha, p)
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(u_arr < 0.0):
        raise ParameterError("amplitude argument must be nonnegative")
    vals = _surface_const(p) * u_arr ** (p - 1) * spherical_density_radial(u_arr, alpha, p)
    if p == 1:
        vals = 2.0 * spherical_density_radial(u_arr, alpha, p)
    return vals[0] if np.isscalar(u) or np.ndim(u) == 0 else vals


@dataclass
class AmplitudeTable:
    """Precomputed amplitude density f_R on the grid u_k = k/(N-k)."""

    alpha: float
    dim: int
    n_grid: int
    grid: np.ndarray
    values: np.ndarray
    spline: CubicSpline = field(repr=False, default=None)
    density_at_zero: float = 0.0

    def __post_init__(self):
        if self.spline is None:
            self.spline = CubicSpline(self.grid, self.values)
        if self.density_at_zero == 0.0:
            self.density_at_zero = _density_at_zero(self.alpha, self.dim)

    def amplitude(self, u):
        """Spline-backed f_R(u); zero beyond the grid (u >= N)."""
        u_arr = np.atleast_1d(np.asarray(u, dtype=float))
        out = np.zeros_like(u_arr)
        inside = (u_arr >= 0.0) & (u_arr <= self.grid[-1])
        out[inside] = np.clip(self.spline(u_arr[inside]), 0.0, None)
        return out[0] if np.ndim(u) == 0 else out

    def radial(self, u):
        """Radial profile f_alpha at ||x|| = u via the amplitude relation."""
        u_arr = np.atleast_1d(np.asarray(u, dtype=float))
        out = np.empty_like(u_arr)
        zero = u_arr < 1e-12
        out[zero] = self.density_at_zero
        nz = ~zero
        if self.dim == 1:
            out[nz] = 0.5 * self.amplitude(u_arr[nz])
        else:
            out[nz] = (self.amplitude(u_arr[nz])
                       / (_surface_const(self.dim) * u_arr[nz] ** (self.dim - 1)))
        return out[0] if np.ndim(u) == 0 else out


def build_amplitude_table(alpha, p, n_grid: int = 10_000) -> AmplitudeTable:
    """Tabulate f_R on u_k = k/(N-k), k=0..N-1, with cubic-spline interpolation."""
    _check_alpha_p(alpha, p)
    if n_grid < 100:
        raise ParameterError("n_grid must be >= 100")
    k = np.arange(n_grid, dtype=float)
    grid = k / (n_grid - k)
    values = amplitude_density(grid, alpha, p)
    values = np.asarray(values, dtype=float)
    return AmplitudeTable(alpha=float(alpha), dim=int(p), n_grid=int(n_grid),
                          grid=grid, values=values)


def spherical_density(x, alpha, table: AmplitudeTable):
    """Spherical stable density at point(s) x using a prebuilt table."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    if pts.shape[1] != table.dim:
        raise ParameterError(
            f"dimension mismatch: x has p={pts.shape[1]}, table p={table.dim}")
    if abs(alpha - table.alpha) > 1e-12:
        raise ParameterError("table was built for a different alpha")
    r = np.sqrt(np.sum(pts * pts, axis=1))
    out = table.radial(r)
    return float(out[0]) if single else out


def lambda_weight(x, alpha0, r, table: AmplitudeTable):
    """Fourier-cosine transform of exp(-r ||t||^alpha0):
    (2 pi)^p r^(-p/alpha0) f_alpha0(x / r^(1/alpha0))."""
    if r <= 0.0:
        raise ParameterError("r must be positive")
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    p = table.dim
    scale = r ** (-1.0 / alpha0)
    vals = ((2.0 * math.pi) ** p * r ** (-p / alpha0)
            * np.asarray(table.radial(np.sqrt(np.sum(pts * pts, axis=1)) * scale)))
    return float(vals[0]) if single else vals


# ---------------------------------------------------------------------------
# Binary cache: magic, version, alpha, p, N, grid, values (little endian f64)
# ---------------------------------------------------------------------------

_CACHE_MAGIC = b"SGAT"
_CACHE_VERSION = 1


def save_amplitude_table(table: AmplitudeTable, path):
    with open(path, "wb") as fh:
        fh.write(_CACHE_MAGIC)
        fh.write(struct.pack("<IdII", _CACHE_VERSION, table.alpha,
                             table.dim, table.n_grid))
        fh.write(table.grid.astype("<f8").tobytes())
        fh.write(table.values.astype("<f8").tobytes())


def load_amplitude_table(path) -> AmplitudeTable:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _CACHE_MAGIC:
            raise ValueError(f"not an amplitude table cache: {path}")
        version, alpha, dim, n_grid = struct.unpack("<IdII", fh.read(20))
        if version != _CACHE_VERSION:
            raise ValueError(f"unsupported cache version {version}")
        grid = np.frombuffer(fh.read(8 * n_grid), dtype="<f8").copy()
        values = np.frombuffer(fh.read(8 * n_grid), dtype="<f8").copy()
    return AmplitudeTable(alpha=alpha, dim=dim, n_grid=n_grid,
                          grid=grid, values=values)


def _cache_key(alpha, p, n_grid):
    return f"amp_a{alpha:.6f}_p{p}_N{n_grid}_v{_CACHE_VERSION}.bin"


def load_or_build_amplitude_table(alpha, p, n_grid: int = 10_000,
                                  cache_dir=None) -> AmplitudeTable:
    """Fetch a table from the cache directory (STABLE_GOF_CACHE) or build it."""
    cache_dir = cache_dir or os.environ.get("STABLE_GOF_CACHE")
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        path = os.path.join(cache_dir, _cache_key(alpha, p, n_grid))
        if os.path.exists(path):
            return load_amplitude_table(path)
        table = build_amplitude_table(alpha, p, n_grid)
        save_amplitude_table(table, path)
        return table
    return build_amplitude_table(alpha, p, n_grid)
