"""Samplers for multivariate stable laws and the study's comparison alternatives.

Conventions: the elliptical law has CF exp(i t'delta - (t'Q t)^(alpha/2)); the
skew law with a discrete spectral measure has CF
exp(-sum_k gamma_k psi_alpha(t's_k) + i t'delta).  At alpha = 2 the elliptical
law is N(delta, 2Q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .univariate import (
    ParameterError,
    PositiveStableSpec,
    UnivStableParams,
    sample_positive_stable,
    sample_univ_stable,
)

__all__ = [
    "EllipticalStableModel",
    "DiscreteSpectralMeasure",
    "SkewStableModel",
    "sample_elliptical",
    "sample_skew",
    "sample_alternative",
    "sample_spherical",
    "elliptical_cf",
    "skew_cf",
    "psi_alpha",
    "substream",
    "ALTERNATIVE_FAMILIES",
]


def substream(master_seed, *indices) -> np.random.Generator:
    """Independent RNG derived from a master seed and replicate indices."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=int(master_seed),
                               spawn_key=tuple(int(i) for i in indices)))


@dataclass(frozen=True)
class EllipticalStableModel:
    """Elliptical stable law S_alpha(delta, Q)."""

    alpha: float
    delta: np.ndarray
    dispersion: np.ndarray

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0):
            raise ParameterError(f"alpha must be in (0, 2], got {self.alpha}")
        delta = np.atleast_1d(np.asarray(self.delta, dtype=float))
        q = np.atleast_2d(np.asarray(self.dispersion, dtype=float))
        if q.shape != (delta.shape[0], delta.shape[0]):
            raise ParameterError("dispersion must be p x p matching delta")
        if not np.allclose(q, q.T, atol=1e-10):
            raise ParameterError("dispersion must be symmetric")
        try:
            chol = np.linalg.cholesky(q)
        except np.linalg.LinAlgError as exc:
            raise ParameterError("dispersion must be positive definite") from exc
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "dispersion", q)
        object.__setattr__(self, "_chol", chol)

    @property
    def dim(self) -> int:
        return self.delta.shape[0]


@dataclass(frozen=True)
class DiscreteSpectralMeasure:
    """Mass points s_k on the unit sphere with nonnegative weights gamma_k."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        w = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if pts.shape[0] != w.shape[0] or pts.shape[0] < 1:
            raise ParameterError("points and weights must have equal length K >= 1")
        norms = np.linalg.norm(pts, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ParameterError("mass points must lie on the unit sphere")
        if np.any(w < 0.0):
            raise ParameterError("weights must be nonnegative")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @staticmethod
    def circle_grid(n_points: int) -> np.ndarray:
        """Equispaced unit vectors s_k = (cos, sin)(2 pi (k-1)/K) on the circle."""
        k = np.arange(n_points)
        ang = 2.0 * math.pi * k / n_points
        return np.column_stack([np.cos(ang), np.sin(ang)])


@dataclass(frozen=True)
class SkewStableModel:
    """Skew stable law with a discrete spectral measure."""

    alpha: float
    delta: np.ndarray
    measure: DiscreteSpectralMeasure

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0):
            raise ParameterError(f"alpha must be in (0, 2], got {self.alpha}")
        delta = np.atleast_1d(np.asarray(self.delta, dtype=float))
        if delta.shape[0] != self.measure.dim:
            raise ParameterError("delta dimension must match the measure")
        object.__setattr__(self, "delta", delta)

    @property
    def dim(self) -> int:
        return self.delta.shape[0]


def psi_alpha(u, alpha):
    """Exponent kernel of the stable CF: psi_alpha(u), complex-valued."""
    u = np.asarray(u, dtype=float)
    au = np.abs(u)
    if alpha == 1.0:
        with np.errstate(divide="ignore", invalid="ignore"):
            logau = np.where(au > 0.0, np.log(au), 0.0)
        return au + 1j * (2.0 / math.pi) * np.sign(u) * au * logau
    return au ** alpha * (1.0 - 1j * np.sign(u) * math.tan(math.pi * alpha / 2.0))


def elliptical_cf(t, model: EllipticalStableModel):
    """CF of the elliptical law at rows of t."""
    t = np.atleast_2d(np.asarray(t, dtype=float))
    quad = np.einsum("ij,jk,ik->i", t, model.dispersion, t)
    return np.exp(1j * t @ model.delta - quad ** (model.alpha / 2.0))


def skew_cf(t, model: SkewStableModel):
    """CF of the skew law at rows of t (Eq.-16-type exponent)."""
    t = np.atleast_2d(np.asarray(t, dtype=float))
    proj = t @ model.measure.points.T          # (m, K)
    expo = psi_alpha(proj, model.alpha) @ model.measure.weights
    return np.exp(-expo + 1j * t @ model.delta)


def sample_spherical(alpha, p, n, rng) -> np.ndarray:
    """Spherical stable sample S_alpha(0, I_p)."""
    model = EllipticalStableModel(alpha, np.zeros(p), np.eye(p))
    return sample_elliptical(model, n, rng)


def sample_elliptical(model: EllipticalStableModel, n, rng) -> np.ndarray:
    """Sub-Gaussian representation: X = delta + sqrt(2 A) Q^(1/2) Z."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    p = model.dim
    z = rng.standard_normal((n, p))
    chol = getattr(model, "_chol")
    if model.alpha == 2.0:
        scaled = math.sqrt(2.0) * z
    else:
        a = sample_positive_stable(PositiveStableSpec(model.alpha / 2.0), n, rng)
        scaled = np.sqrt(2.0 * a)[:, None] * z
    return model.delta[None, :] + scaled @ chol.T


def sample_skew(model: SkewStableModel, n, rng) -> np.ndarray:
    """Discrete-spectral-measure representation with totally skewed factors."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    alpha = model.alpha
    gam = model.measure.weights
    pts = model.measure.points
    out = np.tile(model.delta, (n, 1))
    std_skewed = UnivStableParams(alpha, 1.0, 1.0, 0.0)
    for k in range(gam.shape[0]):
        if gam[k] == 0.0:
            continue  # zero-mass points contribute nothing (alpha=1 log blows up)
        a_k = sample_univ_stable(std_skewed, n, rng)
        if alpha == 1.0:
            coef = gam[k] * (a_k + (2.0 / math.pi) * math.log(gam[k]))
        else:
            coef = gam[k] ** (1.0 / alpha) * a_k
        out += coef[:, None] * pts[None, k, :]
    return out


ALTERNATIVE_FAMILIES = ("mv-t", "skew-normal", "skew-cauchy", "gen-gaussian",
                        "laplace", "exponential")


def sample_alternative(kind: str, p: int, n: int, rng, nu: float = None) -> np.ndarray:
    """Comparison alternatives used in the power studies.

    mv-t(nu): multivariate Student t.  skew-normal(nu) / skew-cauchy(nu):
    Azzalini-type with common slant nu on every coordinate.  gen-gaussian(nu):
    X = U V^(1/nu) with U uniform on the sphere, V ~ Gamma(p/nu, scale 2).
    laplace: sqrt(E) Z with E ~ Exp(1).  exponential: i.i.d. unit exponentials.
    """
    if n < 1 or p < 1:
        raise ParameterError("n and p must be >= 1")
    if kind == "mv-t":
        if nu is None or nu <= 0:
            raise ParameterError("mv-t requires degrees of freedom nu > 0")
        z = rng.standard_normal((n, p))
        w = rng.chisquare(nu, size=n) / nu
        return z / np.sqrt(w)[:, None]
    if kind in ("skew-normal", "skew-cauchy"):
        if nu is None:
            raise ParameterError(f"{kind} requires a slant parameter nu")
        z0 = np.abs(rng.standard_normal(n))
        z = rng.standard_normal((n, p))
        sn = (nu * z0[:, None] + z) / math.sqrt(1.0 + nu * nu)
        if kind == "skew-normal":
            return sn
        w = rng.chisquare(1.0, size=n)
        return sn / np.sqrt(w)[:, None]
    if kind == "gen-gaussian":
        if nu is None or nu <= 0:
            raise ParameterError("gen-gaussian requires nu > 0")
        u = rng.standard_normal((n, p))
        u /= np.linalg.norm(u, axis=1)[:, None]
        v = rng.gamma(shape=p / nu, scale=2.0, size=n)
        return u * (v ** (1.0 / nu))[:, None]
    if kind == "laplace":
        z = rng.standard_normal((n, p))
        e = rng.exponential(1.0, size=n)
        return z * np.sqrt(e)[:, None]
    if kind == "exponential":
        return rng.exponential(1.0, size=(n, p))
    raise ParameterError(f"unknown alternative family: {kind!r}")
