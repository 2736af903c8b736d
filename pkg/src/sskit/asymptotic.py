"""Observed Fisher information and the delta-method interval for R.

Parameters are ordered (lambda, alpha, mu). The information matrix has a
structural zero in the (lambda, alpha) entry; the variance of R-hat is the
quadratic form g' I^{-1} g with g = (-alpha, lambda, 0) / (lambda + alpha)^2,
written out through the cofactors b_ij of I.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import DomainError, SingularityError
from .estimators import JointFit
from .interval import Interval
from .rayleigh import ProgressiveSample


@dataclass(frozen=True)
class ObservedInfo:
    i11: float
    i22: float
    i33: float
    i13: float
    i23: float
    evaluated_at: tuple

    i12 = 0.0

    def matrix(self) -> np.ndarray:
        return np.array([
            [self.i11, 0.0, self.i13],
            [0.0, self.i22, self.i23],
            [self.i13, self.i23, self.i33],
        ])


@dataclass(frozen=True)
class DeltaVariance:
    b11: float
    b12: float
    b13: float
    b22: float
    b23: float
    b33: float
    det_i: float
    var_r: float


def observed_info(xs: ProgressiveSample, ys: ProgressiveSample, at) -> ObservedInfo:
    """Negative Hessian of the log-likelihood at ``at = (lambda, alpha, mu)``."""
    lam, alpha, mu = at
    if not (lam > 0 and alpha > 0):
        raise DomainError("scales must be positive")
    if not mu < min(xs.first, ys.first):
        raise DomainError("mu must lie below both samples")
    dx = xs.values - mu
    dy = ys.values - mu
    wx, wy = xs.weights, ys.weights
    return ObservedInfo(
        i11=xs.n / lam**2,
        i22=ys.n / alpha**2,
        i33=2.0 * (lam * wx.sum() + alpha * wy.sum())
        + float(np.sum(1.0 / dx**2)) + float(np.sum(1.0 / dy**2)),
        i13=-2.0 * float(np.dot(wx, dx)),
        i23=-2.0 * float(np.dot(wy, dy)),
        evaluated_at=(float(lam), float(alpha), float(mu)),
    )


def _cofactor_variance(i11, i22, i33, i13, i23, lam, alpha):
    b11 = i22 * i33 - i23**2
    b12 = i13 * i23
    b22 = i11 * i33 - i13**2
    det = i11 * i22 * i33 - i11 * i23**2 - i13**2 * i22
    var = (lam**2 * b22 + alpha**2 * b11 - 2.0 * lam * alpha * b12) / (det * (lam + alpha) ** 4)
    return b11, b12, b22, det, var


def var_r_delta(info: ObservedInfo, lam: float, alpha: float) -> DeltaVariance:
    """Delta-method variance of R-hat on the Var scale (the limiting B divided by n)."""
    i11, i22, i33, i13, i23 = info.i11, info.i22, info.i33, info.i13, info.i23
    b11, b12, b22, det, var = _cofactor_variance(i11, i22, i33, i13, i23, lam, alpha)
    # positive definite iff the leading minors i11, i11*i22 and det are positive
    if not (i11 > 0 and i22 > 0 and det > 0 and math.isfinite(det)):
        raise SingularityError(f"observed information is not positive definite (det={det:.3g})")
    if not var > 0:
        raise SingularityError("delta-method variance is not positive")
    return DeltaVariance(b11, b12, -i13 * i22, b22, -i11 * i23, i11 * i22, det, var)


def var_r_batch(x, wx, y, wy, lam, alpha, mu) -> np.ndarray:
    """Vectorized :func:`var_r_delta` over rows of (B, n) / (B, m) samples.

    Rows whose information is not positive definite get NaN.
    """
    dx = x - mu[:, None]
    dy = y - mu[:, None]
    i11 = x.shape[1] / lam**2
    i22 = y.shape[1] / alpha**2
    i33 = (2.0 * (lam * wx.sum() + alpha * wy.sum())
           + (1.0 / dx**2).sum(axis=1) + (1.0 / dy**2).sum(axis=1))
    i13 = -2.0 * (wx * dx).sum(axis=1)
    i23 = -2.0 * (wy * dy).sum(axis=1)
    _, _, _, det, var = _cofactor_variance(i11, i22, i33, i13, i23, lam, alpha)
    ok = (det > 0) & (var > 0) & np.isfinite(var)
    return np.where(ok, var, np.nan)


def var_r_at(xs: ProgressiveSample, ys: ProgressiveSample, fit: JointFit) -> float:
    info = observed_info(xs, ys, (fit.lambda_hat, fit.alpha_hat, fit.mu_hat))
    return var_r_delta(info, fit.lambda_hat, fit.alpha_hat).var_r


def asymptotic_ci(xs: ProgressiveSample, ys: ProgressiveSample, eta: float,
                  fit: JointFit) -> Interval:
    """Wald interval R-hat +/- z_{1-eta/2} sqrt(var_r), clamped to [0, 1]."""
    if not 0 < eta < 1:
        raise DomainError("eta must lie in (0, 1)")
    half = stats.norm.ppf(1.0 - 0.5 * eta) * math.sqrt(var_r_at(xs, ys, fit))
    return Interval(fit.r_hat - half, fit.r_hat + half, 1.0 - eta).clamp(0.0, 1.0)
