"""Exact pivotal inference: confidence interval for the common location,
joint (mu, R) confidence region, and the known-location interval for R.

For a progressive sample and trial location ``mu``, the standardized
spacings of lam (x - mu)^2 give

    T_X(mu) = sum (R_i+1) ((x_i - mu)/(x_1 - mu))^2 / (N (n-1)) - 1/(n-1)
            ~ F(2n-2, 2)

at the true location, independently of T_1 = 2 lam U ~ chi2(2n). T_X is
strictly increasing in mu, so quantiles of F(2n-2, 2) invert to bounds on mu.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import special

from .errors import DomainError
from .estimators import mle_joint, mle_known_mu
from .interval import Interval
from .rayleigh import ProgressiveSample


@dataclass(frozen=True)
class PivotStats:
    t_x: float
    t_y: float
    t1: float
    t2: float


@dataclass(frozen=True)
class JointRegion:
    mu_interval: Interval
    slices: tuple  # of (mu, r_lo, r_hi)

    @property
    def empty(self) -> bool:
        return self.mu_interval.empty

    def write_csv(self, path) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["mu", "r_lo", "r_hi"])
            for mu, lo, hi in self.slices:
                w.writerow([repr(mu), repr(lo), repr(hi)])
        return path


def f_quantile(p: float, dfn: float, dfd: float) -> float:
    """p-quantile of the F(dfn, dfd) distribution via the incomplete-beta inverse."""
    if not 0 < p < 1:
        raise DomainError("F quantile needs 0 < p < 1")
    a, b = 0.5 * dfn, 0.5 * dfd
    # X = (b/a) * B / (1 - B) with B ~ Beta(a, b); 1 - B is inverted on its own
    # so that upper quantiles keep full precision
    beta = special.betaincinv(a, b, p)
    beta_c = special.betaincinv(b, a, 1.0 - p)
    return float((b * beta) / (a * beta_c))


def _spacing_moments(sample: ProgressiveSample):
    delta = sample.values - sample.values[0]
    w = sample.weights
    return float(np.dot(w, delta)), float(np.dot(w, delta * delta))


def pivot_tx(sample: ProgressiveSample, mu: float) -> float:
    """The location pivot T(mu) for one sample; requires mu < x_1."""
    x1 = sample.first
    if not mu < x1:
        raise DomainError(f"pivot needs mu < x_1 = {x1!r}")
    n, big_n = sample.n, sample.scheme.total
    a, b = _spacing_moments(sample)
    # expanded in d = x_1 - mu: (2A/d + B/d^2) / (N (n-1)), exact and
    # free of the cancellation in the ratio form as mu -> -inf
    d = x1 - mu
    return (2.0 * a / d + b / (d * d)) / (big_n * (n - 1))


def invert_pivot(sample: ProgressiveSample, target: float) -> float:
    """The unique mu < x_1 with ``pivot_tx(sample, mu) == target``.

    T is quadratic in 1/(x_1 - mu), so the inverse is closed form.
    """
    if not (target > 0 and math.isfinite(target)):
        raise DomainError("pivot target must be positive and finite")
    a, b = _spacing_moments(sample)
    if b <= 0:
        raise DomainError("all observations coincide; the pivot is constant")
    k = target * sample.scheme.total * (sample.n - 1)
    d = (a + math.sqrt(a * a + b * k)) / k
    return sample.first - d


def pivot_stats(xs: ProgressiveSample, ys: ProgressiveSample, mu, lam, alpha) -> PivotStats:
    """Pivots built from the normalized spacings Z*_i and D*_j directly.

    Z*_1 = N X**_1 and Z*_i = (N - sum_{k<i}(R_k+1)) (X**_i - X**_{i-1}) with
    X**_i = lam (x_i - mu)^2; likewise D*_j for the y sample.
    """
    if not mu < min(xs.first, ys.first):
        raise DomainError("mu must lie below both samples")

    def parts(sample, scale):
        e = scale * (sample.values - mu) ** 2
        at_risk = sample.scheme.total - np.concatenate(([0.0], np.cumsum(sample.weights)[:-1]))
        z = at_risk * np.diff(e, prepend=0.0)
        v = 2.0 * z[0]
        u = 2.0 * z[1:].sum()
        return u / ((sample.n - 1) * v), u + v

    t_x, t1 = parts(xs, lam)
    t_y, t2 = parts(ys, alpha)
    return PivotStats(float(t_x), float(t_y), float(t1), float(t2))


def _mu_bounds(xs, ys, coverage_each: float):
    lo_p = 0.5 * (1.0 - coverage_each)
    hi_p = 0.5 * (1.0 + coverage_each)
    lows, highs = [], []
    for s in (xs, ys):
        df = 2 * s.n - 2
        lows.append(invert_pivot(s, f_quantile(lo_p, df, 2)))
        highs.append(invert_pivot(s, f_quantile(hi_p, df, 2)))
    return max(lows), min(highs)


def _check_eta(eta):
    if not 0 < eta < 1:
        raise DomainError(f"eta must lie in (0, 1), got {eta!r}")


def exact_ci_mu(xs: ProgressiveSample, ys: ProgressiveSample, eta: float) -> Interval:
    """100(1-eta)% interval for mu from the intersection of the two pivot intervals.

    Each sample's interval has coverage sqrt(1-eta); the intersection can be
    empty, which is reported rather than clamped.
    """
    _check_eta(eta)
    lo, hi = _mu_bounds(xs, ys, math.sqrt(1.0 - eta))
    if lo > hi:
        return Interval.make_empty(1.0 - eta)
    return Interval(lo, hi, 1.0 - eta)


def _r_bounds(r_hat, n, m, p_lo, p_hi):
    odds = (1.0 - r_hat) / r_hat
    return (1.0 / (1.0 + odds * f_quantile(p_hi, 2 * n, 2 * m)),
            1.0 / (1.0 + odds * f_quantile(p_lo, 2 * n, 2 * m)))


def r_slice(xs: ProgressiveSample, ys: ProgressiveSample, mu: float, eta: float):
    """R-bounds of the joint region at location ``mu`` (coverage sqrt(1-eta))."""
    _check_eta(eta)
    _, _, r_hat = mle_known_mu(xs, ys, mu)
    c = math.sqrt(1.0 - eta)
    return _r_bounds(r_hat, xs.n, ys.n, 0.5 * (1.0 - c), 0.5 * (1.0 + c))


def exact_joint_region(xs: ProgressiveSample, ys: ProgressiveSample, eta: float,
                       grid_size: int = 101) -> JointRegion:
    """Joint 100(1-eta)% confidence region for (mu, R).

    The mu-interval uses per-sample coverage (1-eta)^(1/4); the R-slice at
    each of ``grid_size`` equally spaced locations uses the F(2n, 2m) pivot at
    coverage sqrt(1-eta), with R-hat evaluated at that location.
    """
    _check_eta(eta)
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")
    lo, hi = _mu_bounds(xs, ys, (1.0 - eta) ** 0.25)
    if lo > hi:
        return JointRegion(Interval.make_empty(1.0 - eta), ())
    grid = np.linspace(lo, hi, grid_size)
    grid[-1] = hi
    slices = tuple((float(mu), *r_slice(xs, ys, float(mu), eta)) for mu in grid)
    return JointRegion(Interval(lo, hi, 1.0 - eta), slices)


def joint_region_contains(xs, ys, eta, mu, r) -> bool:
    """Membership of (mu, r) in the joint region, evaluating the slice at ``mu`` exactly."""
    _check_eta(eta)
    lo, hi = _mu_bounds(xs, ys, (1.0 - eta) ** 0.25)
    if not lo <= mu <= hi:
        return False
    r_lo, r_hi = r_slice(xs, ys, mu, eta)
    return r_lo <= r <= r_hi


def joint_region_rectangle(xs, ys, eta):
    """Convenience rectangle: the mu-interval crossed with the R-slice at the joint MLE."""
    region_mu = _mu_bounds(xs, ys, (1.0 - eta) ** 0.25)
    if region_mu[0] > region_mu[1]:
        return Interval.make_empty(1.0 - eta), Interval.make_empty(1.0 - eta)
    fit = mle_joint(xs, ys)
    r_lo, r_hi = r_slice(xs, ys, fit.mu_hat, eta)
    return Interval(*region_mu, 1.0 - eta), Interval(r_lo, r_hi, 1.0 - eta)


def exact_ci_r_known_mu(xs: ProgressiveSample, ys: ProgressiveSample, mu: float,
                        eta: float) -> Interval:
    """Exact 100(1-eta)% interval for R when the location is known.

    Uses (R/(1-R)) ((1-R_hat)/R_hat) ~ F(2m, 2n).
    """
    _check_eta(eta)
    _, _, r_hat = mle_known_mu(xs, ys, mu)
    lo, hi = _r_bounds(r_hat, xs.n, ys.n, 0.5 * eta, 1.0 - 0.5 * eta)
    return Interval(min(lo, hi), max(lo, hi), 1.0 - eta)
