"""Point estimators of R = P(Y < X): maximum likelihood and UMVUE.

The log-likelihood (constants dropped) for two progressive samples with a
common location ``mu`` is

    l = n ln(lam) + m ln(alpha) + sum ln(x_i - mu) + sum ln(y_j - mu)
        - lam U(mu) - alpha V(mu),

with U(mu) = sum (R_i + 1)(x_i - mu)^2 and V(mu) = sum (S_j + 1)(y_j - mu)^2.
For fixed ``mu`` the scales have closed forms n/U and m/V, and the location
solves the fixed-point equation mu = k(mu), where k(mu) - mu is the
profile score in ``mu``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .rayleigh import ProgressiveSample

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000
_MAX_HALVINGS = 80


@dataclass(frozen=True)
class SufficientStats:
    u: float
    v: float

    def __post_init__(self):
        if not (self.u > 0 and self.v > 0):
            raise DomainError("sufficient statistics must be positive")


@dataclass(frozen=True)
class JointFit:
    mu_hat: float
    lambda_hat: float
    alpha_hat: float
    r_hat: float
    iterations: int
    final_step: float
    damped_steps: int = 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("damped_steps")
        return d


def _check_mu(mu, *samples):
    lowest = min(s.first for s in samples)
    if not mu < lowest:
        raise DomainError(f"mu={mu!r} must lie below the smallest observation {lowest!r}")


def _weighted_ss(sample: ProgressiveSample, mu: float) -> float:
    d = sample.values - mu
    return float(np.dot(sample.weights, d * d))


def sufficient_stats(xs: ProgressiveSample, ys: ProgressiveSample, mu: float) -> SufficientStats:
    """U = sum (R_i+1)(x_i-mu)^2 and V = sum (S_j+1)(y_j-mu)^2 at a known location."""
    _check_mu(mu, xs, ys)
    return SufficientStats(_weighted_ss(xs, mu), _weighted_ss(ys, mu))


def mle_known_mu(xs: ProgressiveSample, ys: ProgressiveSample, mu: float):
    """Closed-form scale MLEs and R-hat when the location is known.

    Returns ``(lambda_hat, alpha_hat, r_hat)``.
    """
    st = sufficient_stats(xs, ys, mu)
    lam = xs.n / st.u
    alpha = ys.n / st.v
    return lam, alpha, alpha / (alpha + lam)


def loglik(xs: ProgressiveSample, ys: ProgressiveSample, lam, alpha, mu) -> float:
    """Joint log-likelihood without the scheme constants c1, c2."""
    _check_mu(mu, xs, ys)
    dx = xs.values - mu
    dy = ys.values - mu
    return float(
        xs.n * math.log(lam) + ys.n * math.log(alpha)
        + np.log(dx).sum() + np.log(dy).sum()
        - lam * np.dot(xs.weights, dx * dx) - alpha * np.dot(ys.weights, dy * dy)
    )


def score(xs: ProgressiveSample, ys: ProgressiveSample, lam, alpha, mu) -> np.ndarray:
    """Gradient (d/dlam, d/dalpha, d/dmu) of :func:`loglik`."""
    _check_mu(mu, xs, ys)
    dx = xs.values - mu
    dy = ys.values - mu
    wx, wy = xs.weights, ys.weights
    return np.array([
        xs.n / lam - np.dot(wx, dx * dx),
        ys.n / alpha - np.dot(wy, dy * dy),
        2.0 * (lam * np.dot(wx, dx) + alpha * np.dot(wy, dy))
        - (1.0 / dx).sum() - (1.0 / dy).sum(),
    ])


def k_map(xs: ProgressiveSample, ys: ProgressiveSample, mu: float) -> float:
    """The fixed-point map whose fixed point is the location MLE."""
    _check_mu(mu, xs, ys)
    g, _, _ = _profile(
        [(xs.values[None, :], xs.weights), (ys.values[None, :], ys.weights)], np.array([mu])
    )
    return float(mu + g[0])


def _profile(groups, mu):
    """Profile log-likelihood, its first and second derivative in ``mu``.

    ``groups`` is a list of ``(values (B, n), weights (n,))``; ``mu`` has
    shape (B,). Each group contributes n ln(n/U) + sum ln(x - mu).
    """
    ell = np.zeros_like(mu)
    g = np.zeros_like(mu)
    h = np.zeros_like(mu)
    for values, w in groups:
        n = values.shape[1]
        d = values - mu[:, None]
        wd = w * d
        u = (wd * d).sum(axis=1)
        s1 = wd.sum(axis=1)
        inv = 1.0 / d
        ell += n * np.log(n / u) + np.log(d).sum(axis=1)
        g += 2.0 * n * s1 / u - inv.sum(axis=1)
        h += -n * (2.0 * w.sum() * u - 4.0 * s1 * s1) / (u * u) - (inv * inv).sum(axis=1)
    return g, h, ell


def _fit_location(groups, mu0, tol, max_iter, trace=None):
    """Damped fixed-point iteration mu <- mu + w (k(mu) - mu) on a batch.

    The relaxation ``w = 1 / max(1, |l''(mu)|)`` turns the raw map (which
    overshoots whenever the profile curvature exceeds 2) into a Newton-like
    step; steps leaving the domain or lowering the profile likelihood are
    bisected toward the previous iterate. Fixed points are unchanged.

    Returns ``(mu, iterations, final_step, damped, converged)`` arrays.
    """
    upper = np.min([v[:, 0] for v, _ in groups], axis=0)
    mu = np.array(mu0, dtype=float)
    b = mu.size
    iters = np.zeros(b, dtype=int)
    final = np.full(b, np.inf)
    damped = np.zeros(b, dtype=int)
    done = np.zeros(b, dtype=bool)
    active = ~done
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        sub = [(v[idx], w) for v, w in groups]
        m = mu[idx]
        g, h, ell = _profile(sub, m)
        step = g / np.maximum(1.0, np.abs(h))
        new = m + step
        bad = ~(new < upper[idx])
        if bad.any():
            damped[idx[bad]] += 1
        # backtrack: stay inside the support and do not decrease the profile
        for _ in range(_MAX_HALVINGS):
            ok = new < upper[idx]
            if ok.any():
                sel = np.flatnonzero(ok)
                _, _, ell_new = _profile([(v[sel], w) for v, w in sub], new[sel])
                worse = ell_new < ell[sel] - 1e-12 * np.abs(ell[sel])
                ok[sel[worse]] = False
            if ok.all():
                break
            step = np.where(ok, step, 0.5 * step)
            new = m + step
        iters[idx] += 1
        final[idx] = np.abs(new - m)
        mu[idx] = new
        if trace is not None:
            trace.append(float(new[0]))
        small = np.abs(new - m) < tol
        # a small step only counts at a local maximum (h < 0); otherwise the
        # iterate is creeping toward the support boundary
        conv = small & (h < 0)
        stuck = small & ~(h < 0) & (np.abs(step) == 0)
        done[idx[conv]] = True
        active[idx[conv | stuck]] = False
    return mu, iters, final, damped, done


def _default_mu0(groups):
    lo = np.min([v[:, 0] for v, _ in groups], axis=0)
    hi = np.max([v[:, -1] for v, _ in groups], axis=0)
    spread = np.maximum(hi - lo, 1e-3 * np.maximum(np.abs(lo), 1.0))
    return lo - 0.1 * spread


def fit_joint_batch(x, wx, y, wy, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Joint MLE for a batch of sample pairs sharing one censoring scheme each.

    ``x`` is (B, n), ``y`` is (B, m); rows must be sorted. Returns a dict of
    arrays ``mu, lam, alpha, r, converged``; rows that failed carry NaN.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    wx = np.asarray(wx, dtype=float)
    wy = np.asarray(wy, dtype=float)
    groups = [(x, wx), (y, wy)]
    mu, _, _, _, ok = _fit_location(groups, _default_mu0(groups), tol, max_iter)
    dx = x - mu[:, None]
    dy = y - mu[:, None]
    lam = x.shape[1] / ((wx * dx * dx).sum(axis=1))
    alpha = y.shape[1] / ((wy * dy * dy).sum(axis=1))
    r = alpha / (alpha + lam)
    nan = np.where(ok, 1.0, np.nan)
    return {"mu": mu * nan, "lam": lam * nan, "alpha": alpha * nan, "r": r * nan, "converged": ok}


def mle_joint(xs: ProgressiveSample, ys: ProgressiveSample, mu0=None,
              tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER) -> JointFit:
    """Three-parameter MLE (mu, lambda, alpha) and R-hat for two progressive samples.

    Parameters
    ----------
    mu0 : float, optional
        Starting location, below both sample minima. Defaults to
        ``min(x1, y1) - 0.1 * range`` of the pooled data.
    tol : float
        Stop once ``|mu_j - mu_{j+1}| < tol``.

    Raises
    ------
    ConvergenceError
        If ``max_iter`` iterations pass without meeting ``tol``; the
        iterate history is attached.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    groups = [(xs.values[None, :], xs.weights), (ys.values[None, :], ys.weights)]
    if mu0 is None:
        start = _default_mu0(groups)
    else:
        _check_mu(mu0, xs, ys)
        start = np.array([float(mu0)])
    trace = []
    mu, iters, final, damped, ok = _fit_location(groups, start, tol, max_iter, trace)
    if not ok[0]:
        raise ConvergenceError(
            f"location iteration did not converge in {int(iters[0])} steps "
            f"(last step {final[0]:.3g})", trace)
    mu_hat = float(mu[0])
    lam, alpha, r = mle_known_mu(xs, ys, mu_hat)
    return JointFit(mu_hat, lam, alpha, r, int(iters[0]), float(final[0]), int(damped[0]))


def mle_single(sample: ProgressiveSample, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """One-sample MLE ``(mu_hat, lambda_hat)`` by the same damped iteration."""
    if sample.n < 2:
        raise DomainError("need at least two observations")
    groups = [(sample.values[None, :], sample.weights)]
    mu, iters, final, _, ok = _fit_location(groups, _default_mu0(groups), tol, max_iter)
    if not ok[0]:
        raise ConvergenceError("one-sample location iteration did not converge")
    mu_hat = float(mu[0])
    return mu_hat, sample.n / _weighted_ss(sample, mu_hat)


def single_score(sample: ProgressiveSample, lam, mu) -> np.ndarray:
    """Gradient (d/dlam, d/dmu) of the one-sample log-likelihood."""
    d = sample.values - mu
    w = sample.weights
    return np.array([
        sample.n / lam - np.dot(w, d * d),
        2.0 * lam * np.dot(w, d) - (1.0 / d).sum(),
    ])


def moments_single(values):
    """Method-of-moments fit ``(mu_hat, lambda_hat)`` for a complete sample.

    Matches mean mu + sqrt(pi / lam)/2 and variance (4 - pi)/(4 lam), using
    the unbiased sample variance.
    """
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        raise DomainError("need at least two observations")
    var = values.var(ddof=1)
    if not var > 0:
        raise DomainError("sample variance is zero")
    lam = (4.0 - math.pi) / (4.0 * var)
    return float(values.mean() - 0.5 * math.sqrt(math.pi / lam)), float(lam)


def _alternating_series(q: float, top: int, bottom: int) -> float:
    # sum_{k=0}^{top-1} (-q)^k C(top-1, k) / C(bottom+k-1, k); the coefficient
    # ratio prod_{j<k} (top-1-j)/(bottom+j) is accumulated in log space
    if q == 0.0:
        return 1.0
    terms = [1.0]
    log_coef = 0.0
    log_q = math.log(q)
    for k in range(1, top):
        log_coef += math.log(top - k) - math.log(bottom + k - 1)
        terms.append((-1) ** k * math.exp(log_coef + k * log_q))
    return math.fsum(terms)


def umvue_r(stats: SufficientStats, n: int, m: int) -> float:
    """UMVUE of R from the sufficient statistics at a known location.

    For u <= v this is 1 - sum_k (-1)^k (u/v)^k C(m-1,k)/C(n+k-1,k); for
    u > v the mirrored series in v/u. Ties use the u < v branch.
    """
    if n < 2 or m < 2:
        raise DomainError("UMVUE needs n >= 2 and m >= 2")
    u, v = stats.u, stats.v
    if u <= v:
        r = 1.0 - _alternating_series(u / v, m, n)
    else:
        r = _alternating_series(v / u, n, m)
    return min(1.0, max(0.0, r))
