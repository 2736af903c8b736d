"""Bayesian inference for R.

Unknown location: Gibbs sampling with gamma priors on lambda and alpha and a
flat prior for mu on (0, t1). The mu-conditional

    h(mu) = sum ln(x_i - mu) + sum ln(y_j - mu)
            - lam sum (R_i+1)(x_i - mu)^2 - alpha sum (S_j+1)(y_j - mu)^2

is log-concave, so it is sampled exactly by adaptive rejection sampling
(tangent upper hull, refined at every rejected point).

Known location: lambda and alpha have independent gamma posteriors, so the
posterior of R has a closed-form density; credible bounds come from its
quadrature CDF.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numba import njit
from scipy import integrate, optimize, special

from .errors import DomainError, NumericalError
from .estimators import SufficientStats, mle_joint
from .interval import Interval
from .rayleigh import ProgressiveSample, RngStream

ARS_MAX_POINTS = 64


@dataclass(frozen=True)
class PriorSpec:
    """Gamma(a1, b1) for lambda, Gamma(a2, b2) for alpha, uniform(0, t1) for mu.

    Zeros give the improper non-informative prior; ``t1=None`` means no
    upper bound beyond the data (min(x1, y1)).
    """

    a1: float = 0.0
    b1: float = 0.0
    a2: float = 0.0
    b2: float = 0.0
    t1: float | None = None

    def __post_init__(self):
        for name in ("a1", "b1", "a2", "b2"):
            v = getattr(self, name)
            if not (v >= 0 and math.isfinite(v)):
                raise DomainError(f"prior hyper-parameter {name} must be finite and >= 0, got {v!r}")
        if self.t1 is not None and not self.t1 > 0:
            raise DomainError(f"t1 must be positive, got {self.t1!r}")

    def mu_upper(self, xs: ProgressiveSample, ys: ProgressiveSample) -> float:
        c = min(xs.first, ys.first)
        if self.t1 is not None:
            c = min(c, self.t1)
        if not c > 0:
            raise DomainError("the mu-conditional has empty support: min observation <= 0")
        return c

    def to_dict(self) -> dict:
        return {"a1": self.a1, "b1": self.b1, "a2": self.a2, "b2": self.b2, "t1": self.t1}


PRIORS = {
    1: PriorSpec(0.0, 0.0, 0.0, 0.0),
    2: PriorSpec(1.0, 1.0, 1.0, 1.0),
    3: PriorSpec(2.0, 3.0, 2.0, 3.0),
}


@dataclass(frozen=True)
class PosteriorDraws:
    """Full chain of shape (t_total, 4) with columns lambda, alpha, mu, r."""

    chain: np.ndarray
    burn_in: int

    @property
    def retained(self) -> np.ndarray:
        return self.chain[self.burn_in:]

    @property
    def r(self) -> np.ndarray:
        return self.chain[self.burn_in:, 3]

    @property
    def draws(self) -> list:
        return [tuple(row) for row in self.retained]

    def write_csv(self, path) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "lambda", "alpha", "mu", "r"])
            for t, row in enumerate(self.chain, start=1):
                w.writerow([t, *(repr(float(v)) for v in row)])
        return path


# ---------------------------------------------------------------------------
# adaptive rejection sampler for the mu-conditional


@njit(cache=True)
def _log_cond(mu, x, wx, y, wy, lam, alpha):
    h = 0.0
    dh = 0.0
    for i in range(x.size):
        d = x[i] - mu
        h += math.log(d) - lam * wx[i] * d * d
        dh += -1.0 / d + 2.0 * lam * wx[i] * d
    for j in range(y.size):
        d = y[j] - mu
        h += math.log(d) - alpha * wy[j] * d * d
        dh += -1.0 / d + 2.0 * alpha * wy[j] * d
    return h, dh


@njit(cache=True)
def _d2_log_cond(mu, x, wx, y, wy, lam, alpha):
    s = 0.0
    for i in range(x.size):
        d = x[i] - mu
        s += 1.0 / (d * d) + 2.0 * lam * wx[i]
    for j in range(y.size):
        d = y[j] - mu
        s += 1.0 / (d * d) + 2.0 * alpha * wy[j]
    return -s


@njit(cache=True)
def _mode(x, wx, y, wy, lam, alpha, lo, hi):
    # h' is strictly decreasing; safeguarded Newton on h' within [lo, hi)
    _, d_lo = _log_cond(lo, x, wx, y, wy, lam, alpha)
    if d_lo <= 0.0:
        return lo
    a = lo
    b = hi
    m = 0.5 * (lo + hi)
    for _ in range(200):
        _, dh = _log_cond(m, x, wx, y, wy, lam, alpha)
        if dh > 0.0:
            a = m
        else:
            b = m
        step = dh / _d2_log_cond(m, x, wx, y, wy, lam, alpha)
        nxt = m - step
        if not (a < nxt < b):
            nxt = 0.5 * (a + b)
        if abs(nxt - m) <= 1e-14 * (1.0 + abs(m)) or b - a <= 1e-15 * (1.0 + abs(m)):
            return nxt
        m = nxt
    return m


@njit(cache=True)
def _log_piece_mass(u0, s, width):
    # log of integral_0^width exp(u0 + s t) dt
    z = s * width
    if abs(z) < 1e-12:
        return u0 + math.log(width) + 0.5 * z
    if z > 0.0:
        return u0 + z + math.log(-math.expm1(-z) / s)
    return u0 + math.log(math.expm1(z) / s)


@njit(cache=True)
def _ars_draw(gen, x, wx, y, wy, lam, alpha, lo, hi):
    zs = np.empty(ARS_MAX_POINTS)
    hs = np.empty(ARS_MAX_POINTS)
    ds = np.empty(ARS_MAX_POINTS)
    mode = _mode(x, wx, y, wy, lam, alpha, lo, hi)
    curv = -_d2_log_cond(mode, x, wx, y, wy, lam, alpha)
    sd = 1.0 / math.sqrt(curv)
    k = 0
    # initial abscissae straddling the mode, kept strictly inside (lo, hi)
    cand = np.array([mode - sd, mode, mode + sd])
    for c in cand:
        if c > lo and c < hi:
            zs[k] = c
            k += 1
    if k == 0 or zs[0] > mode:
        # mode at or next to the boundary: one point just inside
        zs[0] = lo + 0.5 * min(sd, hi - lo)
        k = 1
    if k < 2:
        zs[k] = 0.5 * (zs[k - 1] + hi)
        k += 1
    for i in range(k):
        hs[i], ds[i] = _log_cond(zs[i], x, wx, y, wy, lam, alpha)
    href = hs[0]
    for i in range(k):
        href = max(href, hs[i])

    bounds = np.empty(ARS_MAX_POINTS + 1)
    logm = np.empty(ARS_MAX_POINTS)
    for _ in range(100000):
        # breakpoints of the tangent hull
        bounds[0] = lo
        for i in range(k - 1):
            den = ds[i] - ds[i + 1]
            if den > 1e-300:
                t = (hs[i + 1] - hs[i] - zs[i + 1] * ds[i + 1] + zs[i] * ds[i]) / den
                t = min(max(t, zs[i]), zs[i + 1])
            else:
                t = 0.5 * (zs[i] + zs[i + 1])
            bounds[i + 1] = t
        bounds[k] = hi
        top = -np.inf
        for i in range(k):
            width = bounds[i + 1] - bounds[i]
            if width <= 0.0:
                logm[i] = -np.inf
            else:
                u0 = hs[i] - href + ds[i] * (bounds[i] - zs[i])
                logm[i] = _log_piece_mass(u0, ds[i], width)
            top = max(top, logm[i])
        total = 0.0
        for i in range(k):
            total += math.exp(logm[i] - top)
        # choose a piece, then invert its exponential CDF
        target = gen.random() * total
        j = 0
        acc = math.exp(logm[0] - top)
        while acc < target and j < k - 1:
            j += 1
            acc += math.exp(logm[j] - top)
        a = bounds[j]
        b = bounds[j + 1]
        s = ds[j]
        u = gen.random()
        z = s * (b - a)
        if abs(z) < 1e-12:
            mu = a + u * (b - a)
        elif z > 0.0:
            mu = b + math.log(u + (1.0 - u) * math.exp(-z)) / s
        else:
            mu = a + math.log1p(u * math.expm1(z)) / s
        mu = min(max(mu, a), b)
        if not (mu > lo and mu < hi):
            continue
        h_mu, d_mu = _log_cond(mu, x, wx, y, wy, lam, alpha)
        upper = hs[j] + ds[j] * (mu - zs[j])
        if math.log(gen.random()) <= h_mu - upper:
            return mu
        if k < ARS_MAX_POINTS:
            # insert the rejected point, keeping abscissae sorted
            pos = k
            while pos > 0 and zs[pos - 1] > mu:
                zs[pos] = zs[pos - 1]
                hs[pos] = hs[pos - 1]
                ds[pos] = ds[pos - 1]
                pos -= 1
            zs[pos] = mu
            hs[pos] = h_mu
            ds[pos] = d_mu
            k += 1
    return np.nan


@njit(cache=True)
def _gibbs_kernel(gen, x, wx, y, wy, a1, b1, a2, b2, upper, lam0, alpha0, mu0,
                  t_total, fresh_mu, fixed_mu):
    out = np.empty((t_total, 4))
    lam = lam0
    alpha = alpha0
    mu_prev = mu0
    n = x.size
    m = y.size
    for t in range(t_total):
        if fixed_mu:
            mu = mu0
        else:
            mu = _ars_draw(gen, x, wx, y, wy, lam, alpha, 0.0, upper)
        mu_g = mu if fresh_mu else mu_prev
        ux = 0.0
        for i in range(n):
            d = x[i] - mu_g
            ux += wx[i] * d * d
        uy = 0.0
        for j in range(m):
            d = y[j] - mu_g
            uy += wy[j] * d * d
        lam = gen.gamma(n + a1, 1.0 / (b1 + ux))
        alpha = gen.gamma(m + a2, 1.0 / (b2 + uy))
        out[t, 0] = lam
        out[t, 1] = alpha
        out[t, 2] = mu
        out[t, 3] = alpha / (alpha + lam)
        mu_prev = mu
    return out


def _gen(rng) -> np.random.Generator:
    return rng.generator() if isinstance(rng, RngStream) else rng


def log_conditional_mu(xs, ys, lam, alpha, mu) -> float:
    """Unnormalized log mu-conditional (the gamma-prior factors are constant in mu)."""
    return _log_cond(float(mu), xs.values, xs.weights, ys.values, ys.weights,
                     float(lam), float(alpha))[0]


def d2_log_conditional_mu(xs, ys, lam, alpha, mu) -> float:
    return _d2_log_cond(float(mu), xs.values, xs.weights, ys.values, ys.weights,
                        float(lam), float(alpha))


def sample_mu_conditional(xs: ProgressiveSample, ys: ProgressiveSample, lam: float,
                          alpha: float, prior: PriorSpec, rng, size: int | None = None):
    """Exact draw(s) from pi(mu | lambda, alpha, data) on (0, min(x1, y1, t1))."""
    if not (lam > 0 and alpha > 0):
        raise DomainError("lambda and alpha must be positive")
    upper = prior.mu_upper(xs, ys)
    gen = _gen(rng)
    args = (xs.values, xs.weights, ys.values, ys.weights, float(lam), float(alpha), 0.0, upper)
    if size is None:
        return float(_ars_draw(gen, *args))
    return np.array([_ars_draw(gen, *args) for _ in range(size)])


def _posterior_proper(xs, ys, prior):
    if xs.n + prior.a1 <= 0 or ys.n + prior.a2 <= 0:
        raise DomainError("posterior gamma shapes must be positive")


def default_init(xs: ProgressiveSample, ys: ProgressiveSample, prior: PriorSpec):
    """Joint MLE moved inside the prior support when necessary."""
    upper = prior.mu_upper(xs, ys)
    try:
        fit = mle_joint(xs, ys)
        mu0 = fit.mu_hat
    except Exception:
        mu0 = 0.5 * upper
    if not 0 < mu0 < upper:
        mu0 = 0.5 * upper
    lam0 = xs.n / float(np.dot(xs.weights, (xs.values - mu0) ** 2))
    alpha0 = ys.n / float(np.dot(ys.weights, (ys.values - mu0) ** 2))
    return lam0, alpha0, mu0


def gibbs_chain(xs: ProgressiveSample, ys: ProgressiveSample, prior: PriorSpec,
                t_total: int = 1000, burn_in: int | None = None, init=None, rng=None,
                scan: str = "fresh") -> PosteriorDraws:
    """Systematic-scan Gibbs sampler for (lambda, alpha, mu).

    Parameters
    ----------
    burn_in : int, optional
        Leading draws excluded from summaries; defaults to 20% of ``t_total``.
    init : (lambda0, alpha0, mu0), optional
        Defaults to :func:`default_init`.
    scan : {"fresh", "lagged"}
        "fresh" draws lambda and alpha given the mu just drawn. "lagged"
        reproduces the published ordering in which they condition on the
        previous sweep's mu.
    """
    if burn_in is None:
        burn_in = int(0.2 * t_total)
    if not (int(t_total) == t_total and int(burn_in) == burn_in and t_total > burn_in >= 0):
        raise DomainError("need integers t_total > burn_in >= 0")
    if scan not in ("fresh", "lagged"):
        raise DomainError(f"scan must be 'fresh' or 'lagged', got {scan!r}")
    if rng is None:
        raise DomainError("an RngStream or Generator is required")
    _posterior_proper(xs, ys, prior)
    upper = prior.mu_upper(xs, ys)
    if init is None:
        init = default_init(xs, ys, prior)
    lam0, alpha0, mu0 = (float(v) for v in init)
    if not (lam0 > 0 and alpha0 > 0 and 0 < mu0 < upper):
        raise DomainError(f"initial values {init!r} lie outside the parameter space")
    chain = _gibbs_kernel(_gen(rng), xs.values, xs.weights, ys.values, ys.weights,
                          prior.a1, prior.b1, prior.a2, prior.b2, upper,
                          lam0, alpha0, mu0, int(t_total), scan == "fresh", False)
    if not np.all(np.isfinite(chain)):
        raise NumericalError("rejection sampler failed to produce a draw")
    return PosteriorDraws(chain, int(burn_in))


def gibbs_chain_fixed_mu(xs, ys, prior, mu, t_total, rng) -> PosteriorDraws:
    """Chain with mu held fixed; its R-marginal is exactly the known-mu posterior."""
    _posterior_proper(xs, ys, prior)
    chain = _gibbs_kernel(_gen(rng), xs.values, xs.weights, ys.values, ys.weights,
                          prior.a1, prior.b1, prior.a2, prior.b2, 0.0,
                          1.0, 1.0, float(mu), int(t_total), True, True)
    return PosteriorDraws(chain, 0)


def _r_values(draws) -> np.ndarray:
    return draws.r if isinstance(draws, PosteriorDraws) else np.asarray(draws, dtype=float)


def posterior_summary(draws) -> tuple[float, float]:
    """Mean and divide-by-T variance of the retained R draws."""
    r = _r_values(draws)
    if r.size < 2:
        raise DomainError("need at least 2 retained draws")
    mean = math.fsum(r) / r.size
    var = math.fsum((r - mean) ** 2) / r.size
    return mean, var


def credible_interval(draws, eta: float, mode: str = "equal") -> Interval:
    """Order-statistic credible interval from the retained R draws.

    ``mode="equal"`` takes the ceil(eta/2 T)-th and ceil((1-eta/2) T)-th
    order statistics; ``mode="shortest"`` takes the narrowest window holding
    ceil((1-eta) T) consecutive sorted draws.
    """
    if not 0 < eta < 1:
        raise DomainError("eta must lie in (0, 1)")
    r = np.sort(_r_values(draws))
    t = r.size
    if mode == "equal":
        i = math.ceil(0.5 * eta * t - 1e-9)
        j = math.ceil((1.0 - 0.5 * eta) * t - 1e-9)
        if i < 1 or j > t:
            raise DomainError(f"order-statistic indices {i}, {j} fall outside 1..{t}")
        return Interval(float(r[i - 1]), float(r[j - 1]), 1.0 - eta)
    if mode == "shortest":
        k = math.ceil((1.0 - eta) * t - 1e-9)
        if k < 1 or k > t:
            raise DomainError("window size falls outside the chain")
        widths = r[k - 1:] - r[: t - k + 1]
        s = int(np.argmin(widths))
        return Interval(float(r[s]), float(r[s + k - 1]), 1.0 - eta)
    raise DomainError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# known location


def _known_mu_params(stats: SufficientStats, n, m, prior: PriorSpec):
    a = n + prior.a1
    c = m + prior.a2
    b1 = prior.b1 + stats.u
    b2 = prior.b2 + stats.v
    if not (a > 0 and c > 0 and b1 > 0 and b2 > 0):
        raise DomainError("posterior of R is improper for these data and prior")
    return a, c, b1, b2


def posterior_logpdf_r_known_mu(stats: SufficientStats, n: int, m: int, prior: PriorSpec, r):
    a, c, b1, b2 = _known_mu_params(stats, n, m, prior)
    r = np.asarray(r, dtype=float)
    if np.any((r <= 0) | (r >= 1) | np.isnan(r)):
        raise DomainError("r must lie in (0, 1)")
    log_s = (special.gammaln(a + c) - special.gammaln(a) - special.gammaln(c)
             + a * math.log(b1) + c * math.log(b2))
    out = (log_s + (c - 1.0) * np.log(r) + (a - 1.0) * np.log1p(-r)
           - (a + c) * np.log(r * b2 + (1.0 - r) * b1))
    return out if out.ndim else float(out)


def posterior_pdf_r_known_mu(stats: SufficientStats, n: int, m: int, prior: PriorSpec, r):
    """Closed-form posterior density of R when mu is known (normalizer in log space)."""
    return np.exp(posterior_logpdf_r_known_mu(stats, n, m, prior, r))


def posterior_cdf_r_known_mu(stats, n, m, prior, r) -> float:
    """CDF of the known-mu posterior by adaptive quadrature of the density."""
    if not 0 < r < 1:
        if r <= 0:
            return 0.0
        return 1.0
    a, c, b1, b2 = _known_mu_params(stats, n, m, prior)
    mode = (c - 1.0) / (a + c - 2.0) if a > 1 and c > 1 else 0.5
    pts = [mode] if 0 < mode < r else None
    f = lambda t: posterior_pdf_r_known_mu(stats, n, m, prior, t)  # noqa: E731
    val, err = integrate.quad(f, 0.0, r, points=pts, epsabs=1e-13, epsrel=1e-12, limit=200)
    if not math.isfinite(val) or err > 1e-8:
        raise NumericalError(f"quadrature of the posterior CDF failed (error estimate {err:.2g})")
    return min(max(val, 0.0), 1.0)


def posterior_mean_r_known_mu(stats, n, m, prior) -> float:
    f = lambda t: t * posterior_pdf_r_known_mu(stats, n, m, prior, t)  # noqa: E731
    val, err = integrate.quad(f, 0.0, 1.0, epsabs=1e-13, epsrel=1e-12, limit=200)
    if err > 1e-8:
        raise NumericalError("quadrature of the posterior mean failed")
    return val


def lindley_estimate(stats: SufficientStats, n: int, m: int, prior: PriorSpec) -> float:
    """Lindley-type approximate Bayes estimate of R in its published form.

    Note the (n + b1 - 1) factor in the correction's denominator; compare
    with :func:`posterior_mean_r_known_mu` for the exact posterior mean.
    """
    if not (m + prior.a2 > 1 and n + prior.b1 > 1 and n + prior.a1 > 1):
        raise DomainError("the correction's denominator must be positive")
    lam_t = (n + prior.a1 - 1.0) / (prior.b1 + stats.u)
    alpha_t = (m + prior.a2 - 1.0) / (prior.b2 + stats.v)
    r_t = alpha_t / (alpha_t + lam_t)
    corr = (lam_t * r_t**2 / (alpha_t**2 * (m + prior.a2 - 1.0) * (n + prior.b1 - 1.0))
            * (lam_t * (n + prior.a1 - 1.0) - alpha_t * (m + prior.a2 - 1.0)))
    return r_t * (1.0 + corr)


def bayes_interval_known_mu(stats: SufficientStats, n: int, m: int, prior: PriorSpec,
                            eta: float) -> Interval:
    """Equal-tail posterior interval: CDF(L) = eta/2, CDF(U) = 1 - eta/2 (to 1e-8)."""
    if not 0 < eta < 1:
        raise DomainError("eta must lie in (0, 1)")
    _known_mu_params(stats, n, m, prior)

    def root(p):
        g = lambda r: posterior_cdf_r_known_mu(stats, n, m, prior, r) - p  # noqa: E731
        return optimize.brentq(g, 1e-300, 1.0 - 1e-16, xtol=1e-12, rtol=1e-12)

    return Interval(root(0.5 * eta), root(1.0 - 0.5 * eta), 1.0 - eta)


def posterior_cdf_r_closed_form(stats, n, m, prior, r) -> float:
    """Same CDF in closed form: with A = n+a1, C = m+a2, B1 = b1+u, B2 = b2+v,
    B2 R / (B2 R + B1 (1-R)) ~ Beta(C, A)."""
    a, c, b1, b2 = _known_mu_params(stats, n, m, prior)
    q = b2 * r / (b2 * r + b1 * (1.0 - r))
    return float(special.betainc(c, a, q))
