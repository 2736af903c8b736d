"""Non-parametric Boot-p and Boot-t intervals for R.

Each replicate resamples the observed values of both samples with
replacement (the censoring scheme is kept, not re-simulated), refits the
joint MLE and, for Boot-t, the delta-method variance. Replicate ``b`` draws
from ``cfg.seed.substream(b)``, so results do not depend on evaluation order.

Boot-t uses the studentized root T* = (R* - R_hat) / sqrt(V(R*)) with V on
the variance scale, which is the sqrt(n)-normalized root with the sqrt(n)
factors cancelled; the interval is R_hat + H^{-1}(q) sqrt(V(R_hat)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .asymptotic import var_r_at, var_r_batch
from .errors import BootstrapError, DomainError
from .estimators import fit_joint_batch, mle_joint
from .interval import Interval
from .rayleigh import ProgressiveSample, RngStream

MAX_FAILURE_RATE = 0.10


@dataclass(frozen=True)
class BootConfig:
    nboot: int
    eta: float
    seed: RngStream

    def __post_init__(self):
        if int(self.nboot) != self.nboot or self.nboot < 2:
            raise DomainError(f"nboot must be an integer >= 2, got {self.nboot!r}")
        if not 0 < self.eta < 1:
            raise DomainError(f"eta must lie in (0, 1), got {self.eta!r}")
        if not isinstance(self.seed, RngStream):
            raise DomainError("seed must be an RngStream")


@dataclass(frozen=True)
class BootReplicates:
    """Replicate estimates that survived fitting (failed ones are dropped)."""

    r_hat: float
    var_hat: float
    r_star: np.ndarray
    t_star: np.ndarray
    n_failed_fit: int
    n_failed_var: int


def boot_resample(sample: ProgressiveSample, rng) -> ProgressiveSample:
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    values = np.sort(gen.choice(sample.values, size=sample.n, replace=True))
    return ProgressiveSample(sample.scheme, values, allow_ties=True)


def _resample_matrix(xs, ys, seed: RngStream, nboot: int):
    x = np.empty((nboot, xs.n))
    y = np.empty((nboot, ys.n))
    for b in range(nboot):
        gen = seed.substream(b).generator()
        x[b] = gen.choice(xs.values, size=xs.n, replace=True)
        y[b] = gen.choice(ys.values, size=ys.n, replace=True)
    x.sort(axis=1)
    y.sort(axis=1)
    return x, y


def _quantile_type1(sorted_vals: np.ndarray, p: float) -> float:
    # inverse empirical CDF: the ceil(p*B)-th order statistic (1-based)
    b = sorted_vals.size
    k = math.ceil(p * b - 1e-9)
    return float(sorted_vals[min(max(k, 1), b) - 1])


def bootstrap_replicates(xs: ProgressiveSample, ys: ProgressiveSample, cfg: BootConfig,
                         studentize: bool = True, fit=None) -> BootReplicates:
    """Run the resampling loop once; both intervals can be read off the result.

    Raises BootstrapError when more than 10% of replicates fail.
    """
    if fit is None:
        fit = mle_joint(xs, ys)
    x, y = _resample_matrix(xs, ys, cfg.seed, cfg.nboot)
    res = fit_joint_batch(x, xs.weights, y, ys.weights)
    ok = res["converged"] & np.isfinite(res["r"])
    n_fit_fail = int(np.count_nonzero(~ok))
    if studentize:
        mu = np.where(ok, res["mu"], 0.0)
        lam = np.where(ok, res["lam"], 1.0)
        alpha = np.where(ok, res["alpha"], 1.0)
        with np.errstate(all="ignore"):
            var = var_r_batch(x, xs.weights, y, ys.weights, lam, alpha, mu)
        var_ok = ok & np.isfinite(var)
        n_var_fail = int(np.count_nonzero(ok & ~var_ok))
        ok = var_ok
    else:
        n_var_fail = 0
    failed = n_fit_fail + n_var_fail
    if failed > MAX_FAILURE_RATE * cfg.nboot:
        raise BootstrapError(f"{failed} of {cfg.nboot} bootstrap replicates failed")
    r_star = res["r"][ok]
    if studentize:
        var_hat = var_r_at(xs, ys, fit)
        t_star = (r_star - fit.r_hat) / np.sqrt(var[ok])
    else:
        var_hat = math.nan
        t_star = np.empty(0)
    return BootReplicates(fit.r_hat, var_hat, r_star, t_star, n_fit_fail, n_var_fail)


def boot_p_from(rep: BootReplicates, eta: float) -> Interval:
    r = np.sort(rep.r_star)
    lo = _quantile_type1(r, 0.5 * eta)
    hi = _quantile_type1(r, 1.0 - 0.5 * eta)
    return Interval(lo, hi, 1.0 - eta).clamp(0.0, 1.0)


def boot_t_from(rep: BootReplicates, eta: float) -> Interval:
    t = np.sort(rep.t_star)
    scale = math.sqrt(rep.var_hat)
    lo = rep.r_hat + _quantile_type1(t, 0.5 * eta) * scale
    hi = rep.r_hat + _quantile_type1(t, 1.0 - 0.5 * eta) * scale
    return Interval(lo, hi, 1.0 - eta).clamp(0.0, 1.0)


def boot_p_ci(xs: ProgressiveSample, ys: ProgressiveSample, cfg: BootConfig) -> Interval:
    """Percentile interval: type-1 quantiles eta/2 and 1-eta/2 of the R* set."""
    return boot_p_from(bootstrap_replicates(xs, ys, cfg, studentize=False), cfg.eta)


def boot_t_ci(xs: ProgressiveSample, ys: ProgressiveSample, cfg: BootConfig) -> Interval:
    """Studentized interval R_hat + H^{-1}(q) sqrt(V(R_hat)), q = eta/2, 1-eta/2."""
    return boot_t_from(bootstrap_replicates(xs, ys, cfg), cfg.eta)
