"""Shipped carbon-fibre strength data, goodness of fit and the real-data analysis.

Data Set 1 (gauge length 20 mm, ``gauge20``) plays the strength X and Data
Set 2 (10 mm, ``gauge10``) the stress Y. Both files are checked against
pinned SHA-256 digests when loaded.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .asymptotic import asymptotic_ci
from .bayes import PriorSpec, credible_interval, gibbs_chain, posterior_summary
from .errors import DomainError, IntegrityError
from .estimators import mle_joint, mle_single, moments_single
from .rayleigh import CensoringScheme, ProgressiveSample, RayleighParams, RngStream, cdf

SHIFT = 0.75

_DIGESTS = {
    "gauge20.csv": "c740c42aea6b008a3f1fbb66b9c5604d961ea5c40e0aeb3efb309ee107a67f1b",
    "gauge10.csv": "a090b3934f01afa074f00fb88ccc99e9d401420d10a534d67a2b10e39d10947c",
    "table7.json": "40d25cf98d41837eec0dcafc003c108f276c725e50ef4b0c625bc2d38a0d5acc",
}


@dataclass(frozen=True)
class NamedDataset:
    name: str
    values: np.ndarray
    shift_applied: float

    def sample(self) -> ProgressiveSample:
        """The complete sample (the data contain ties, which are allowed here)."""
        return ProgressiveSample.complete(self.values, allow_ties=True)


@dataclass(frozen=True)
class GofResult:
    ks_distance: float
    p_value: float
    fitted: RayleighParams

    def to_dict(self) -> dict:
        return {"ks_distance": self.ks_distance, "p_value": self.p_value,
                "mu": self.fitted.mu, "lambda": self.fitted.lam}


def _read_verified(filename: str) -> bytes:
    raw = resources.files("sskit").joinpath("data", filename).read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if digest != _DIGESTS[filename]:
        raise IntegrityError(f"{filename}: SHA-256 {digest} does not match the pinned digest")
    return raw


def load_dataset(name: str, apply_shift: bool = True) -> NamedDataset:
    """Load ``gauge20`` or ``gauge10``; subtract 0.75 when ``apply_shift``."""
    if name not in ("gauge20", "gauge10"):
        raise LookupError(f"unknown dataset {name!r}; choose gauge20 or gauge10")
    text = _read_verified(name + ".csv").decode("ascii")
    rows = list(csv.DictReader(io.StringIO(text)))
    values = np.array([float(r["value"]) for r in rows])
    shift = SHIFT if apply_shift else 0.0
    values = values - shift
    values.setflags(write=False)
    return NamedDataset(name, values, shift)


def kolmogorov_sf(t: float) -> float:
    """P(K > t) for the limiting Kolmogorov distribution, series cut at 1e-12."""
    if t <= 0:
        return 1.0
    if t < 1.0:
        # theta-function form converges fast for small t
        s, k = 0.0, 1
        c = math.pi**2 / (8.0 * t * t)
        while True:
            term = math.exp(-(2 * k - 1) ** 2 * c)
            s += term
            if term < 1e-12:
                break
            k += 1
        return 1.0 - math.sqrt(2.0 * math.pi) / t * s
    s, k = 0.0, 1
    while True:
        term = math.exp(-2.0 * k * k * t * t)
        s += term if k % 2 else -term
        if term < 1e-12:
            break
        k += 1
    return min(1.0, max(0.0, 2.0 * s))


def ks_distance(values, params: RayleighParams) -> float:
    x = np.sort(np.asarray(values, dtype=float))
    if x.size == 0:
        raise DomainError("KS test needs at least one value")
    n = x.size
    f = cdf(params, x)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_test(values, params: RayleighParams) -> GofResult:
    """One-sample KS distance and asymptotic p-value P(K > sqrt(n) D)."""
    d = ks_distance(values, params)
    n = np.asarray(values).size
    return GofResult(d, kolmogorov_sf(math.sqrt(n) * d), params)


def pp_points(values, params: RayleighParams) -> list[tuple[float, float]]:
    """P-P plot pairs (i/(n+1), F(x_i))."""
    x = np.sort(np.asarray(values, dtype=float))
    n = x.size
    return [((i + 1) / (n + 1), float(f)) for i, f in enumerate(np.atleast_1d(cdf(params, x)))]


def write_pp_csv(points, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["empirical", "theoretical"])
        for e, t in points:
            w.writerow([repr(e), repr(t)])
    return path


def fit_single(dataset: NamedDataset, method: str = "moments") -> RayleighParams:
    """One-sample fit of (mu, lambda): ``moments`` or ``mle``."""
    if method == "moments":
        mu, lam = moments_single(dataset.values)
    elif method == "mle":
        mu, lam = mle_single(dataset.sample())
    else:
        raise DomainError(f"unknown fit method {method!r}")
    return RayleighParams(mu, lam)


def _table7() -> dict:
    return json.loads(_read_verified("table7.json"))


def apply_table7_scheme(dataset: NamedDataset, scheme_id: str) -> ProgressiveSample:
    """The 10 progressively censored observations listed for ``scheme_id``.

    The listed rows are authoritative (the removal draws behind them are not
    known); they are checked to be values of the dataset and returned in the
    dataset's units.
    """
    table = _table7()
    if scheme_id not in table:
        raise LookupError(f"unknown scheme {scheme_id!r}; choose scheme1 or scheme2")
    entry = table[scheme_id]
    listed = np.array(entry[dataset.name], dtype=float) - dataset.shift_applied
    pool = np.round(dataset.values, 9)
    for v in np.round(listed, 9):
        if v not in pool:
            raise IntegrityError(f"{scheme_id} value {v + dataset.shift_applied:.3f} "
                                 f"is not in {dataset.name}")
    scheme = CensoringScheme.from_removals(entry["removals"])
    if scheme.total != dataset.values.size:
        raise IntegrityError(f"{scheme_id} covers {scheme.total} units, dataset has "
                             f"{dataset.values.size}")
    return ProgressiveSample(scheme, listed)


def real_data_samples(mode: str, apply_shift: bool = True):
    """(xs, ys) for ``mode`` in {complete, scheme1, scheme2}."""
    x = load_dataset("gauge20", apply_shift)
    y = load_dataset("gauge10", apply_shift)
    if mode == "complete":
        return x.sample(), y.sample()
    if mode in ("scheme1", "scheme2"):
        return apply_table7_scheme(x, mode), apply_table7_scheme(y, mode)
    raise DomainError(f"mode must be complete, scheme1 or scheme2, got {mode!r}")


def analyze_real_data(mode: str = "complete", prior: PriorSpec | None = None,
                      eta: float = 0.05, seed: int = 0, t_total: int = 1000,
                      burn_in: int | None = None, apply_shift: bool = True) -> dict:
    """Joint MLE, asymptotic interval and Gibbs posterior summaries for R."""
    prior = prior if prior is not None else PriorSpec()
    xs, ys = real_data_samples(mode, apply_shift)
    fit = mle_joint(xs, ys)
    ci = asymptotic_ci(xs, ys, eta, fit)
    draws = gibbs_chain(xs, ys, prior, t_total, burn_in, rng=RngStream(seed, 0))
    mean, var = posterior_summary(draws)
    cred = credible_interval(draws, eta)
    return {
        "mode": mode,
        "shift": SHIFT if apply_shift else 0.0,
        "eta": eta,
        "seed": seed,
        "mle": fit.to_dict(),
        "r_mle": fit.r_hat,
        "asymptotic_ci": ci.to_dict(),
        "prior": prior.to_dict(),
        "gibbs": {"t_total": t_total, "burn_in": draws.burn_in},
        "r_bayes": mean,
        "posterior_var": var,
        "credible_interval": cred.to_dict(),
    }
