"""Two-parameter Rayleigh primitives and progressive Type-II censored samples.

The density used throughout is

    f(x) = 2 lam (x - mu) exp(-lam (x - mu)^2),   x > mu,

with location ``mu`` and scale ``lam``. Density and CDF are zero at and
below the location (closed convention).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError, SchemeError


@dataclass(frozen=True)
class RayleighParams:
    mu: float
    lam: float

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise DomainError(f"scale must be positive and finite, got {self.lam!r}")
        if not math.isfinite(self.mu):
            raise DomainError(f"location must be finite, got {self.mu!r}")


@dataclass(frozen=True)
class CensoringScheme:
    """Progressive Type-II plan: ``total`` units on test, ``observed`` failures,
    ``removals[i]`` survivors withdrawn at the (i+1)-th failure."""

    total: int
    observed: int
    removals: tuple[int, ...]

    def __post_init__(self):
        removals = tuple(int(r) for r in self.removals)
        object.__setattr__(self, "removals", removals)
        if self.observed < 2:
            raise SchemeError(f"need at least 2 observed failures, got {self.observed}")
        if len(removals) != self.observed:
            raise SchemeError(
                f"{len(removals)} removals given for {self.observed} observed failures"
            )
        if any(r < 0 for r in removals):
            raise SchemeError("removal counts must be nonnegative")
        if self.observed + sum(removals) != self.total:
            raise SchemeError(
                f"n + sum(R) = {self.observed + sum(removals)} does not equal N = {self.total}"
            )

    @classmethod
    def from_removals(cls, removals) -> "CensoringScheme":
        removals = tuple(int(r) for r in removals)
        return cls(len(removals) + sum(removals), len(removals), removals)

    @classmethod
    def complete(cls, n: int) -> "CensoringScheme":
        return cls(n, n, (0,) * n)

    @property
    def weights(self) -> np.ndarray:
        """Multiplicities R_i + 1 attached to each observed failure."""
        return np.asarray(self.removals, dtype=float) + 1.0

    def to_dict(self) -> dict:
        return {"N": self.total, "n": self.observed, "removals": list(self.removals)}


@dataclass(frozen=True)
class ProgressiveSample:
    """Observed failure times bound to their censoring scheme.

    Values must be strictly increasing. Bootstrap resamples relax this to
    nondecreasing via ``allow_ties``.
    """

    scheme: CensoringScheme
    values: np.ndarray
    allow_ties: bool = field(default=False, compare=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or values.size != self.scheme.observed:
            raise SchemeError(
                f"sample has {values.size} values but the scheme observes {self.scheme.observed}"
            )
        if not np.all(np.isfinite(values)):
            raise SchemeError("sample values must be finite")
        steps = np.diff(values)
        if self.allow_ties:
            if np.any(steps < 0):
                raise SchemeError("sample values must be nondecreasing")
        elif np.any(steps <= 0):
            raise SchemeError("sample values must be strictly increasing")

    @property
    def n(self) -> int:
        return self.scheme.observed

    @property
    def weights(self) -> np.ndarray:
        return self.scheme.weights

    @property
    def first(self) -> float:
        return float(self.values[0])

    @classmethod
    def complete(cls, values, allow_ties: bool = False) -> "ProgressiveSample":
        values = np.sort(np.asarray(values, dtype=float))
        return cls(CensoringScheme.complete(values.size), values, allow_ties)


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream addressed by ``(seed, stream_id, path)``.

    Streams with different ids or paths are statistically independent
    (``numpy.random.SeedSequence`` spawn keys); the same address always
    yields the same generator state.
    """

    seed: int
    stream_id: int = 0
    path: tuple[int, ...] = ()

    def __post_init__(self):
        if self.seed < 0 or self.seed >= 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.stream_id < 0 or any(p < 0 for p in self.path):
            raise DomainError("stream ids must be nonnegative")

    def substream(self, index: int) -> "RngStream":
        return RngStream(self.seed, self.stream_id, self.path + (int(index),))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, *self.path))
        return np.random.Generator(np.random.PCG64(ss))


def pdf(params: RayleighParams, x):
    z = np.asarray(x, dtype=float) - params.mu
    pos = z > 0
    zp = np.where(pos, z, 0.0)
    out = np.where(pos, 2.0 * params.lam * zp * np.exp(-params.lam * zp * zp), 0.0)
    return out if out.ndim else float(out)


def cdf(params: RayleighParams, x):
    z = np.asarray(x, dtype=float) - params.mu
    zp = np.where(z > 0, z, 0.0)
    out = -np.expm1(-params.lam * zp * zp)
    return out if out.ndim else float(out)


def quantile(params: RayleighParams, p):
    p = np.asarray(p, dtype=float)
    if np.any((p < 0) | (p >= 1) | np.isnan(p)):
        raise DomainError("quantile requires 0 <= p < 1")
    out = params.mu + np.sqrt(-np.log1p(-p) / params.lam)
    return out if out.ndim else float(out)


def r_true(lam: float, alpha: float) -> float:
    """Reliability P(Y < X) = alpha / (alpha + lam) for a common location."""
    if not (lam > 0 and alpha > 0):
        raise DomainError("both scale parameters must be positive")
    return alpha / (alpha + lam)


def _progressive_uniforms(w: np.ndarray, removals) -> np.ndarray:
    # uniform-spacings construction: V_i = W_i^(1/(i + R_n + ... + R_{n-i+1})),
    # U_i = 1 - V_n V_{n-1} ... V_{n-i+1}
    n = len(removals)
    tail = np.cumsum(np.asarray(removals, dtype=float)[::-1])
    v = w ** (1.0 / (np.arange(1, n + 1) + tail))
    return -np.expm1(np.cumsum(np.log(v[::-1])))


def sample_progressive(params: RayleighParams, scheme: CensoringScheme, rng) -> ProgressiveSample:
    """Draw one progressive Type-II censored sample.

    ``rng`` may be an :class:`RngStream` or a ``numpy.random.Generator``.
    """
    if not isinstance(scheme, CensoringScheme):
        raise SchemeError("scheme must be a CensoringScheme")
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    w = 1.0 - gen.random(scheme.observed)  # (0, 1]: keeps log(V) finite
    u = _progressive_uniforms(w, scheme.removals)
    x = np.sort(quantile(params, u))
    # a zero uniform maps exactly to mu; ties are measure-zero but must not
    # break the strict-increase invariant
    if x[0] <= params.mu or np.any(np.diff(x) <= 0):
        x[0] = max(x[0], np.nextafter(params.mu, np.inf))
        for i in range(1, x.size):
            x[i] = max(x[i], np.nextafter(x[i - 1], np.inf))
    return ProgressiveSample(scheme, x)


def write_sample(sample: ProgressiveSample, path) -> tuple[Path, Path]:
    """Write ``index,value`` CSV plus a ``{N, n, removals}`` JSON sidecar.

    The sidecar shares the CSV's stem with a ``.json`` suffix.
    """
    path = Path(path)
    sidecar = path.with_suffix(".json")
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "value"])
        for i, v in enumerate(sample.values, start=1):
            writer.writerow([i, repr(float(v))])
    sidecar.write_text(json.dumps(sample.scheme.to_dict(), sort_keys=True) + "\n")
    return path, sidecar


def read_sample(path) -> ProgressiveSample:
    path = Path(path)
    sidecar = path.with_suffix(".json")
    try:
        meta = json.loads(sidecar.read_text())
    except FileNotFoundError:
        raise SchemeError(f"missing scheme sidecar {sidecar}") from None
    except json.JSONDecodeError as exc:
        raise SchemeError(f"sidecar {sidecar} is not valid JSON: {exc}") from None
    try:
        scheme = CensoringScheme(int(meta["N"]), int(meta["n"]), tuple(meta["removals"]))
    except (KeyError, TypeError) as exc:
        raise SchemeError(f"sidecar {sidecar} lacks N, n or removals") from exc
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["index", "value"]:
            raise SchemeError(f"{path}: expected header 'index,value', got {header}")
        rows = [r for r in reader if r]
    try:
        idx = [int(r[0]) for r in rows]
        values = [float(r[1]) for r in rows]
    except (ValueError, IndexError) as exc:
        raise SchemeError(f"{path}: malformed row") from exc
    if idx != list(range(1, len(rows) + 1)):
        raise SchemeError(f"{path}: indices must run 1..n in order")
    return ProgressiveSample(scheme, values)
