"""Monte Carlo study harness for the point and interval estimators of R.

A study runs over cells (parameter set x scheme pair). Unknown-location
cells evaluate the joint MLE, Gibbs posterior means and credible intervals
per prior, the asymptotic interval and both bootstrap intervals.
Known-location cells evaluate the MLE, UMVUE, Lindley estimate, the
Lindley posterior interval and the exact interval.

Replication ``k`` of the cell (set i, pair j) draws everything from
``RngStream(seed, kind, (i, j, k, ...))``, so any partition of the
replications over workers gives the same records. Summaries are computed
from the per-replication records with ``math.fsum``, which makes them
independent of accumulation order.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

from .asymptotic import asymptotic_ci
from .bayes import (
    PriorSpec,
    bayes_interval_known_mu,
    credible_interval,
    default_init,
    gibbs_chain,
    lindley_estimate,
    posterior_summary,
)
from .bootstrap import BootConfig, boot_p_from, boot_t_from, bootstrap_replicates
from .errors import ConfigError, SskitError
from .estimators import mle_joint, mle_known_mu, sufficient_stats, umvue_r
from .exact import exact_ci_r_known_mu
from .rayleigh import CensoringScheme, RayleighParams, RngStream, r_true, sample_progressive

TIE = 1e-12
UNKNOWN, KNOWN = 0, 1

SCHEMES = {
    "r1": (0,) * 9 + (20,),
    "r2": (20,) + (0,) * 9,
    "r3": (2,) * 10,
}
PAIRS = [("r1", "r1"), ("r2", "r2"), ("r3", "r3"), ("r1", "r2"), ("r1", "r3"), ("r2", "r3")]
POINT_METHODS = ("mle", "bayes")
INTERVAL_METHODS = ("asymptotic", "boot_p", "boot_t", "credible")
KNOWN_METHODS = ("mle", "umvue", "lindley", "lindley_ci", "exact_ci")


def _scheme_doc(name):
    r = SCHEMES[name]
    return {"name": name, "N": len(r) + sum(r), "n": len(r), "removals": list(r)}


DEFAULTS = {
    "parameter_sets": [
        {"name": "Theta1", "lambda": 1.0, "alpha": 1.0, "mu": 1.0},
        {"name": "Theta2", "lambda": 1.0, "alpha": 1.0, "mu": 1.5},
        {"name": "Theta3", "lambda": 1.0, "alpha": 1.0, "mu": 2.5},
    ],
    "known_mu_sets": [
        {"name": "mu=0", "lambda": 1.0, "alpha": 1.0, "mu": 0.0},
        {"name": "mu=1", "lambda": 1.0, "alpha": 1.0, "mu": 1.0},
        {"name": "mu=1.5", "lambda": 1.0, "alpha": 1.0, "mu": 1.5},
    ],
    "scheme_pairs": [[_scheme_doc(a), _scheme_doc(b)] for a, b in PAIRS],
    "priors": [
        {"name": "Prior1", "a1": 0.0, "b1": 0.0, "a2": 0.0, "b2": 0.0},
        {"name": "Prior2", "a1": 1.0, "b1": 1.0, "a2": 1.0, "b2": 1.0},
        {"name": "Prior3", "a1": 2.0, "b1": 3.0, "a2": 2.0, "b2": 3.0},
    ],
    "lindley_prior": {"name": "Prior1", "a1": 0.0, "b1": 0.0, "a2": 0.0, "b2": 0.0},
    "replications": 1000,
    "nboot": 250,
    "gibbs_t": 1000,
    "burn_in": None,
    "eta": 0.05,
    "seed": 0,
    "estimators": {m: True for m in ("mle", "bayes", "asymptotic", "boot_p", "boot_t",
                                     "credible", "umvue", "lindley", "lindley_ci", "exact_ci")},
}

_PARAM = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "lambda": {"type": "number", "exclusiveMinimum": 0},
        "alpha": {"type": "number", "exclusiveMinimum": 0},
        "mu": {"type": "number"},
    },
    "required": ["lambda", "alpha", "mu"],
    "additionalProperties": False,
}
_SCHEME = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "N": {"type": "integer", "minimum": 2},
        "n": {"type": "integer", "minimum": 2},
        "removals": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2},
    },
    "required": ["removals"],
    "additionalProperties": False,
}
_PRIOR = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "a1": {"type": "number", "minimum": 0},
        "b1": {"type": "number", "minimum": 0},
        "a2": {"type": "number", "minimum": 0},
        "b2": {"type": "number", "minimum": 0},
        "t1": {"type": ["number", "null"], "exclusiveMinimum": 0},
    },
    "additionalProperties": False,
}
CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "sskit study configuration",
    "type": "object",
    "properties": {
        "parameter_sets": {"type": "array", "items": _PARAM},
        "known_mu_sets": {"type": "array", "items": _PARAM},
        "scheme_pairs": {
            "type": "array", "minItems": 1,
            "items": {"type": "array", "items": _SCHEME, "minItems": 2, "maxItems": 2},
        },
        "priors": {"type": "array", "items": _PRIOR},
        "lindley_prior": _PRIOR,
        "replications": {"type": "integer", "minimum": 1},
        "nboot": {"type": "integer", "minimum": 2},
        "gibbs_t": {"type": "integer", "minimum": 2},
        "burn_in": {"type": ["integer", "null"], "minimum": 0},
        "eta": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "estimators": {
            "type": "object",
            "properties": {k: {"type": "boolean"} for k in DEFAULTS["estimators"]},
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}


@dataclass(frozen=True)
class NamedScheme:
    name: str
    scheme: CensoringScheme


@dataclass(frozen=True)
class StudyConfig:
    parameter_sets: tuple
    known_mu_sets: tuple
    scheme_pairs: tuple
    priors: tuple
    lindley_prior: tuple
    replications: int
    nboot: int
    gibbs_t: int
    burn_in: int | None
    eta: float
    seed: int
    estimators: dict = field(default_factory=dict)
    document: dict = field(default_factory=dict, compare=False, repr=False)

    def enabled(self, name) -> bool:
        return bool(self.estimators.get(name, False))

    def with_overrides(self, **kw) -> "StudyConfig":
        doc = dict(self.document)
        doc.update({k: v for k, v in kw.items() if v is not None})
        return validate_config(doc)


def _json_path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "$"


def validate_config(document) -> StudyConfig:
    """Validate a study document (JSON text or dict) and fill defaults.

    Every violation is collected with a path such as
    ``scheme_pairs[0][1].removals``; they are raised together as ConfigError.
    """
    errors = []
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document) if document.strip() else {}
        except json.JSONDecodeError as exc:
            raise ConfigError([("$", f"invalid JSON: {exc}")]) from None
    if not isinstance(document, dict):
        raise ConfigError([("$", "document must be a JSON object")])
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    for err in sorted(validator.iter_errors(document), key=lambda e: list(map(str, e.path))):
        errors.append((_json_path(err.path), err.message))
    if errors:
        raise ConfigError(errors)

    doc = {**DEFAULTS, **document}
    doc["estimators"] = {**DEFAULTS["estimators"], **document.get("estimators", {})}

    pairs = []
    for i, pair in enumerate(doc["scheme_pairs"]):
        built = []
        for j, s in enumerate(pair):
            base = f"scheme_pairs[{i}][{j}]"
            removals = tuple(s["removals"])
            n, big_n = len(removals), len(removals) + sum(removals)
            if "n" in s and s["n"] != n:
                errors.append((f"{base}.removals", f"has {n} entries but n = {s['n']}"))
            if "N" in s and s["N"] != s.get("n", n) + sum(removals):
                errors.append((f"{base}.removals",
                               f"n + sum(removals) = {s.get('n', n) + sum(removals)} "
                               f"does not equal N = {s['N']}"))
            try:
                built.append(NamedScheme(s.get("name", f"s{i}{j}"),
                                         CensoringScheme(big_n, n, removals)))
            except SskitError as exc:
                errors.append((f"{base}.removals", str(exc)))
        pairs.append(tuple(built))

    def params(key):
        out = []
        for i, p in enumerate(doc[key]):
            name = p.get("name", f"{key}{i}")
            out.append((name, float(p["lambda"]), float(p["alpha"]), float(p["mu"])))
        return tuple(out)

    def prior(p):
        return (p.get("name", ""), PriorSpec(float(p.get("a1", 0)), float(p.get("b1", 0)),
                                             float(p.get("a2", 0)), float(p.get("b2", 0)),
                                             p.get("t1")))

    burn = doc["burn_in"]
    if burn is not None and burn >= doc["gibbs_t"]:
        errors.append(("burn_in", f"must be smaller than gibbs_t = {doc['gibbs_t']}"))
    priors = tuple(prior(p) for p in doc["priors"])
    lindley = prior(doc["lindley_prior"])
    if doc["estimators"]["lindley"] and doc["known_mu_sets"]:
        lp = lindley[1]
        sizes = [(ns.scheme.observed, ms.scheme.observed) for ns, ms in
                 (pr for pr in pairs if len(pr) == 2)]
        if any(n + lp.b1 <= 1 or n + lp.a1 <= 1 or m + lp.a2 <= 1 for n, m in sizes):
            errors.append(("lindley_prior", "n + a1 - 1, n + b1 - 1 and m + a2 - 1 must be positive"))
    eta = doc["eta"]
    t_eff = doc["gibbs_t"] - (burn if burn is not None else int(0.2 * doc["gibbs_t"]))
    if doc["estimators"]["credible"] and priors and doc["parameter_sets"] and 0.5 * eta * t_eff < 1:
        errors.append(("eta", f"eta/2 times {t_eff} retained draws is below 1"))
    if errors:
        raise ConfigError(errors)
    return StudyConfig(
        parameter_sets=params("parameter_sets"),
        known_mu_sets=params("known_mu_sets"),
        scheme_pairs=tuple(pairs),
        priors=priors,
        lindley_prior=lindley,
        replications=int(doc["replications"]),
        nboot=int(doc["nboot"]),
        gibbs_t=int(doc["gibbs_t"]),
        burn_in=None if burn is None else int(burn),
        eta=float(eta),
        seed=int(doc["seed"]),
        estimators=dict(doc["estimators"]),
        document=doc,
    )


def load_config(path) -> StudyConfig:
    """Read a study document; the bare name ``paper_tables.json`` falls back to
    the shipped copy of the published design when no such file exists."""
    path = Path(path)
    if not path.exists() and path.name == str(path) == "paper_tables.json":
        return paper_config()
    return validate_config(path.read_text())


def paper_config() -> StudyConfig:
    """The shipped published design: three parameter sets, six scheme pairs,
    three priors, 1000 replications, NBOOT 250, T 1000."""
    from importlib import resources
    return validate_config(resources.files("sskit").joinpath("data", "paper_tables.json").read_text())


# ---------------------------------------------------------------------------
# one replication


def _pair_label(pair) -> str:
    return f"({pair[0].name},{pair[1].name})"


def _simulate(cfg, kind, i, j, k, pset):
    _, lam, alpha, mu = pset
    pair = cfg.scheme_pairs[j]
    stream = RngStream(cfg.seed, kind, (i, j, k))
    xs = sample_progressive(RayleighParams(mu, lam), pair[0].scheme, stream.substream(0))
    ys = sample_progressive(RayleighParams(mu, alpha), pair[1].scheme, stream.substream(1))
    return stream, xs, ys


def _interval_record(iv):
    return None if iv.empty else (iv.lo, iv.hi)


def _replicate_unknown(cfg: StudyConfig, i, j, k) -> dict:
    stream, xs, ys = _simulate(cfg, UNKNOWN, i, j, k, cfg.parameter_sets[i])
    rec = {}
    try:
        fit = mle_joint(xs, ys)
    except SskitError:
        fit = None
    if cfg.enabled("mle"):
        rec["mle"] = None if fit is None else fit.r_hat
    if cfg.enabled("asymptotic"):
        try:
            rec["asymptotic"] = _interval_record(asymptotic_ci(xs, ys, cfg.eta, fit))
        except (SskitError, AttributeError):
            rec["asymptotic"] = None
    if cfg.enabled("boot_p") or cfg.enabled("boot_t"):
        try:
            if fit is None:
                raise SskitError("no MLE")
            bc = BootConfig(cfg.nboot, cfg.eta, stream.substream(2))
            rep = bootstrap_replicates(xs, ys, bc, studentize=cfg.enabled("boot_t"), fit=fit)
            if cfg.enabled("boot_p"):
                rec["boot_p"] = _interval_record(boot_p_from(rep, cfg.eta))
            if cfg.enabled("boot_t"):
                rec["boot_t"] = _interval_record(boot_t_from(rep, cfg.eta))
        except SskitError:
            if cfg.enabled("boot_p"):
                rec["boot_p"] = None
            if cfg.enabled("boot_t"):
                rec["boot_t"] = None
    if cfg.enabled("bayes") or cfg.enabled("credible"):
        for p, (pname, prior) in enumerate(cfg.priors):
            try:
                init = None
                if fit is not None and 0 < fit.mu_hat < prior.mu_upper(xs, ys):
                    init = (fit.lambda_hat, fit.alpha_hat, fit.mu_hat)
                elif fit is None:
                    init = default_init(xs, ys, prior)
                draws = gibbs_chain(xs, ys, prior, cfg.gibbs_t, cfg.burn_in, init=init,
                                    rng=stream.substream(3 + p))
                point = posterior_summary(draws)[0]
                iv = _interval_record(credible_interval(draws, cfg.eta))
            except SskitError:
                point = iv = None
            if cfg.enabled("bayes"):
                rec[f"bayes:{pname}"] = point
            if cfg.enabled("credible"):
                rec[f"credible:{pname}"] = iv
    return rec


def _replicate_known(cfg: StudyConfig, i, j, k) -> dict:
    _, xs, ys = _simulate(cfg, KNOWN, i, j, k, cfg.known_mu_sets[i])
    mu = cfg.known_mu_sets[i][3]
    rec = {}
    stats = sufficient_stats(xs, ys, mu)
    prior = cfg.lindley_prior[1]

    def guarded(key, fn):
        try:
            rec[key] = fn()
        except SskitError:
            rec[key] = None

    if cfg.enabled("mle"):
        guarded("mle", lambda: mle_known_mu(xs, ys, mu)[2])
    if cfg.enabled("umvue"):
        guarded("umvue", lambda: umvue_r(stats, xs.n, ys.n))
    if cfg.enabled("lindley"):
        guarded("lindley", lambda: lindley_estimate(stats, xs.n, ys.n, prior))
    if cfg.enabled("lindley_ci"):
        guarded("lindley_ci", lambda: _interval_record(
            bayes_interval_known_mu(stats, xs.n, ys.n, prior, cfg.eta)))
    if cfg.enabled("exact_ci"):
        guarded("exact_ci", lambda: _interval_record(exact_ci_r_known_mu(xs, ys, mu, cfg.eta)))
    return rec


def _run_block(args):
    cfg_doc, kind, i, j, start, stop = args
    cfg = validate_config(cfg_doc)
    fn = _replicate_unknown if kind == UNKNOWN else _replicate_known
    return [(kind, i, j, k, fn(cfg, i, j, k)) for k in range(start, stop)]


# ---------------------------------------------------------------------------
# report


@dataclass
class StudyReport:
    """Per-replication records plus the summaries derived from them.

    ``records[(kind, i, j)]`` maps replication index to ``{method: value}``;
    a point value is a float, an interval a ``(lo, hi)`` pair, a failure None.
    """

    config: StudyConfig
    records: dict = field(default_factory=dict)

    def merge(self, other: "StudyReport") -> "StudyReport":
        out = StudyReport(self.config, {key: dict(v) for key, v in self.records.items()})
        for key, reps in other.records.items():
            out.records.setdefault(key, {}).update(reps)
        return out

    def _truth(self, kind, i):
        sets = self.config.parameter_sets if kind == UNKNOWN else self.config.known_mu_sets
        _, lam, alpha, _ = sets[i]
        return r_true(lam, alpha)

    def rows(self) -> list[dict]:
        """One summary row per (cell, method)."""
        out = []
        for (kind, i, j) in sorted(self.records):
            reps = self.records[(kind, i, j)]
            truth = self._truth(kind, i)
            sets = self.config.parameter_sets if kind == UNKNOWN else self.config.known_mu_sets
            methods = sorted({m for rec in reps.values() for m in rec})
            for m in methods:
                vals = [reps[k].get(m) for k in sorted(reps) if m in reps[k]]
                ok = [v for v in vals if v is not None]
                row = {
                    "table": "unknown_mu" if kind == UNKNOWN else "known_mu",
                    "parameter_set": sets[i][0],
                    "scheme_pair": _pair_label(self.config.scheme_pairs[j]),
                    "method": m,
                    "replications": len(vals),
                    "failures": len(vals) - len(ok),
                }
                if ok and isinstance(ok[0], tuple):
                    row["interval_sum_length"] = math.fsum(hi - lo for lo, hi in ok)
                    row["covered"] = sum(1 for lo, hi in ok if lo <= truth <= hi)
                    row["avg_length"] = row["interval_sum_length"] / len(ok)
                    row["coverage"] = row["covered"] / len(ok)
                elif ok:
                    err = np.array(ok) - truth
                    row["sum_error"] = math.fsum(err)
                    row["sum_sq_error"] = math.fsum(err * err)
                    row["bias"] = abs(row["sum_error"] / len(ok))
                    row["mse"] = row["sum_sq_error"] / len(ok)
                out.append(row)
        return out

    def lookup(self, parameter_set, scheme_pair, method, table="unknown_mu") -> dict | None:
        for row in self.rows():
            if (row["table"], row["parameter_set"], row["scheme_pair"], row["method"]) == (
                    table, parameter_set, scheme_pair, method):
                return row
        return None

    def to_json(self) -> str:
        return json.dumps({"config": self.config.document, "rows": self.rows()},
                          indent=2, sort_keys=True) + "\n"

    # published table layouts ---------------------------------------------

    def _index(self):
        return {(r["table"], r["parameter_set"], r["scheme_pair"], r["method"]): r
                for r in self.rows()}

    def table2(self) -> list[dict]:
        idx = self._index()
        rows = []
        for name, *_ in self.config.parameter_sets:
            for pair in self.config.scheme_pairs:
                label = _pair_label(pair)
                row = {"theta": name, "scheme": label}
                for m, key in [("mle", "MLE")] + [(f"bayes:{p}", p) for p, _ in self.config.priors]:
                    r = idx.get(("unknown_mu", name, label, m), {})
                    row[f"{key}_bias"] = r.get("bias")
                    row[f"{key}_mse"] = r.get("mse")
                rows.append(row)
        return rows

    def table3(self) -> list[dict]:
        idx = self._index()
        rows = []
        cols = [("asymptotic", "MLE"), ("boot_p", "Boot-p"), ("boot_t", "Boot-t")] + [
            (f"credible:{p}", p) for p, _ in self.config.priors]
        for name, *_ in self.config.parameter_sets:
            for pair in self.config.scheme_pairs:
                label = _pair_label(pair)
                row = {"theta": name, "scheme": label}
                for m, key in cols:
                    r = idx.get(("unknown_mu", name, label, m), {})
                    row[f"{key}_length"] = r.get("avg_length")
                    row[f"{key}_coverage"] = r.get("coverage")
                rows.append(row)
        return rows

    def table4(self) -> list[dict]:
        idx = self._index()
        rows = []
        for name, *_ in self.config.known_mu_sets:
            for pair in self.config.scheme_pairs:
                label = _pair_label(pair)
                row = {"mu": name, "scheme": label}
                for m, key in (("mle", "MLE"), ("lindley", "Lindley"), ("umvue", "UMVUE")):
                    r = idx.get(("known_mu", name, label, m), {})
                    row[f"{key}_bias"] = r.get("bias")
                    row[f"{key}_mse"] = r.get("mse")
                r = idx.get(("known_mu", name, label, "lindley_ci"), {})
                row["Lindley_interval_length"] = r.get("avg_length")
                row["Lindley_interval_coverage"] = r.get("coverage")
                rows.append(row)
        return rows

    def write(self, out_dir) -> list[Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        for name, rows in (("table2", self.table2()), ("table3", self.table3()),
                           ("table4", self.table4())):
            if not rows:
                continue
            path = out_dir / f"{name}.csv"
            with path.open("w", newline="") as fh:
                w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
                w.writeheader()
                for row in rows:
                    w.writerow({k: ("" if v is None else (f"{v:.4f}" if isinstance(v, float) else v))
                                for k, v in row.items()})
            written.append(path)
        path = out_dir / "report.json"
        path.write_text(self.to_json())
        written.append(path)
        return written


def _blocks(cfg: StudyConfig, kinds, start, stop, chunk):
    doc = cfg.document
    for kind in kinds:
        sets = cfg.parameter_sets if kind == UNKNOWN else cfg.known_mu_sets
        for i in range(len(sets)):
            for j in range(len(cfg.scheme_pairs)):
                for a in range(start, stop, chunk):
                    yield (doc, kind, i, j, a, min(a + chunk, stop))


def default_jobs() -> int:
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:
        return os.cpu_count() or 1


def run_study(cfg: StudyConfig, kinds=(UNKNOWN, KNOWN), jobs: int = 1,
              start: int = 0, stop: int | None = None, chunk: int = 50) -> StudyReport:
    """Run replications [start, stop) of every cell of the requested kinds."""
    if not isinstance(cfg, StudyConfig):
        raise ConfigError([("$", "expected a StudyConfig")])
    stop = cfg.replications if stop is None else stop
    blocks = list(_blocks(cfg, kinds, start, stop, chunk))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_block, blocks))
    else:
        results = [_run_block(b) for b in blocks]
    report = StudyReport(cfg)
    for block in results:
        for kind, i, j, k, rec in block:
            report.records.setdefault((kind, i, j), {})[k] = rec
    return report


def run_point_study(cfg: StudyConfig, jobs: int = 1, **kw) -> StudyReport:
    """Bias/MSE study: MLE and posterior means, plus the known-location estimators."""
    keep = {"mle", "bayes", "umvue", "lindley"}
    doc = dict(cfg.document)
    doc["estimators"] = {k: (v and k in keep) for k, v in cfg.estimators.items()}
    return run_study(validate_config(doc), jobs=jobs, **kw)


def run_interval_study(cfg: StudyConfig, jobs: int = 1, **kw) -> StudyReport:
    """Average length/coverage study of the interval methods."""
    keep = {"asymptotic", "boot_p", "boot_t", "credible", "lindley_ci", "exact_ci"}
    doc = dict(cfg.document)
    doc["estimators"] = {k: (v and k in keep) for k, v in cfg.estimators.items()}
    return run_study(validate_config(doc), jobs=jobs, **kw)


# ---------------------------------------------------------------------------
# orderings


def _chain(values: list) -> tuple[str, float]:
    """Check values[0] < values[1] < ...; returns (status, smallest gap)."""
    gaps = [b - a for a, b in zip(values, values[1:])]
    worst = min(gaps)
    if worst < -TIE:
        return "violated", worst
    if any(abs(g) <= TIE for g in gaps):
        return "tie", worst
    return "holds", worst


def summarize_orderings(report: StudyReport) -> list[dict]:
    """Ordering findings per unknown-location cell.

    ``credible_length``: Prior3 < Prior2 < Prior1 credible length.
    ``interval_length``: credible (widest prior) < asymptotic < Boot-p < Boot-t.
    ``bayes_mse``: Prior3 <= Prior2 <= Prior1 posterior-mean MSE.
    Status is holds / tie (gap within 1e-12) / violated / absent.
    """
    idx = report._index()
    priors = [p for p, _ in report.config.priors]
    findings = []
    for name, *_ in report.config.parameter_sets:
        for pair in report.config.scheme_pairs:
            label = _pair_label(pair)

            def get(m, key):
                r = idx.get(("unknown_mu", name, label, m))
                return None if r is None else r.get(key)

            specs = []
            if len(priors) >= 2:
                specs.append(("credible_length",
                              [get(f"credible:{p}", "avg_length") for p in reversed(priors)]))
                specs.append(("bayes_mse", [get(f"bayes:{p}", "mse") for p in reversed(priors)]))
            cred = [get(f"credible:{p}", "avg_length") for p in priors]
            widest = max(cred) if cred and None not in cred else None
            specs.append(("interval_length", [widest, get("asymptotic", "avg_length"),
                                              get("boot_p", "avg_length"),
                                              get("boot_t", "avg_length")]))
            present = [(k, v) for k, v in specs if sum(x is not None for x in v) >= 2]
            for key, vals in present:
                if None in vals:
                    findings.append({"cell": (name, label), "finding": key,
                                     "status": "absent", "margin": None, "values": vals})
                    continue
                status, margin = _chain(vals)
                if key == "bayes_mse" and status == "tie":
                    status = "holds"
                findings.append({"cell": (name, label), "finding": key, "status": status,
                                 "margin": margin, "values": vals})
    return findings
