"""``sskit`` command line: simulate, estimate, interval, bayes, study, analyze, gof.

Exit status is 0 on success, 1 on a domain, convergence or data error and
2 on a usage error. Outputs go to ``--out`` (default: current directory).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bayes, data, study
from .asymptotic import asymptotic_ci
from .bootstrap import BootConfig, boot_p_from, boot_t_from, bootstrap_replicates
from .errors import ConfigError, SskitError
from .estimators import mle_joint, mle_known_mu, sufficient_stats, umvue_r
from .exact import exact_ci_mu, exact_ci_r_known_mu, exact_joint_region
from .rayleigh import (
    CensoringScheme,
    RayleighParams,
    RngStream,
    read_sample,
    sample_progressive,
    write_sample,
)

FAST_PROFILE = {"replications": 100, "nboot": 100}


class UsageError(Exception):
    pass


def _write_json(path: Path, obj) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("SSKIT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"SSKIT_SEED must be an integer, got {env!r}") from None


def _removals(text: str):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"removals must be comma-separated integers: {text!r}")


def _prior(text: str) -> bayes.PriorSpec:
    if text in ("1", "2", "3"):
        return bayes.PRIORS[int(text)]
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"prior must be 1, 2, 3 or a1,b1,a2,b2[,t1]: {text!r}")
    if len(vals) not in (4, 5):
        raise argparse.ArgumentTypeError("prior needs a1,b1,a2,b2 and optionally t1")
    try:
        return bayes.PriorSpec(*vals)
    except SskitError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _samples(args):
    return read_sample(args.xs), read_sample(args.ys)


# ---------------------------------------------------------------------------
# subcommands


def cmd_simulate(args):
    seed = _seed(args)
    root = RngStream(seed, 0)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for k, (scale, removals, stem) in enumerate(((args.lam, args.scheme_x, "x"),
                                                 (args.alpha, args.scheme_y, "y"))):
        sample = sample_progressive(RayleighParams(args.mu, scale),
                                    CensoringScheme.from_removals(removals), root.substream(k))
        written += write_sample(sample, out / f"{stem}.csv")
    return written


def cmd_estimate(args):
    xs, ys = _samples(args)
    if args.mu is None:
        fit = mle_joint(xs, ys)
        report = {"location": "unknown", "mle": fit.to_dict(), "r_mle": fit.r_hat}
    else:
        lam, alpha, r = mle_known_mu(xs, ys, args.mu)
        stats = sufficient_stats(xs, ys, args.mu)
        report = {
            "location": "known", "mu": args.mu, "lambda": lam, "alpha": alpha, "r_mle": r,
            "r_umvue": umvue_r(stats, xs.n, ys.n),
            "r_lindley": bayes.lindley_estimate(stats, xs.n, ys.n, args.prior),
            "prior": args.prior.to_dict(),
        }
    return [_write_json(Path(args.out) / "estimate.json", report)]


def cmd_interval(args):
    xs, ys = _samples(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    m = args.method
    report = {"method": m, "eta": args.eta}
    if m == "asymptotic":
        report["interval"] = asymptotic_ci(xs, ys, args.eta, mle_joint(xs, ys)).to_dict()
    elif m in ("boot-p", "boot-t"):
        cfg = BootConfig(args.nboot, args.eta, RngStream(_seed(args), 1))
        rep = bootstrap_replicates(xs, ys, cfg, studentize=(m == "boot-t"))
        iv = boot_p_from(rep, args.eta) if m == "boot-p" else boot_t_from(rep, args.eta)
        report.update(interval=iv.to_dict(), nboot=args.nboot, seed=cfg.seed.seed,
                      failed=rep.n_failed_fit + rep.n_failed_var)
    elif m == "exact-mu":
        report["interval"] = exact_ci_mu(xs, ys, args.eta).to_dict()
    elif m == "joint-region":
        region = exact_joint_region(xs, ys, args.eta, args.grid)
        report["mu_interval"] = region.mu_interval.to_dict()
        if not region.empty:
            report["slices_csv"] = region.write_csv(out / "joint_region.csv").name
    else:
        if args.mu is None:
            raise UsageError(f"--mu is required for --method {m}")
        if m == "exact-known-mu":
            report["interval"] = exact_ci_r_known_mu(xs, ys, args.mu, args.eta).to_dict()
        else:
            stats = sufficient_stats(xs, ys, args.mu)
            report["interval"] = bayes.bayes_interval_known_mu(
                stats, xs.n, ys.n, args.prior, args.eta).to_dict()
            report["prior"] = args.prior.to_dict()
        report["mu"] = args.mu
    return [_write_json(out / "interval.json", report)]


def cmd_bayes(args):
    xs, ys = _samples(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    seed = _seed(args)
    draws = bayes.gibbs_chain(xs, ys, args.prior, args.t, args.burn_in,
                              rng=RngStream(seed, 2), scan=args.scan)
    mean, var = bayes.posterior_summary(draws)
    summary = {
        "prior": args.prior.to_dict(), "t_total": args.t, "burn_in": draws.burn_in,
        "scan": args.scan, "seed": seed, "posterior_mean": mean, "posterior_var": var,
        "credible_interval": bayes.credible_interval(draws, args.eta).to_dict(),
        "shortest_interval": bayes.credible_interval(draws, args.eta, "shortest").to_dict(),
    }
    return [draws.write_csv(out / "chain.csv"), _write_json(out / "bayes.json", summary)]


def cmd_study(args):
    cfg = study.load_config(args.config) if args.config else study.validate_config({})
    overrides = dict(FAST_PROFILE) if args.fast else {}
    for key in ("replications", "nboot", "gibbs_t", "eta"):
        if getattr(args, key) is not None:
            overrides[key] = getattr(args, key)
    if args.seed is not None or "SSKIT_SEED" in os.environ:
        overrides["seed"] = _seed(args)
    if overrides:
        cfg = cfg.with_overrides(**overrides)
    kinds = {"all": (study.UNKNOWN, study.KNOWN), "unknown": (study.UNKNOWN,),
             "known": (study.KNOWN,)}[args.tables]
    report = study.run_study(cfg, kinds=kinds, jobs=args.jobs)
    written = report.write(args.out)
    findings = study.summarize_orderings(report)
    written.append(_write_json(Path(args.out) / "orderings.json", findings))
    return written


def cmd_analyze(args):
    report = data.analyze_real_data(args.mode, args.prior, args.eta, _seed(args), args.t,
                                    args.burn_in, apply_shift=not args.no_shift)
    return [_write_json(Path(args.out) / f"analysis_{args.mode}.json", report)]


def cmd_gof(args):
    out = Path(args.out)
    ds = data.load_dataset(args.dataset, apply_shift=args.shift)
    params = data.fit_single(ds, args.fit)
    res = data.ks_test(ds.values, params)
    report = {"dataset": args.dataset, "shift": ds.shift_applied, "fit": args.fit, **res.to_dict()}
    out.mkdir(parents=True, exist_ok=True)
    pp = data.write_pp_csv(data.pp_points(ds.values, params), out / f"pp_{args.dataset}.csv")
    return [_write_json(out / f"gof_{args.dataset}.json", report), pp]


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=".", help="output directory (default: .)")
    common.add_argument("--seed", type=int, default=None,
                        help="random seed (falls back to $SSKIT_SEED, then 0)")
    common.add_argument("--json-errors", action="store_true",
                        help="also print errors as JSON on stderr")
    common.add_argument("--jobs", type=int, default=study.default_jobs(),
                        help="worker processes (default: available CPUs)")

    parser = argparse.ArgumentParser(prog="sskit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def two_samples(p):
        p.add_argument("--xs", required=True, help="strength sample CSV (with .json sidecar)")
        p.add_argument("--ys", required=True, help="stress sample CSV (with .json sidecar)")

    p = sub.add_parser("simulate", parents=[common], help="draw two progressive samples")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--scheme-x", type=_removals, required=True, help="removals, e.g. 0,0,20")
    p.add_argument("--scheme-y", type=_removals, required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", parents=[common], help="point estimates of R")
    two_samples(p)
    p.add_argument("--mu", type=float, default=None, help="known location (omit: joint MLE)")
    p.add_argument("--prior", type=_prior, default=bayes.PRIORS[1])
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("interval", parents=[common], help="confidence intervals")
    two_samples(p)
    p.add_argument("--method", required=True,
                   choices=["asymptotic", "boot-p", "boot-t", "exact-mu", "joint-region",
                            "exact-known-mu", "bayes-known-mu"])
    p.add_argument("--eta", type=float, default=0.05)
    p.add_argument("--nboot", type=int, default=250)
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--prior", type=_prior, default=bayes.PRIORS[1])
    p.set_defaults(func=cmd_interval)

    p = sub.add_parser("bayes", parents=[common], help="Gibbs sampler for R")
    two_samples(p)
    p.add_argument("--prior", type=_prior, default=bayes.PRIORS[1])
    p.add_argument("--t", type=int, default=1000, help="chain length")
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--eta", type=float, default=0.05)
    p.add_argument("--scan", choices=["fresh", "lagged"], default="fresh")
    p.set_defaults(func=cmd_bayes)

    p = sub.add_parser("study", parents=[common], help="Monte Carlo tables")
    p.add_argument("--config", default=None, help="study JSON (default: built-in published design)")
    p.add_argument("--fast", action="store_true", help="100 replications, NBOOT=100")
    p.add_argument("--replications", type=int, default=None)
    p.add_argument("--nboot", type=int, default=None)
    p.add_argument("--gibbs-t", dest="gibbs_t", type=int, default=None)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--tables", choices=["all", "unknown", "known"], default="all")
    p.set_defaults(func=cmd_study)

    p = sub.add_parser("analyze", parents=[common], help="real-data analysis")
    p.add_argument("--mode", choices=["complete", "scheme1", "scheme2"], default="complete")
    p.add_argument("--prior", type=_prior, default=bayes.PRIORS[1])
    p.add_argument("--eta", type=float, default=0.05)
    p.add_argument("--t", type=int, default=1000)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--no-shift", action="store_true", help="keep the original units")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gof", parents=[common], help="goodness of fit of one dataset")
    p.add_argument("--dataset", choices=["gauge20", "gauge10"], required=True)
    p.add_argument("--fit", choices=["moments", "mle"], default="moments")
    p.add_argument("--shift", action="store_true", help="subtract 0.75 first")
    p.set_defaults(func=cmd_gof)
    return parser


def _fail(args, code, kind, message, details=None):
    print(f"sskit: error: {message}", file=sys.stderr)
    if getattr(args, "json_errors", False):
        err = {"error": kind, "message": message, "exit_status": code}
        if details:
            err["details"] = details
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    json_errors = "--json-errors" in argv
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code not in (0, None) and json_errors:
            print(json.dumps({"error": "usage", "exit_status": 2}), file=sys.stderr)
        return int(exc.code or 0)
    try:
        written = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        return _fail(args, 2, "usage", str(exc))
    except ConfigError as exc:
        return _fail(args, 1, "config", str(exc),
                     [{"path": p, "message": m} for p, m in exc.errors])
    except (SskitError, ValueError, LookupError, OSError) as exc:
        return _fail(args, 1, type(exc).__name__, str(exc))
    for path in written:
        if path is not None:
            print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
