"""Command-line front end.

Subcommands: ``simulate``, ``bound``, ``calibrate``, ``sweep``, ``report``.
Exit codes: 0 success, 1 validation error, 2 runtime/numeric error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import sys

from . import calibration, experiments
from .errors import NumericError, ValidationError
from .robust_bounds import (
    UncertaintyParams,
    bound_robust1_single,
    bound_robust2_single,
    bound_robust3_two,
    kingman_bound,
    paoi_from_system_bound,
    worst_case_exact_single,
    worst_case_exact_two,
)
from .simulator import SystemParams, replicate
from .stochastic import spec_from_dict

_BOUND_METHODS = ("kingman", "robust1", "robust2", "robust3", "exact_single", "exact_two")

# Default calibration grids: per-source rates as fractions of mu, crossed
# with every pairing of the three sweep families.
_CAL_SINGLE_RHO = tuple(round(0.1 * i, 3) for i in range(1, 10))    # 0.1 .. 0.9
_CAL_TWO_RHO = tuple(round(0.05 * i, 3) for i in range(1, 10))      # 0.05 .. 0.45


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def _cmd_simulate(args: argparse.Namespace) -> int:
    doc = _load_json(args.config)
    try:
        params = SystemParams(
            lam=float(doc["lam"]),
            mu=float(doc["mu"]),
            n=int(doc.get("n", 100_000)),
            sources=int(doc.get("sources", 1)),
        )
        ia_spec = spec_from_dict(doc["interarrival"])
        svc_spec = spec_from_dict(doc["service"])
    except KeyError as exc:
        raise ValidationError(f"simulate config is missing field {exc}") from exc
    seed = args.seed if args.seed is not None else int(doc.get("master_seed", 0))
    summary = replicate(
        params,
        ia_spec,
        svc_spec,
        replications=int(doc.get("replications", 50)),
        warmup_fraction=float(doc.get("warmup_fraction", 0.1)),
        master_seed=seed,
    )
    src1, src2 = summary.per_source_paoi or ("", "")
    print("sources,lam,mu,n,replications,warmup_fraction,master_seed,"
          "mean_paoi,ci95_paoi,mean_system_time,paoi_source1,paoi_source2,stable")
    print(",".join([
        str(params.sources), _fmt(params.lam), _fmt(params.mu), str(params.n),
        str(summary.replications), _fmt(summary.warmup_fraction), str(seed),
        _fmt(summary.mean_paoi), _fmt(summary.ci95_paoi), _fmt(summary.mean_system_time),
        _fmt(src1) if src1 != "" else "", _fmt(src2) if src2 != "" else "",
        str(int(summary.stable)),
    ]))
    return 0


def _cmd_bound(args: argparse.Namespace) -> int:
    method = args.method.replace("-", "_")
    if method not in _BOUND_METHODS:
        raise ValidationError(f"unknown method {args.method!r}; expected one of {_BOUND_METHODS}")
    if method == "kingman":
        if args.var_a is None or args.var_s is None:
            raise ValidationError("kingman needs --var-a and --var-s")
        result = kingman_bound(args.lam, args.mu, args.var_a, args.var_s)
    else:
        unc = UncertaintyParams(args.alpha, args.gamma_a, args.gamma_s)
        sources = 2 if method in ("exact_two", "robust3") else 1
        sys_params = SystemParams(args.lam, args.mu, args.n, sources)
        fn = {
            "robust1": bound_robust1_single,
            "robust2": bound_robust2_single,
            "robust3": bound_robust3_two,
            "exact_single": worst_case_exact_single,
            "exact_two": worst_case_exact_two,
        }[method]
        result = fn(sys_params, unc)
    paoi = paoi_from_system_bound(result, args.lam)
    print("method,lambda,mu,alpha,gamma_a,gamma_s,n,system_bound,paoi_bound")
    print(",".join([
        method, _fmt(args.lam), _fmt(args.mu), _fmt(args.alpha),
        _fmt(args.gamma_a), _fmt(args.gamma_s), str(args.n),
        _fmt(result.value), _fmt(paoi),
    ]))
    return 0


def _default_calibration_grid(scenario: str, mu: float):
    rhos = _CAL_SINGLE_RHO if scenario == "single" else _CAL_TWO_RHO
    grid = []
    for fam_a, fam_s in itertools.product(experiments.FAMILIES, repeat=2):
        for rho in rhos:
            lam = rho * mu
            grid.append((
                lam,
                experiments.family_spec(fam_a, 1.0 / lam),
                experiments.family_spec(fam_s, 1.0 / mu),
            ))
    return grid


def _cmd_calibrate(args: argparse.Namespace) -> int:
    if args.grid is not None:
        doc = _load_json(args.grid)
        grid = calibration.grid_from_config(doc)
        mu = float(doc.get("mu", 1.0))
        n = int(doc.get("n", 20_000))
        replications = int(doc.get("replications", 10))
        warmup = float(doc.get("warmup_fraction", 0.1))
        master_seed = int(doc.get("master_seed", 0))
        provenance = {"grid_file": args.grid}
    else:
        mu, n, replications, warmup, master_seed = 1.0, 20_000, 10, 0.1, 0
        grid = _default_calibration_grid(args.scenario, mu)
        provenance = {"grid_file": "builtin-default"}
    dataset = calibration.build_calibration_dataset(
        grid, args.scenario, mu=mu, n=n, replications=replications,
        warmup_fraction=warmup, master_seed=master_seed,
    )
    if args.dataset_out:
        calibration.write_dataset_csv(dataset, args.dataset_out)
    theta = calibration.fit_theta(dataset)
    provenance.update({
        "rows": len(dataset), "n": n, "replications": replications,
        "warmup_fraction": warmup, "master_seed": master_seed, "mu": mu,
    })
    calibration.write_theta_json(theta, args.out, provenance)
    print(f"fitted theta=({_fmt(theta.theta0)}, {_fmt(theta.theta1)}, {_fmt(theta.theta2)}) "
          f"from {len(dataset)} rows -> {args.out}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = experiments.config_from_json(_load_json(args.config))
    report = experiments.run_sweep(config)
    if report.error_percents and all(
        math.isnan(v) for v in report.error_percents.values()
    ):
        raise NumericError("every grid point failed; no bound could be evaluated")
    experiments.report_csv(report, args.out)
    print(f"wrote {len(report.rows)} rows -> {args.out}")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    report = experiments.read_report_csv(getattr(args, "in"))
    print(experiments.report_summary_text(report))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paoiq",
        description="Peak age-of-information: FCFS simulation vs robust worst-case bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run replicated simulations from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the config master seed")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("bound", help="evaluate one bound; prints a CSV row")
    p.add_argument("--method", required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--gamma-a", type=float, default=0.0)
    p.add_argument("--gamma-s", type=float, default=0.0)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--var-a", type=float, default=None, help="interarrival variance (kingman)")
    p.add_argument("--var-s", type=float, default=None, help="service variance (kingman)")
    p.set_defaults(fn=_cmd_bound)

    p = sub.add_parser("calibrate", help="fit variability-mapping coefficients")
    p.add_argument("--scenario", required=True, choices=calibration.SCENARIOS)
    p.add_argument("--grid", default=None, help="grid config JSON (default: built-in grid)")
    p.add_argument("--out", required=True, help="output theta JSON path")
    p.add_argument("--dataset-out", default=None, help="also persist the dataset CSV here")
    p.set_defaults(fn=_cmd_calibrate)

    p = sub.add_parser("sweep", help="run a load sweep and write the comparison report")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("report", help="summarize a sweep report CSV")
    p.add_argument("--in", required=True)
    p.set_defaults(fn=_cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
