"""Command-line entry point.

Subcommands
-----------
reproduce     repeated-sampling experiment(s); default: the Maxwell study
              at n = 200 and n = 2000 with all three bandwidth rules
bandwidths    bandwidth selectors and their audit constants for one config
converge      MISE decay-rate study across a ladder of sample sizes
verify-lemmas Monte Carlo check of the leading bias/variance predictions

Common flags: --config (JSON file), --seed (override), --out (output
directory; overrides the GAMMAKDE_OUT environment variable, which in turn
overrides the config's output_dir), --jobs (worker processes).

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 partial results (some bandwidth rules failed; everything else written).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from . import asymptotics, harness, numerics
from .harness import (
    BandwidthSelectionError,
    ConfigError,
    ConvergenceConfig,
    ExperimentConfig,
    MomentCheckConfig,
)
from .ioutil import write_json
from .refdens import reference_for

__all__ = ["main"]

_OUT_ENV = "GAMMAKDE_OUT"
_DEFAULT_OUT = "gammakde_out"
_DEFAULT_SEED = 20260815

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_PARTIAL = 4


def _load_config_dict(path: str | None) -> dict | None:
    if path is None:
        return None
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ConfigError(f"config file {path} must contain a JSON object")
    return obj


def _resolve_out(args, cfg_output_dir: str | None) -> Path:
    if args.out is not None:
        return Path(args.out)
    env = os.environ.get(_OUT_ENV)
    if env:
        return Path(env)
    if cfg_output_dir:
        return Path(cfg_output_dir)
    return Path(_DEFAULT_OUT)


def _default_experiment(n: int, seed: int) -> ExperimentConfig:
    return ExperimentConfig.from_dict(
        {
            "distribution": {"name": "maxwell", "sigma": 1.0},
            "n": n,
            "seed": seed,
            "replications": 200,
        }
    )


def _print_experiment_summary(report: harness.ExperimentReport) -> None:
    cfg = report.config
    print(f"[{cfg.distribution.label} n={cfg.n} replications={cfg.replications}]")
    for label, b in report.bandwidths.items():
        stats = report.summary[label]
        print(
            f"  {label:<12} b={b:.6f}  mean ISE={stats['mean']:.6f}  "
            f"median ISE={stats['median']:.6f}"
        )
    for label, message in report.bandwidth_errors.items():
        print(f"  {label:<12} FAILED: {message}")
    for note in report.notes:
        print(f"  note: {note}")


def _cmd_reproduce(args) -> int:
    cfg_dict = _load_config_dict(args.config)
    partial = False
    if cfg_dict is None:
        base_out = _resolve_out(args, None)
        seed = args.seed if args.seed is not None else _DEFAULT_SEED
        for n in (200, 2000):
            cfg = _default_experiment(n, seed)
            partial |= _run_one_experiment(cfg, base_out / f"n{n}", args.jobs)
    else:
        cfg = ExperimentConfig.from_dict(cfg_dict)
        if args.seed is not None:
            cfg = dataclasses.replace(cfg, seed=args.seed)
        partial |= _run_one_experiment(
            cfg, _resolve_out(args, cfg.output_dir), args.jobs
        )
    return EXIT_PARTIAL if partial else EXIT_OK


def _run_one_experiment(cfg: ExperimentConfig, out: Path, jobs: int) -> bool:
    """Run one experiment into `out`; returns True when partial."""
    try:
        report = harness.run_experiment(cfg, jobs=jobs, output_dir=out)
    except BandwidthSelectionError as exc:
        _print_experiment_summary(exc.report)
        print(f"partial results written to {out}: {exc}", file=sys.stderr)
        return True
    _print_experiment_summary(report)
    print(f"report written to {out}")
    return False


def _cmd_bandwidths(args) -> int:
    cfg_dict = _load_config_dict(args.config)
    if cfg_dict is None:
        cfg_dict = {"distribution": {"name": "maxwell", "sigma": 1.0}, "n": 2000}
    unknown = set(cfg_dict) - {"distribution", "n", "output_dir"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    try:
        dist = harness._distribution_from_dict(cfg_dict["distribution"])
        n = int(cfg_dict["n"])
    except KeyError as exc:
        raise ConfigError(f"missing config key: {exc}") from exc
    report = asymptotics.bandwidth_report(reference_for(dist), n)
    out = _resolve_out(args, cfg_dict.get("output_dir"))
    out.mkdir(parents=True, exist_ok=True)
    write_json(harness.bandwidth_report_dict(report), out / "bandwidths.json")
    print(
        f"[{dist.label} n={n}] plugin={report.b_plugin:.6f} "
        f"refined={report.b_refined:.6f} chen={report.b_chen:.6f}"
    )
    print(f"report written to {out / 'bandwidths.json'}")
    return EXIT_OK


def _cmd_converge(args) -> int:
    cfg_dict = _load_config_dict(args.config)
    if cfg_dict is None:
        cfg_dict = {
            "distribution": {"name": "maxwell", "sigma": 1.0},
            "n_list": [500, 1000, 2000, 4000, 8000],
            "seed": _DEFAULT_SEED,
            "replications": 200,
        }
    cfg = ConvergenceConfig.from_dict(cfg_dict)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    result = harness.convergence_study(cfg, jobs=args.jobs)
    out = _resolve_out(args, cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_json(harness.convergence_result_dict(cfg, result), out / "convergence.json")
    print(f"[{cfg.distribution.label}] fitted log-log MISE slope: {result.slope:.4f}")
    for n, mise in result.points:
        print(f"  n={n:<7} mean ISE={mise:.6f}")
    print(f"report written to {out / 'convergence.json'}")
    return EXIT_OK


def _cmd_verify_lemmas(args) -> int:
    cfg_dict = _load_config_dict(args.config)
    if cfg_dict is None:
        cfg_dict = {
            "distribution": {"name": "maxwell", "sigma": 1.0},
            "x_list": [0.5, 1.0, 2.0],
            "b": 0.05,
            "n": 100_000,
            "seed": _DEFAULT_SEED,
            "replications": 200,
        }
    cfg = MomentCheckConfig.from_dict(cfg_dict)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    report = harness.asymptotic_moment_check(cfg, jobs=args.jobs)
    out = _resolve_out(args, None)
    out.mkdir(parents=True, exist_ok=True)
    write_json(harness.moment_check_dict(report), out / "moment_check.json")
    print(f"[{cfg.distribution.label} n={cfg.n} b={cfg.b} replications={cfg.replications}]")
    for row in report.rows:
        print(
            f"  x={row.x:<6g} bias z-score={row.bias_z:+.3f}  "
            f"variance ratio={row.variance_ratio:.3f}"
        )
    for note in report.notes:
        print(f"  note: {note}")
    print(f"report written to {out / 'moment_check.json'}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gammakde",
        description="Gamma-kernel density-derivative estimation experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, blurb in (
        ("reproduce", _cmd_reproduce, "run the repeated-sampling experiment(s)"),
        ("bandwidths", _cmd_bandwidths, "compute bandwidth selectors for one config"),
        ("converge", _cmd_converge, "fit the MISE decay rate over sample sizes"),
        ("verify-lemmas", _cmd_verify_lemmas, "check leading bias/variance terms"),
    ):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--config", metavar="PATH", help="JSON config file")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--out", metavar="DIR", help="output directory")
        p.add_argument("--jobs", type=int, default=1, help="worker processes")
        p.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (numerics.IntegrationError, numerics.NoRootError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
