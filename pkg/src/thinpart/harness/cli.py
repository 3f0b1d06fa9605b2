"""Command line front end: one subcommand per experiment.

Settings come from three layers, defaults < --config file < explicit
flags.  Every run writes report.json and samples.csv to the output
directory and prints one line per verdict.  Exit codes: 0 when every
verdict passed, 2 when some failed, 1 when the run could not start or
could not finish.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, ExperimentConfig, load_config
from .experiments import (
    run_constants,
    run_evanescence,
    run_expansion_probability,
    run_goodfn,
    run_grassmann,
    run_integrability,
    run_key_inequality,
    run_stationary_bound,
)
from .report import write_report

_RUNNERS = {
    "constants": (run_constants, ()),
    "expansion-prob": (run_expansion_probability, ()),
    "key-inequality": (run_key_inequality, ("p_hat", "delta_factor")),
    "stationary-bound": (run_stationary_bound, ("p_hat", "symmetrized")),
    "integrability": (run_integrability, ("p_hat", "exponent_factor")),
    "evanescence": (run_evanescence, ()),
    "goodfn": (run_goodfn, ()),
    "grassmann": (run_grassmann, ()),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thinpart",
        description="discreteness-radius experiments on conjugated lattices",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="experiment")
    for name, (runner, extras) in _RUNNERS.items():
        doc = (runner.__doc__ or "").strip().splitlines()[0].rstrip(".")
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", metavar="PATH", help="JSON configuration file")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--workers", type=int, help="override the worker count")
        p.add_argument(
            "--out", metavar="DIR", help=f"report directory (default runs/{name})"
        )
        if "p_hat" in extras:
            p.add_argument(
                "--p-hat", type=float, dest="p_hat", metavar="P",
                help="expansion probability from a previous run; estimated when absent",
            )
        if "delta_factor" in extras:
            p.add_argument(
                "--delta-factor", type=float, dest="delta_factor", default=1.0,
                metavar="F", help="scale the exponent away from its optimum",
            )
        if "exponent_factor" in extras:
            p.add_argument(
                "--exponent-factor", type=float, dest="exponent_factor", default=1.0,
                metavar="F", help="scale the moment exponent; no verdicts away from 1",
            )
        if "symmetrized" in extras:
            p.add_argument(
                "--symmetrized", action="store_true",
                help="mix the inverse expanding step in with probability 1/2",
            )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    runner, extras = _RUNNERS[args.command]
    try:
        cfg = load_config(args.config) if args.config else ExperimentConfig()
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.workers is not None:
            overrides["workers"] = args.workers
        if overrides:
            cfg = cfg.replace(**overrides)
        report = runner(cfg, **{name: getattr(args, name) for name in extras})
        out_dir = Path(args.out) if args.out else Path("runs") / args.command
        json_path, csv_path = write_report(report, out_dir)
    except (ConfigError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for v in report.verdicts:
        mark = "PASS" if v.passed else "FAIL"
        margin = "margin n/a" if v.margin is None else f"margin {v.margin:+.6g}"
        print(f"[{mark}] {v.check} ({margin})")
    if not report.verdicts:
        print("(diagnostic run, no verdicts)")
    print(f"report: {json_path}")
    print(f"samples: {csv_path}")
    return 0 if report.all_passed() else 2
