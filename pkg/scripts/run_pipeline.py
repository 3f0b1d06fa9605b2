#!/usr/bin/env python3
"""Run the full experiment chain with one shared configuration.

The expansion probability measured in the second stage feeds every later
stage, exactly as if the separate CLI calls had passed --p-hat along by
hand.  Reports land under --out, one subdirectory per stage.
"""

import argparse
import sys
from pathlib import Path

from thinpart.harness import (
    ConfigError,
    ExperimentConfig,
    load_config,
    run_constants,
    run_evanescence,
    run_expansion_probability,
    run_integrability,
    run_key_inequality,
    run_stationary_bound,
    write_report,
)


def _run_stage(name: str, cfg: ExperimentConfig, p_hat):
    if name == "constants":
        return run_constants(cfg)
    if name == "expansion-prob":
        return run_expansion_probability(cfg)
    if name == "key-inequality":
        return run_key_inequality(cfg, p_hat=p_hat)
    if name == "stationary-bound":
        return run_stationary_bound(cfg, p_hat=p_hat)
    if name == "integrability":
        return run_integrability(cfg, p_hat=p_hat)
    if name == "evanescence":
        return run_evanescence(cfg)
    raise ValueError(name)


STAGES = (
    "constants",
    "expansion-prob",
    "key-inequality",
    "stationary-bound",
    "integrability",
    "evanescence",
)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    ap.add_argument("--config", metavar="PATH", help="JSON configuration file")
    ap.add_argument("--seed", type=int, help="override the config seed")
    ap.add_argument("--workers", type=int, help="override the worker count")
    ap.add_argument("--out", default="runs/pipeline", metavar="DIR")
    args = ap.parse_args(argv)

    try:
        cfg = load_config(args.config) if args.config else ExperimentConfig()
        if args.seed is not None:
            cfg = cfg.replace(seed=args.seed)
        if args.workers is not None:
            cfg = cfg.replace(workers=args.workers)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    failures = 0
    p_hat = None
    for name in STAGES:
        try:
            report = _run_stage(name, cfg, p_hat)
            write_report(report, Path(args.out) / name)
        except (ConfigError, RuntimeError) as exc:
            print(f"{name}: error: {exc}", file=sys.stderr)
            return 1
        for v in report.verdicts:
            mark = "PASS" if v.passed else "FAIL"
            margin = "n/a" if v.margin is None else f"{v.margin:+.6g}"
            print(f"{name}: [{mark}] {v.check} (margin {margin})")
        if not report.all_passed():
            failures += 1
        if name == "expansion-prob":
            p_hat = report.summary["p_hat"]
            print(f"{name}: measured p_hat = {p_hat:.4f} feeds the later stages")
    return 2 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
