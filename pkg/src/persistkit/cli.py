"""Command line entry point: ``persistkit run | reproduce-paper | validate-config``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .config import CONFIG_SCHEMA, ConfigError, load_config
from .experiments import EXIT_CONFIG, EXIT_IDENTITY, EXIT_OK


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="persistkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment from a JSON config")
    run.add_argument("--config", required=True, type=Path)
    run.add_argument("--seed", type=_u64, help="override the config seed")
    run.add_argument("--workers", type=_positive, help="override the worker count")
    run.add_argument("--out", help="override the output directory")
    run.add_argument("--plot", action="store_true", help="write plot.svg")

    rep = sub.add_parser("reproduce-paper", help="run the acceptance suite with pinned seeds")
    rep.add_argument("--seed", type=_u64, default=None)
    rep.add_argument("--workers", type=_positive, default=1)
    rep.add_argument("--out", default="reproduce")
    rep.add_argument("--quick", action="store_true", help="small smoke-scale profile")
    rep.add_argument("--only", type=int, nargs="+", help="criterion numbers to run")

    val = sub.add_parser("validate-config", help="check a config against the schema")
    val.add_argument("--config", type=Path)
    val.add_argument("--print-schema", action="store_true")
    return parser


def _run(args) -> int:
    from .experiments import run_experiment, write_outputs

    try:
        cfg = load_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    overrides = {k: v for k, v in (("seed", args.seed), ("workers", args.workers),
                                   ("out", args.out)) if v is not None}
    if args.plot:
        overrides["plot"] = True
    cfg = replace(cfg, **overrides)
    try:
        result = run_experiment(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for path in write_outputs(cfg, result):
        print(path)
    if result.exit_code == EXIT_IDENTITY:
        print("identity check FAILED", file=sys.stderr)
    return result.exit_code


def _reproduce(args) -> int:
    from .acceptance import DEFAULT_SEED, FULL, QUICK, run_suite

    seed = DEFAULT_SEED if args.seed is None else args.seed
    results = run_suite(QUICK if args.quick else FULL, seed, args.workers, Path(args.out),
                        only=args.only)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed"
          + (f"; failed: {failed}" if failed else ""))
    return EXIT_IDENTITY if failed else EXIT_OK


def _validate(args) -> int:
    if args.print_schema:
        print(json.dumps(CONFIG_SCHEMA, indent=2))
        return EXIT_OK
    if args.config is None:
        print("config error: --config is required", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"valid {cfg.experiment} config")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": _run, "reproduce-paper": _reproduce, "validate-config": _validate}
    return handler[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
