"""Command-line entry point.

Usage: perclap <task> --config <file> [--out <dir>] [--threads <n>]
                [--emit-graph]

Exit codes: 0 success, 2 invalid configuration, 3 numeric failure.
"""

import argparse
import dataclasses
import sys

from .config import TASKS, parse_config
from .exceptions import ConfigurationError, PerclapError
from .runner import run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perclap",
        description="Bond-percolation graph Laplacians: spectra, IDS, tails.",
    )
    parser.add_argument("task", choices=TASKS)
    parser.add_argument("--config", required=True, help="JSON config file")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--emit-graph", action="store_true",
                        help="dump each sampled realization as JSON")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config)
        if args.threads is not None:
            cfg = dataclasses.replace(cfg, threads=args.threads)
        if args.emit_graph:
            cfg = dataclasses.replace(cfg, emit_graph=True)
        from .config import validate

        problems = validate(cfg)
        if problems:
            raise ConfigurationError("; ".join(problems))
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    out_dir = args.out if args.out is not None else "perclap-out"
    try:
        run(cfg, out_dir, task=args.task)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except PerclapError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
