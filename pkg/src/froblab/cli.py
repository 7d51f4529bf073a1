"""Command line: ``lab run <config> [--out DIR] [--threads N] [--precision M]``.

Exit codes: 0 success, 1 other lab error, 2 theorem violation detected,
3 resource limit.
"""

from __future__ import annotations

import argparse
import sys

from .config import load_config
from .errors import LabError, ResourceLimit
from .experiments import run_experiment

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2
EXIT_RESOURCE = 3


def build_parser():
    parser = argparse.ArgumentParser(prog="lab", description="Frobenius-lift dynamics experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one experiment config")
    run.add_argument("config", help="path to the experiment config")
    run.add_argument("--out", default=None, help="output directory (default: config output.path or .)")
    run.add_argument("--threads", type=int, default=1, help="worker threads for enumeration")
    run.add_argument("--precision", type=int, default=None, help="override the field precision")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_ERROR
    try:
        cfg = load_config(args.config, precision=args.precision)
        result = run_experiment(cfg, threads=args.threads)
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (LabError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    out = args.out or cfg.output or "."
    tsv, js = result.write(out, cfg.name)
    print(f"{cfg.kind}: status={result.status} -> {tsv}, {js}")
    for k, v in result.summary.items():
        print(f"  {k} = {v}")
    if result.violation:
        print(f"theorem violation: {result.violation}", file=sys.stderr)
        return EXIT_VIOLATION
    if result.status != "ok":
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
