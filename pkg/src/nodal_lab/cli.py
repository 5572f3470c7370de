"""Command line entry point ``nodal-lab``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on a
validation error (bad flags or config).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings

from . import __version__
from .constants import ENV_VAR
from .harness import COMMANDS, DEFAULTS, ConfigError, load_config_file, merge_config, report, run, write_report

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


def parse_value(text: str):
    """A TOML literal (``3``, ``[1, 2]``, ``"x1^2"``, ``true``); bare words stay strings."""
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def parse_assignments(items) -> dict:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError([f"--set expects key=value, got {item!r}"])
        out[key.strip()] = parse_value(value.strip())
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nodal-lab",
        description="Nodal sets of eigenfunction sums and doubling estimates for polyharmonic subsolutions.",
        epilog=f"The calibration constants file can be overridden with ${ENV_VAR}.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="TOML config; its values win over flags")
        p.add_argument("--out", help="output root directory (default: runs)")
        p.add_argument("--threads", type=int, help="worker threads")
        p.add_argument("--seed", type=int, help="seed (unsigned 64-bit)")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="experiment parameter; known keys: " + ", ".join(DEFAULTS[name]))
    p = sub.add_parser("report", help="summarise the run records under a directory")
    p.add_argument("directory", nargs="?", default="runs")
    p.add_argument("--config", help="TOML config with an 'out' key naming the directory")
    p.add_argument("--out", help="where to write summary.md and summary.json (default: the directory)")
    p.add_argument("--threads", type=int, help="ignored")
    p.add_argument("--seed", type=int, help="ignored")
    return ap


def _report(args) -> int:
    directory = args.directory
    if args.config:
        file = load_config_file(args.config)
        if "out" in file and file["out"] != directory:
            warnings.warn(f"config file overrides the report directory: {directory!r} -> {file['out']!r}", stacklevel=2)
            directory = file["out"]
    rep = report(directory)
    for w in rep.warnings:
        logging.warning(w)
    paths = write_report(rep, args.out or directory) if rep.rows or rep.problems or args.out else []
    sys.stdout.write(rep.markdown())
    for path in paths:
        print(f"wrote {path}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    logging.captureWarnings(True)
    try:
        if args.command == "report":
            return _report(args)
        cli = {"params": parse_assignments(args.set), "out": args.out, "threads": args.threads, "seed": args.seed}
        file = load_config_file(args.config) if args.config else None
        cfg = merge_config(args.command, cli, file)
        record = run(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, tomllib.TOMLDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_INVALID
    for c in record.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.check}  [{c.anchor}]")
    if record.error:
        print(f"FAIL  run aborted: {record.error}")
    print(json.dumps({"directory": record.directory, "config_hash": record.config_hash, "passed": record.passed}))
    return EXIT_OK if record.passed else EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
