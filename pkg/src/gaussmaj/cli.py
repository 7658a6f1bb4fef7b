"""Command-line front end: ``gaussmaj <experiment> --config <path> [...]``.

Exit codes: 0 when every summary passes, 1 when a scientific check fails,
2 on a configuration or numerical-validity error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .errors import ConfigError
from .experiments import EXPERIMENTS, ExperimentConfig, run_experiment

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaussmaj", description="Batch experiments on phase-insensitive Gaussian channels.")
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", help="JSON configuration file (defaults are used when omitted)")
    parser.add_argument("--out", help="report path; '-' or omitted writes to stdout")
    parser.add_argument("--csv", help="optional per-case CSV extract")
    parser.add_argument("--seed", type=int, help="override the configured seed")
    parser.add_argument("--cutoff", type=int, help="override the configured Fock cutoff")
    parser.add_argument("--jobs", type=int, help="number of concurrent cases")
    parser.add_argument("--no-timestamp", action="store_true", help="leave generated_at empty")
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    if args.config:
        config = ExperimentConfig.load(args.config)
        with open(args.config, encoding="utf-8") as fh:
            explicit = "experiment" in fh.read()
        if explicit and config.experiment != args.experiment:
            raise ConfigError(
                f"configuration is for {config.experiment!r} but {args.experiment!r} was requested"
            )
    else:
        config = ExperimentConfig()
    overrides = {"experiment": args.experiment}
    for name in ("seed", "cutoff", "jobs", "csv"):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    if args.out is not None:
        overrides["output"] = args.out
    return dataclasses.replace(config, **overrides)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
        report = run_experiment(config, timestamp=not args.no_timestamp)
    except ConfigError as exc:
        print(f"gaussmaj: configuration error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    _write(config.output, report.to_json())
    if config.csv:
        _write(config.csv, report.to_csv())
    s = report.summary
    print(
        f"gaussmaj {config.experiment}: {s['status']} "
        f"({s['passed']} passed, {s['failed']} failed, {s['errors']} errors, worst slack {s['worst_slack']})",
        file=sys.stderr,
    )
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
