"""Command line interface: scenario runner and report emitter.

Usage
-----
    momentumlab list
    momentumlab run --scenario NAME [--config FILE] [--seed N] [--samples N]
                    [--tol NAME=VALUE ...] [--output PATH] [--format json|csv]

Configuration precedence: built-in defaults < config file < flags.  The
JSON report is canonical (sorted keys), so identical configurations yield
byte-identical reports apart from the ``timing_seconds`` field.  Exit
codes: 0 all checks passed, 1 at least one check failed, 2 usage error.

The environment variable MOMENTUMLAB_THREADS (integer >= 1) caps worker
parallelism; the computation engine is sequential, so any admissible cap
is honored as-is and echoed in the report.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .errors import InputError, MomentumLabError
from .scenarios import list_scenarios, run_scenario_checks

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _jsonify(obj):
    """Recursively convert numpy scalars/arrays so json.dumps succeeds."""
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def _read_threads_env() -> int:
    raw = os.environ.get("MOMENTUMLAB_THREADS")
    if raw is None:
        return 1
    try:
        threads = int(raw)
    except ValueError as exc:
        raise UsageError(f"MOMENTUMLAB_THREADS must be an integer, got {raw!r}") from exc
    if threads < 1:
        raise UsageError(f"MOMENTUMLAB_THREADS must be >= 1, got {threads}")
    return threads


def _parse_tol_overrides(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--tol expects NAME=VALUE, got {item!r}")
        name, _, value = item.partition("=")
        try:
            out[name.strip()] = float(value)
        except ValueError as exc:
            raise UsageError(f"--tol value for {name!r} is not a number: {value!r}") from exc
        if out[name.strip()] <= 0:
            raise UsageError(f"--tol {name} must be positive")
    return out


def build_config(args) -> dict:
    config: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        config.update(loaded)
    if args.scenario:
        config["scenario"] = args.scenario
    if args.seed is not None:
        config["seed"] = args.seed
    if args.samples is not None:
        config["n_samples"] = args.samples
    tols = dict(config.get("tol", {}))
    tols.update(_parse_tol_overrides(args.tol))
    if tols:
        config["tol"] = tols
    if "scenario" not in config:
        raise UsageError("no scenario given (use --scenario or a config file)")
    return config


def run_scenario(config: dict, *, threads: int = 1) -> tuple[dict, int]:
    """Execute one scenario and assemble the versioned report.

    Returns (report, exit_code); the report is deterministic for a fixed
    configuration except for ``timing_seconds``.
    """
    name = config["scenario"]
    t0 = time.perf_counter()
    partial = run_scenario_checks(name, config)
    elapsed = time.perf_counter() - t0
    checks = partial["checks"]
    all_passed = all(c["passed"] for c in checks)
    report = _jsonify({
        "schema_version": SCHEMA_VERSION,
        "scenario": name,
        "config": {k: v for k, v in sorted(config.items())},
        "environment": {"threads": threads},
        "checks": checks,
        "results": partial.get("results", {}),
        "table": partial.get("table", []),
        "all_passed": all_passed,
        "timing_seconds": elapsed,
    })
    return report, (EXIT_OK if all_passed else EXIT_CHECK_FAILED)


def report_to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def report_to_csv(report: dict) -> str:
    rows = report.get("table", [])
    if not rows:
        return "\n"
    columns = list(rows[0].keys())
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join("" if row.get(c) is None else repr(row.get(c))
                              if isinstance(row.get(c), float) else str(row.get(c))
                              for c in columns))
    return "\n".join(lines) + "\n"


def _emit(report: dict, fmt: str, output: str | None):
    text = report_to_json(report) if fmt == "json" else report_to_csv(report)
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="momentumlab",
        description="scenario runner for momentum-set experiments")
    sub = parser.add_subparsers(dest="command")
    sub.add_parser("list", help="list available scenarios")
    runp = sub.add_parser("run", help="run a scenario and emit a report")
    runp.add_argument("--scenario", help="catalog label")
    runp.add_argument("--config", help="JSON config file")
    runp.add_argument("--seed", type=int, default=None)
    runp.add_argument("--samples", type=int, default=None,
                      help="number of projective/point samples")
    runp.add_argument("--tol", action="append", metavar="NAME=VALUE",
                      help="tolerance override (repeatable)")
    runp.add_argument("--output", help="report path (default: stdout)")
    runp.add_argument("--format", choices=("json", "csv"), default="json")

    args = parser.parse_args(argv)
    if args.command == "list":
        for name, desc in list_scenarios():
            print(f"{name}: {desc}")
        return EXIT_OK
    if args.command != "run":
        parser.print_help()
        return EXIT_USAGE

    try:
        threads = _read_threads_env()
        config = build_config(args)
        report, code = run_scenario(config, threads=threads)
    except (UsageError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MomentumLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED

    _emit(report, args.format, args.output)
    if code != EXIT_OK:
        failing = [c["name"] for c in report["checks"] if not c["passed"]]
        print(f"FAILED checks: {', '.join(failing)}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
