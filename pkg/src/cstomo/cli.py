"""Command-line entry point.

Subcommands:
  run           execute a JSON experiment config, write CSVs + run metadata
  preset        run a named built-in experiment (optionally overriding runs,
                the m grid, or worker count for quick desk runs)
  aggregate     aggregate a results.csv into per-grid-point statistics
  list-presets  show available preset names

Exit codes: 0 success, 2 configuration error, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from cstomo.harness import (
    PRESET_NAMES,
    ConfigError,
    aggregate,
    preset,
    read_config,
    read_results_csv,
    run_to_directory,
    write_aggregate_csv,
    write_config,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cstomo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a JSON config")
    p_run.add_argument("--config", required=True, help="path to experiment config JSON")
    p_run.add_argument("--out", required=True, help="output directory")

    p_preset = sub.add_parser("preset", help="run a built-in preset experiment")
    p_preset.add_argument("--name", required=True, help="preset name (see list-presets)")
    p_preset.add_argument("--out", required=True, help="output directory")
    p_preset.add_argument("--runs", type=int, default=None, help="override repetition count")
    p_preset.add_argument(
        "--m-grid", type=int, nargs="+", default=None, help="override the measurement-count grid"
    )
    p_preset.add_argument(
        "--parallelism", type=int, default=None, help="override worker count"
    )

    p_agg = sub.add_parser("aggregate", help="aggregate a results CSV")
    p_agg.add_argument("--in", dest="input", required=True, help="results.csv path")
    p_agg.add_argument("--out", required=True, help="aggregate.csv path")

    sub.add_parser("list-presets", help="list preset names")
    return parser


def _cmd_run(args) -> int:
    config = read_config(args.config)
    results_path, aggregate_path, meta_path = run_to_directory(config, args.out)
    print(f"wrote {results_path}, {aggregate_path}, {meta_path}")
    return 0


def _cmd_preset(args) -> int:
    config = preset(args.name)
    overrides = {}
    if args.runs is not None:
        overrides["runs"] = args.runs
    if args.m_grid is not None:
        overrides["m_grid"] = tuple(args.m_grid)
    if args.parallelism is not None:
        overrides["parallelism"] = args.parallelism
    if overrides:
        config = replace(config, **overrides)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_config(config, out / "config.json")
    results_path, aggregate_path, meta_path = run_to_directory(config, out)
    print(f"wrote {results_path}, {aggregate_path}, {meta_path}")
    return 0


def _cmd_aggregate(args) -> int:
    rows = read_results_csv(args.input)
    write_aggregate_csv(aggregate(rows), args.out)
    print(f"wrote {args.out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "preset":
            return _cmd_preset(args)
        if args.command == "aggregate":
            return _cmd_aggregate(args)
        print("\n".join(PRESET_NAMES))
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
