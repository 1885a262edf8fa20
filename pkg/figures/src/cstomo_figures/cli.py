"""Plotting entry point.

Usage:
  cstomo-plot plot --spec figure.json
  cstomo-plot plot --preset fig2b --in <run-dir> --out fig2b.png

Exit codes: 0 success, 2 spec/input error, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import sys

from cstomo_figures.plot import FigureSpec, PlotError, preset_spec, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cstomo-plot", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("plot", help="render a figure from aggregate CSVs")
    p.add_argument("--spec", help="figure spec JSON path")
    p.add_argument("--preset", help="preset name (expects aggregate.csv under --in)")
    p.add_argument("--in", dest="input_dir", help="run directory containing aggregate.csv")
    p.add_argument("--out", help="output image path (.png or .svg)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.spec:
            spec = FigureSpec.from_json_file(args.spec)
        elif args.preset:
            if not args.input_dir or not args.out:
                raise PlotError("--preset requires --in and --out")
            spec = preset_spec(args.preset, args.input_dir, args.out)
        else:
            raise PlotError("provide either --spec or --preset")
        out = render(spec)
        print(f"wrote {out}")
        return 0
    except PlotError as exc:
        print(f"plot error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
