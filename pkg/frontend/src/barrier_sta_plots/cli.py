"""Command-line figure generation from trajectory CSV files."""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .csvio import SchemaError
from .render import KINDS, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="barrier-sta-plot",
        description="Render figures from barrier-sta trajectory CSV files",
    )
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--csv", dest="csv_paths", action="append", required=True,
                        help="trajectory CSV (give twice for compare)")
    parser.add_argument("--eps", dest="eps_lines", action="append", type=float,
                        default=[], help="accuracy threshold to draw (repeatable)")
    parser.add_argument("--out", dest="out_path", required=True, help="image output path")
    parser.add_argument("--log", dest="log_scale", action="store_true",
                        help="plot |s| on a log axis")
    return parser


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = PlotSpec(
            csv_paths=tuple(args.csv_paths),
            kind=args.kind,
            out_path=args.out_path,
            eps_lines=tuple(args.eps_lines),
            log_scale=args.log_scale,
        )
        out = render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
