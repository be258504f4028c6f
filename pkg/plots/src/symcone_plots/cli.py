"""Batch figure rendering: ``plot <kind> --in DIR --out DIR``.

Kinds: regret (trajectory CSVs + bound overlay), levelcurve (entropy and
divergence contours), svm2d (2-D classifier figures, one per game JSON).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .render import (
    FigureSpec,
    RenderError,
    discover_inputs,
    render_levelcurves,
    render_regret,
    render_svm2d,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render symcone experiment outputs into figures."
    )
    parser.add_argument("kind", choices=["regret", "levelcurve", "svm2d"])
    parser.add_argument("--in", dest="in_dir", required=True, help="harness output directory")
    parser.add_argument("--out", dest="out_dir", required=True, help="directory for images")
    parser.add_argument("--title", default="", help="optional figure title")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        inputs = discover_inputs(args.kind, args.in_dir)
        if not inputs:
            raise RenderError(f"no {args.kind} inputs found in {args.in_dir}")
        written: list[str] = []
        if args.kind == "regret":
            spec = FigureSpec("regret", inputs, os.path.join(args.out_dir, "regret"), args.title)
            written += render_regret(spec)
        elif args.kind == "levelcurve":
            spec = FigureSpec(
                "levelcurve", inputs, os.path.join(args.out_dir, "level_curves"), args.title
            )
            written += render_levelcurves(spec)
        else:
            flat = [p for p in inputs if json.load(open(p)).get("d") == 2]
            if not flat:
                raise RenderError(f"no 2-D game JSONs in {args.in_dir}")
            for path in flat:
                stem = os.path.splitext(os.path.basename(path))[0]
                spec = FigureSpec(
                    "svm2d", (path,), os.path.join(args.out_dir, stem), args.title
                )
                written += render_svm2d(spec)
        print(f"wrote {len(written)} images to {args.out_dir}")
        return 0
    except (RenderError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
