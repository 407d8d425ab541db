"""Command line entry point: `figures <fig-id> --in sweep.csv --out fig.png`."""

from __future__ import annotations

import argparse
import sys

from .core import DataError, FIGURE_IDS, FigureRecipe, load_rows, pivot_text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render figures from dickesim sweep CSV files.",
    )
    parser.add_argument("figure_id", choices=FIGURE_IDS)
    parser.add_argument(
        "--in",
        dest="inputs",
        action="append",
        required=True,
        metavar="CSV",
        help="input sweep CSV (repeatable)",
    )
    parser.add_argument("--out", help="output image path (or pivot path with --data-only)")
    parser.add_argument(
        "--data-only",
        action="store_true",
        help="emit the plotting pivot table instead of an image",
    )
    parser.add_argument("--dpi", type=int, default=150)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    recipe = FigureRecipe(
        figure_id=args.figure_id,
        inputs=tuple(args.inputs),
        output=args.out,
        data_only=args.data_only,
        dpi=args.dpi,
    )
    try:
        if recipe.data_only:
            text = pivot_text(recipe, load_rows(recipe))
            if recipe.output:
                with open(recipe.output, "w", newline="\n") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
        else:
            if recipe.output is None:
                print("error: --out is required to render an image", file=sys.stderr)
                return 1
            from .render import render

            render(recipe)
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
