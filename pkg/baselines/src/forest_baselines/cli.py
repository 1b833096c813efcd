"""Command line for the baseline harness.

Subcommands:
  run-grid   train SVM / LR / DNN over training fractions, emit error table
  primary    drive the detector CLI over the same fractions
  compare    merge series CSVs into one table + curve plot
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .compare import merge_series
from .data import load_manifest_entries, split_entries, write_manifest
from .grid import DEFAULT_FRACTIONS, run_grid
from .primary import run_primary_series


def _fractions(text: str):
    values = tuple(float(v) for v in text.split(","))
    if not values or any(not 0.0 < v <= 1.0 for v in values):
        raise argparse.ArgumentTypeError("fractions must be in (0, 1], comma-separated")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="forest-baselines")
    sub = parser.add_subparsers(dest="command", required=True)

    grid = sub.add_parser("run-grid", help="baseline error rates vs training size")
    grid.add_argument("--manifest", required=True)
    grid.add_argument("--out", required=True)
    grid.add_argument("--test-fraction", type=float, default=0.5)
    grid.add_argument("--fractions", type=_fractions, default=DEFAULT_FRACTIONS)
    grid.add_argument("--seed", type=int, default=0)
    grid.add_argument("--no-plot", action="store_true")

    primary = sub.add_parser("primary", help="detector error-rate series via its CLI")
    primary.add_argument("--manifest", required=True)
    primary.add_argument("--out", required=True)
    primary.add_argument("--method", choices=["mdc", "sdc"], required=True)
    primary.add_argument("--test-fraction", type=float, default=0.5)
    primary.add_argument("--fractions", type=_fractions, default=DEFAULT_FRACTIONS)
    primary.add_argument("--seed", type=int, default=0)
    primary.add_argument("--grid-steps", type=int, default=None,
                         help="threshold grid resolution forwarded to the detector")

    compare = sub.add_parser("compare", help="merge error-rate series")
    compare.add_argument("series", nargs="+")
    compare.add_argument("--out", required=True)
    compare.add_argument("--plot", default=None)

    return parser


def _split(manifest, test_fraction, seed, out_dir):
    entries = load_manifest_entries(manifest)
    train, test = split_entries(entries, test_fraction, seed)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    test_manifest = write_manifest(test, out_dir / "test_manifest.json")
    return train, test, test_manifest


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run-grid":
        train, test, _ = _split(args.manifest, args.test_fraction, args.seed, args.out)
        results = run_grid(
            train, test, args.out,
            fractions=args.fractions, seed=args.seed, plot=not args.no_plot,
        )
        for row in results:
            print(f"{row['method']:>4} fraction={row['fraction']:.1f} "
                  f"n={row['n_train']} error={row['error_rate']:.4f}")
    elif args.command == "primary":
        train, _, test_manifest = _split(args.manifest, args.test_fraction, args.seed, args.out)
        rows = run_primary_series(
            args.method, train, test_manifest, args.out,
            fractions=args.fractions, seed=args.seed, grid_steps=args.grid_steps,
        )
        for row in rows:
            print(f"{row['method']:>4} fraction={row['fraction']:.1f} "
                  f"n={row['n_train']} error={row['error_rate']:.4f}")
    elif args.command == "compare":
        merged = merge_series(args.series, args.out, plot_path=args.plot)
        methods = sorted({row["method"] for row in merged})
        print(f"merged {len(merged)} rows across methods: {', '.join(methods)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
