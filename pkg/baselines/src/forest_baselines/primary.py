"""Detector error-rate series via its command line.

The detector is driven strictly through subprocess calls and file formats;
error rates are copied verbatim from its eval summaries, never recomputed.
"""
from __future__ import annotations

import csv
import json
import subprocess
import sys
from pathlib import Path

import numpy as np

from .data import balanced_subset, write_manifest
from .grid import DEFAULT_FRACTIONS

DEFAULT_CLI = (sys.executable, "-m", "forestdetect.cli")


def _run(cli, *args):
    result = subprocess.run(
        [*cli, *map(str, args)], capture_output=True, text=True
    )
    if result.returncode != 0:
        raise RuntimeError(
            f"detector command {' '.join(map(str, args))} failed "
            f"({result.returncode}): {result.stderr.strip()}"
        )
    return result


def run_primary_series(
    method: str,
    train_entries: list[dict],
    test_manifest,
    workdir,
    fractions=DEFAULT_FRACTIONS,
    seed: int = 0,
    grid_steps: int | None = None,
    cli=DEFAULT_CLI,
) -> list[dict]:
    """Train/eval the detector at every training fraction.

    Returns rows of {method, fraction, n_train, error_rate} and writes them
    as ``<method>_series.csv`` in ``workdir``. The subsets use the same
    seeding scheme as the baseline grid so both sides see identical data.
    """
    if method not in ("mdc", "sdc"):
        raise ValueError(f"detector method must be mdc or sdc, got {method!r}")
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)

    rows = []
    for fraction in fractions:
        subset = balanced_subset(
            train_entries, fraction, np.random.default_rng((seed, int(fraction * 1000)))
        )
        tag = f"{method}_{int(fraction * 100):03d}"
        manifest = write_manifest(subset, workdir / f"train_{tag}.json")
        model = workdir / f"model_{tag}.json"
        summary = workdir / f"summary_{tag}.json"
        train_args = ["train", "--manifest", manifest, "--method", method,
                      "--out", model, "--seed", seed]
        if grid_steps is not None:
            train_args += ["--grid-steps", grid_steps]
        _run(cli, *train_args)
        _run(cli, "eval", "--manifest", test_manifest, "--model", model,
             "--summary", summary)
        payload = json.loads(summary.read_text())
        rows.append({
            "method": method,
            "fraction": fraction,
            "n_train": len(subset),
            "error_rate": payload["error_rate"],
        })

    out = workdir / f"{method}_series.csv"
    with open(out, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=["method", "fraction", "n_train", "error_rate"])
        writer.writeheader()
        writer.writerows(rows)
    return rows
