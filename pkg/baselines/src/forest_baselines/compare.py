"""Merge baseline and detector error-rate series into one comparison table."""
from __future__ import annotations

import csv
from pathlib import Path

from .grid import plot_series


def _read_series(path) -> list[dict]:
    with open(path) as handle:
        rows = list(csv.DictReader(handle))
    for row in rows:
        if "method" not in row or "fraction" not in row or "error_rate" not in row:
            raise ValueError(f"{path}: rows need method, fraction and error_rate columns")
    return rows


def merge_series(series_paths, out_csv, plot_path=None) -> list[dict]:
    """Concatenate error-rate tables verbatim and optionally plot the curves.

    Every input row is copied as-is; no error rate is recomputed here.
    """
    merged = []
    for path in series_paths:
        merged.extend(_read_series(path))
    if not merged:
        raise ValueError("no series rows to merge")

    out_csv = Path(out_csv)
    out_csv.parent.mkdir(parents=True, exist_ok=True)
    with open(out_csv, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=["method", "fraction", "n_train", "error_rate"])
        writer.writeheader()
        for row in merged:
            writer.writerow({
                "method": row["method"],
                "fraction": row["fraction"],
                "n_train": row.get("n_train", ""),
                "error_rate": row["error_rate"],
            })

    if plot_path is not None:
        methods = sorted({row["method"] for row in merged})
        plot_series(
            {
                m: [
                    (float(r["fraction"]), float(r["error_rate"]))
                    for r in merged
                    if r["method"] == m
                ]
                for m in methods
            },
            plot_path,
        )
    return merged
