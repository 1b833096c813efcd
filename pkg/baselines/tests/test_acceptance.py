"""End-to-end comparison gate.

Drives the detector exclusively through its command line: simulates the
synthetic tile dataset, trains both detector models over the training
fractions, runs all three baselines on the same splits, and checks the merged
five-series table. Prints one PASS/FAIL line:

    pytest tests/test_acceptance.py -v -s
"""
import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from forest_baselines.compare import merge_series
from forest_baselines.data import load_manifest_entries, split_entries, write_manifest
from forest_baselines.grid import run_grid
from forest_baselines.primary import run_primary_series

PARAMS = {
    "forest": {
        "red": {"alpha": 1.8, "beta": 0.0, "sigma": 0.02, "delta": 0.20},
        "green": {"alpha": 1.8, "beta": 0.0, "sigma": 0.02, "delta": 0.25},
        "blue": {"alpha": 1.8, "beta": 0.0, "sigma": 0.02, "delta": 0.18},
    },
    "non-forest": {
        "red": {"alpha": 1.6, "beta": 0.0, "sigma": 0.03, "delta": 0.50},
        "green": {"alpha": 1.6, "beta": 0.0, "sigma": 0.03, "delta": 0.55},
        "blue": {"alpha": 1.6, "beta": 0.0, "sigma": 0.03, "delta": 0.48},
    },
}
FRACTIONS = (0.2, 0.4, 0.6, 0.8, 1.0)


def detector(*args):
    result = subprocess.run(
        [sys.executable, "-m", "forestdetect.cli", *map(str, args)],
        capture_output=True, text=True,
    )
    assert result.returncode == 0, result.stderr
    return result


def test_full_comparison_harness(tmp_path):
    params_path = tmp_path / "params.json"
    params_path.write_text(json.dumps(PARAMS))
    data = tmp_path / "data"
    detector("simulate", "--params", params_path, "--mode", "dataset", "--out", data,
             "--seed", "0", "--n-per-class", "200", "--tile-size", "10")

    entries = load_manifest_entries(data / "manifest.json")
    train, test = split_entries(entries, 0.5, seed=0)
    test_manifest = write_manifest(test, tmp_path / "test_manifest.json")

    out = tmp_path / "results"
    baseline_rows = run_grid(train, test, out, fractions=FRACTIONS, seed=0)
    # a coarse threshold grid keeps the trained cutoff from hugging the
    # largest cross-validation score, which would reject borderline fresh
    # tiles of the reference class
    mdc_rows = run_primary_series("mdc", train, test_manifest, out,
                                  fractions=FRACTIONS, seed=0, grid_steps=50)
    sdc_rows = run_primary_series("sdc", train, test_manifest, out,
                                  fractions=FRACTIONS, seed=0, grid_steps=50)

    merged_path = out / "merged.csv"
    merge_series(
        [out / "error_rates.csv", out / "mdc_series.csv", out / "sdc_series.csv"],
        merged_path, plot_path=out / "merged.png",
    )
    with open(merged_path) as handle:
        merged = list(csv.DictReader(handle))
    methods = {row["method"] for row in merged}

    report = json.loads((out / "report.json").read_text())
    dnn_ok = (report["dnn"]["hidden_layers"] == [350, 200, 100, 50]
              and report["dnn"]["activation"] == "relu")

    full_baseline = {
        r["method"]: r["error_rate"] for r in baseline_rows if r["fraction"] == 1.0
    }
    mdc_full = next(r["error_rate"] for r in mdc_rows if r["fraction"] == 1.0)
    sdc_full = next(r["error_rate"] for r in sdc_rows if r["fraction"] == 1.0)
    beats = all(
        mdc_full <= err and sdc_full <= err for err in full_baseline.values()
    )

    ok = (methods == {"svm", "lr", "dnn", "mdc", "sdc"} and dnn_ok and beats
          and (out / "merged.png").exists())
    detail = (
        f"series={sorted(methods)}, dnn config echoed={dnn_ok}, "
        f"full-size errors: mdc={mdc_full:.3f} sdc={sdc_full:.3f} vs "
        + ", ".join(f"{m}={e:.3f}" for m, e in sorted(full_baseline.items()))
    )
    print(f"\n[{'PASS' if ok else 'FAIL'}] baseline comparison harness: {detail}")
    assert ok, detail
