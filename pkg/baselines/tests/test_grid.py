import csv
import json

from forest_baselines.data import load_manifest_entries, split_entries
from forest_baselines.grid import DNN_LAYERS, run_grid


def test_separable_dataset_all_methods_accurate(tiny_dataset, tmp_path):
    entries = load_manifest_entries(tiny_dataset)
    train, test = split_entries(entries, 0.5, seed=0)
    results = run_grid(train, test, tmp_path / "out", fractions=(0.5, 1.0), seed=0, plot=False)

    assert len(results) == 6  # 2 fractions x 3 methods
    full = {r["method"]: r["error_rate"] for r in results if r["fraction"] == 1.0}
    assert set(full) == {"svm", "lr", "dnn"}
    assert all(err < 0.05 for err in full.values())


def test_outputs_written(tiny_dataset, tmp_path):
    entries = load_manifest_entries(tiny_dataset)
    train, test = split_entries(entries, 0.5, seed=0)
    out = tmp_path / "out"
    run_grid(train, test, out, fractions=(1.0,), seed=0)

    with open(out / "error_rates.csv") as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 3
    assert {"method", "fraction", "n_train", "error_rate"} <= set(rows[0])

    report = json.loads((out / "report.json").read_text())
    assert report["dnn"]["hidden_layers"] == list(DNN_LAYERS) == [350, 200, 100, 50]
    assert report["dnn"]["activation"] == "relu"
    assert report["feature_space"] == "raw pixel RGB values"
    assert (out / "curves.png").exists()


def test_same_seed_identical_table(tiny_dataset, tmp_path):
    entries = load_manifest_entries(tiny_dataset)
    train, test = split_entries(entries, 0.5, seed=0)
    a, b = tmp_path / "a", tmp_path / "b"
    run_grid(train, test, a, fractions=(1.0,), seed=3, plot=False)
    run_grid(train, test, b, fractions=(1.0,), seed=3, plot=False)
    assert (a / "error_rates.csv").read_bytes() == (b / "error_rates.csv").read_bytes()


def test_training_sets_balanced_at_every_fraction(tiny_dataset, tmp_path):
    entries = load_manifest_entries(tiny_dataset)
    train, test = split_entries(entries, 0.5, seed=0)
    results = run_grid(
        train, test, tmp_path / "out", fractions=(0.25, 0.5, 1.0), seed=0, plot=False
    )
    for row in results:
        assert row["n_train"] % 2 == 0
