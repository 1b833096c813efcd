import csv

import pytest

from forest_baselines.compare import merge_series


def write_series(path, method, points):
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=["method", "fraction", "n_train", "error_rate"])
        writer.writeheader()
        for fraction, error in points:
            writer.writerow({
                "method": method, "fraction": fraction, "n_train": 10, "error_rate": error,
            })


@pytest.fixture
def series_files(tmp_path):
    baseline = tmp_path / "baselines.csv"
    with open(baseline, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=["method", "fraction", "n_train", "error_rate"])
        writer.writeheader()
        for method in ("svm", "lr", "dnn"):
            for fraction, error in ((0.5, 0.125), (1.0, 0.05)):
                writer.writerow({
                    "method": method, "fraction": fraction, "n_train": 8, "error_rate": error,
                })
    mdc = tmp_path / "mdc.csv"
    write_series(mdc, "mdc", [(0.5, 0.0), (1.0, 0.0)])
    sdc = tmp_path / "sdc.csv"
    write_series(sdc, "sdc", [(0.5, 0.025), (1.0, 0.0)])
    return [baseline, mdc, sdc]


def test_merged_file_contains_five_series(series_files, tmp_path):
    out = tmp_path / "merged.csv"
    merge_series(series_files, out)
    with open(out) as handle:
        rows = list(csv.DictReader(handle))
    assert {row["method"] for row in rows} == {"svm", "lr", "dnn", "mdc", "sdc"}
    assert len(rows) == 10


def test_rows_copied_verbatim(series_files, tmp_path):
    out = tmp_path / "merged.csv"
    merge_series(series_files, out)
    with open(out) as handle:
        merged = {(r["method"], r["fraction"]): r["error_rate"] for r in csv.DictReader(handle)}
    assert merged[("mdc", "0.5")] == "0.0"
    assert merged[("svm", "1.0")] == "0.05"


def test_plot_written(series_files, tmp_path):
    plot = tmp_path / "merged.png"
    merge_series(series_files, tmp_path / "merged.csv", plot_path=plot)
    assert plot.exists() and plot.stat().st_size > 0


def test_empty_input_rejected(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("method,fraction,n_train,error_rate\n")
    with pytest.raises(ValueError):
        merge_series([empty], tmp_path / "merged.csv")


def test_malformed_series_rejected(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        merge_series([bad], tmp_path / "merged.csv")
