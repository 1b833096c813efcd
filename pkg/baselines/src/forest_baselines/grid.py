"""Error-rate-vs-training-size experiment grid for the reference classifiers.

Three classifiers on raw pixel features: an RBF-kernel support vector
machine, logistic regression, and a fully connected network with hidden
layers 350/200/100/50 and ReLU activations. The test set is fixed across
fractions; training subsets are always class-balanced.
"""
from __future__ import annotations

import csv
import json
import warnings
from pathlib import Path

import numpy as np
from sklearn.linear_model import LogisticRegression
from sklearn.neural_network import MLPClassifier
from sklearn.svm import SVC

from .data import balanced_subset, load_features

DNN_LAYERS = (350, 200, 100, 50)
DEFAULT_FRACTIONS = tuple(round(0.1 * k, 1) for k in range(1, 11))
_DNN_MAX_ITER = 400


def make_classifier(method: str, seed: int):
    if method == "svm":
        return SVC(kernel="rbf", random_state=seed)
    if method == "lr":
        return LogisticRegression(max_iter=2000, random_state=seed)
    if method == "dnn":
        return MLPClassifier(
            hidden_layer_sizes=DNN_LAYERS,
            activation="relu",
            max_iter=_DNN_MAX_ITER,
            random_state=seed,
        )
    raise ValueError(f"unknown baseline method {method!r}")


def run_grid(
    train_entries: list[dict],
    test_entries: list[dict],
    out_dir,
    fractions=DEFAULT_FRACTIONS,
    methods=("svm", "lr", "dnn"),
    seed: int = 0,
    divisor: float = 2000.0,
    plot: bool = True,
) -> list[dict]:
    """Train every (method, fraction) cell and write the error-rate table.

    Writes error_rates.csv, report.json and (optionally) curves.png into
    ``out_dir``; returns the result rows.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    x_test, y_test = load_features(test_entries, divisor)
    results = []
    for fraction in fractions:
        # one subset per fraction, shared by all methods; the rng is
        # re-seeded so the grid is reproducible cell-by-cell
        subset = balanced_subset(
            train_entries, fraction, np.random.default_rng((seed, int(fraction * 1000)))
        )
        x_train, y_train = load_features(subset, divisor)
        for method in methods:
            clf = make_classifier(method, seed)
            with warnings.catch_warnings():
                # small training sets stop the network early; that is part
                # of the protocol, not a defect worth spamming the log for
                warnings.simplefilter("ignore")
                clf.fit(x_train, y_train)
            error = float(np.mean(clf.predict(x_test) != y_test))
            results.append({
                "method": method,
                "fraction": fraction,
                "n_train": len(subset),
                "error_rate": error,
            })

    _write_table(out_dir / "error_rates.csv", results)
    report = {
        "seed": seed,
        "fractions": list(fractions),
        "methods": list(methods),
        "n_train_pool": len(train_entries),
        "n_test": len(test_entries),
        "feature_space": "raw pixel RGB values",
        "dnn": {
            "hidden_layers": list(DNN_LAYERS),
            "activation": "relu",
            "solver": "adam",
            "max_iter": _DNN_MAX_ITER,
        },
    }
    (out_dir / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True))
    if plot:
        plot_series(
            {m: [(r["fraction"], r["error_rate"]) for r in results if r["method"] == m]
             for m in methods},
            out_dir / "curves.png",
        )
    return results


def _write_table(path: Path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=["method", "fraction", "n_train", "error_rate"])
        writer.writeheader()
        writer.writerows(rows)


def plot_series(series: dict, path) -> None:
    """Error-rate curves, one line per method."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name, points in series.items():
        points = sorted(points)
        ax.plot([p[0] for p in points], [p[1] for p in points], marker="o", label=name)
    ax.set_xlabel("training set fraction")
    ax.set_ylabel("error rate")
    ax.set_ylim(bottom=0)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
