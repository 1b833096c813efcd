"""Dataset ingestion from detector-format manifests.

A manifest is a JSON list of {path, label[, id]} entries; each path points at
a directory with red/green/blue 16-bit grayscale band files. Feature vectors
are the raw pixel RGB values, no dimensionality reduction.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from PIL import Image

FOREST = "forest"
NON_FOREST = "non-forest"
DEFAULT_DIVISOR = 2000.0

_BAND_NAMES = ("red", "green", "blue")


def load_manifest_entries(manifest_path) -> list[dict]:
    """Read manifest entries, resolving relative paths against the manifest dir."""
    manifest_path = Path(manifest_path)
    entries = json.loads(manifest_path.read_text())
    if not isinstance(entries, list):
        raise ValueError(f"{manifest_path}: manifest must be a JSON list")
    resolved = []
    for entry in entries:
        path = Path(entry["path"])
        if not path.is_absolute():
            path = manifest_path.parent / path
        resolved.append({
            "path": str(path),
            "label": entry["label"],
            "id": str(entry.get("id", entry["path"])),
        })
    return resolved


def write_manifest(entries: list[dict], out_path) -> Path:
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(json.dumps(entries, indent=2, sort_keys=True))
    return out_path


def split_entries(entries: list[dict], test_fraction: float, seed: int):
    """Deterministic stratified train/test split of manifest entries."""
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test fraction must be in (0, 1), got {test_fraction}")
    rng = np.random.default_rng(seed)
    train, test = [], []
    for label in (FOREST, NON_FOREST):
        group = [e for e in entries if e["label"] == label]
        order = rng.permutation(len(group))
        n_test = max(1, int(round(len(group) * test_fraction)))
        for rank, index in enumerate(order):
            (test if rank < n_test else train).append(group[index])
    return train, test


def balanced_subset(entries: list[dict], fraction: float, rng) -> list[dict]:
    """Equal numbers of forest and non-forest entries at the given fraction."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"training fraction must be in (0, 1], got {fraction}")
    forest = [e for e in entries if e["label"] == FOREST]
    other = [e for e in entries if e["label"] == NON_FOREST]
    per_class = max(1, int(round(min(len(forest), len(other)) * fraction)))
    picked = []
    for group in (forest, other):
        order = rng.permutation(len(group))[:per_class]
        picked.extend(group[i] for i in order)
    return picked


def _read_band(path: Path) -> np.ndarray:
    with Image.open(path) as img:
        return np.asarray(img, dtype=np.float64)


def load_features(entries: list[dict], divisor: float = DEFAULT_DIVISOR):
    """Stack every entry's raw pixel RGB values into a feature matrix.

    Returns (X, y) with y = 1 for forest.
    """
    rows, labels = [], []
    for entry in entries:
        directory = Path(entry["path"])
        bands = []
        for name in _BAND_NAMES:
            matches = sorted(directory.glob(f"{name}.*"))
            if not matches:
                raise FileNotFoundError(f"{directory}: missing {name} band file")
            bands.append(np.minimum(_read_band(matches[0]) / divisor, 1.0).ravel())
        rows.append(np.concatenate(bands))
        labels.append(1 if entry["label"] == FOREST else 0)
    if len({row.size for row in rows}) > 1:
        raise ValueError("tiles have inconsistent sizes; cannot stack features")
    return np.asarray(rows), np.asarray(labels)
