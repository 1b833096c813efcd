"""Synthetic image and dataset generation from per-channel stable laws.

Used by the `simulate` CLI command and throughout the verification suite.
Draws are clamped to [0, 1] on purpose: real sensor intensities go through
the same clamp during normalization.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import DataError
from .raster import FOREST, LABELS, NON_FOREST, RgbImage, RgbTile, save_bands
from .stable import StableParams, sample_stable

CHANNELS = ("red", "green", "blue")
LAYOUTS = ("vsplit", "hsplit")

#: per-label, per-channel stable laws
RegionParams = dict


def load_region_params(path) -> RegionParams:
    """Read {label: {channel: {alpha, beta, sigma, delta}}} from JSON."""
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read parameter file {path}: {exc}") from exc
    regions = {}
    for label, channels in payload.items():
        if label not in LABELS:
            raise DataError(f"unknown region label {label!r}; use {LABELS}")
        try:
            regions[label] = {name: StableParams.from_dict(channels[name]) for name in CHANNELS}
        except KeyError as exc:
            raise DataError(f"region {label!r} is missing channel {exc}") from exc
    missing = set(LABELS) - regions.keys()
    if missing:
        raise DataError(f"parameter file is missing region(s): {sorted(missing)}")
    return regions


def sample_channel(params: StableParams, shape: tuple[int, int], rng) -> np.ndarray:
    draws = sample_stable(params, int(np.prod(shape)), rng=rng)
    return np.clip(draws, 0.0, 1.0).reshape(shape)


def simulate_tile(channel_params: dict, size: int, rng) -> RgbTile:
    bands = {name: sample_channel(channel_params[name], (size, size), rng) for name in CHANNELS}
    return RgbTile(**bands)


def simulate_image(
    regions: RegionParams, height: int, width: int, layout: str, rng
) -> tuple[RgbImage, np.ndarray]:
    """Two-region image plus a boolean mask of the forest region.

    ``vsplit`` puts forest in the left half, ``hsplit`` in the top half.
    """
    if layout not in LAYOUTS:
        raise DataError(f"layout must be one of {LAYOUTS}, got {layout!r}")
    forest_mask = np.zeros((height, width), dtype=bool)
    if layout == "vsplit":
        forest_mask[:, : width // 2] = True
    else:
        forest_mask[: height // 2, :] = True

    bands = {}
    for name in CHANNELS:
        forest_band = sample_channel(regions[FOREST][name], (height, width), rng)
        other_band = sample_channel(regions[NON_FOREST][name], (height, width), rng)
        bands[name] = np.where(forest_mask, forest_band, other_band)
    return RgbImage(**bands), forest_mask


def tile_truth(forest_mask: np.ndarray, tile_size: int) -> list[tuple[int, int, str]]:
    """Ground-truth label per tile: forest iff every pixel is in the forest region."""
    h, w = forest_mask.shape
    p = tile_size
    rows = []
    for i in range(h // p):
        for j in range(w // p):
            block = forest_mask[i * p : (i + 1) * p, j * p : (j + 1) * p]
            rows.append((i, j, FOREST if block.all() else NON_FOREST))
    return rows


def write_dataset(
    out_dir,
    regions: RegionParams,
    n_per_class: int,
    tile_size: int,
    seed: int,
    divisor: float = 2000.0,
) -> Path:
    """Write per-class tile images as band directories plus a manifest.

    Returns the manifest path.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    entries = []
    for label in (FOREST, NON_FOREST):
        slug = label.replace("-", "")
        for index in range(n_per_class):
            tile = simulate_tile(regions[label], tile_size, rng)
            name = f"{slug}_{index:04d}"
            save_bands(out_dir / name, RgbImage(tile.red, tile.green, tile.blue), divisor)
            entries.append({"path": name, "label": label, "id": name})
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(entries, indent=2, sort_keys=True))
    return manifest_path
