"""Raster ingestion: band normalization, tiling and pixel-matrix extraction.

Images are handled as three co-registered unit-interval intensity matrices
(red, green, blue).  Classification never looks at spatial layout: a tile is
flattened into an (n x 3) matrix whose rows are per-pixel colour triplets.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import DataError

FOREST = "forest"
NON_FOREST = "non-forest"
LABELS = (FOREST, NON_FOREST)

#: Default digital-number divisor for 16-bit sensor bands.
DEFAULT_DIVISOR = 2000.0

_BAND_NAMES = ("red", "green", "blue")


def normalize_band(raw, divisor: float = DEFAULT_DIVISOR) -> np.ndarray:
    """Scale raw digital numbers into [0, 1], clamping values above 1.

    Raises DataError on negative inputs.
    """
    raw = np.asarray(raw)
    if raw.size and raw.min() < 0:
        bad = raw.min()
        raise DataError(f"band contains negative digital number {bad}")
    if divisor <= 0:
        raise DataError(f"divisor must be positive, got {divisor}")
    return np.minimum(raw.astype(np.float64) / divisor, 1.0)


@dataclass(frozen=True, eq=False)
class RgbImage:
    """Full-scene unit-interval intensities, one matrix per channel."""

    red: np.ndarray
    green: np.ndarray
    blue: np.ndarray

    def __post_init__(self):
        shapes = {self.red.shape, self.green.shape, self.blue.shape}
        if len(shapes) != 1:
            raise DataError(f"channel shapes differ: {shapes}")
        for name in _BAND_NAMES:
            band = getattr(self, name)
            if band.ndim != 2:
                raise DataError(f"{name} band must be 2-D, got shape {band.shape}")
            if band.size and (band.min() < 0.0 or band.max() > 1.0):
                raise DataError(f"{name} band has values outside [0, 1]")

    @property
    def shape(self) -> tuple[int, int]:
        return self.red.shape

    def channels(self):
        return self.red, self.green, self.blue


@dataclass(frozen=True, eq=False)
class RgbTile:
    """A square crop of an RgbImage together with its pixel offset."""

    red: np.ndarray
    green: np.ndarray
    blue: np.ndarray
    origin: tuple[int, int] = (0, 0)

    def __post_init__(self):
        p, q = self.red.shape
        if p != q or p < 2:
            raise DataError(f"tile must be square with side >= 2, got {self.red.shape}")
        if self.green.shape != (p, p) or self.blue.shape != (p, p):
            raise DataError("tile channels must share the same square shape")

    @property
    def size(self) -> int:
        return self.red.shape[0]


@dataclass(frozen=True, eq=False)
class PixelMatrix:
    """(n x 3) matrix of per-pixel (r, g, b) triplets, spatial layout erased."""

    data: np.ndarray

    def __post_init__(self):
        if self.data.ndim != 2 or self.data.shape[1] != 3:
            raise DataError(f"pixel matrix must be (n x 3), got {self.data.shape}")
        if self.data.size and (self.data.min() < 0.0 or self.data.max() > 1.0):
            raise DataError("pixel intensities outside [0, 1]")

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def channel(self, index: int) -> np.ndarray:
        return self.data[:, index]


def tile_image(image: RgbImage, tile_size: int) -> list[RgbTile]:
    """Split an image into non-overlapping square tiles in row-major order.

    Trailing strips that do not fill a whole tile are dropped, never padded.
    """
    h, w = image.shape
    p = int(tile_size)
    if p < 2:
        raise DataError(f"tile size must be >= 2, got {tile_size}")
    if p > h or p > w:
        raise DataError(f"tile size {p} exceeds image dimensions {h}x{w}")
    tiles = []
    for i in range(h // p):
        for j in range(w // p):
            r0, c0 = i * p, j * p
            tiles.append(
                RgbTile(
                    red=image.red[r0 : r0 + p, c0 : c0 + p],
                    green=image.green[r0 : r0 + p, c0 : c0 + p],
                    blue=image.blue[r0 : r0 + p, c0 : c0 + p],
                    origin=(r0, c0),
                )
            )
    return tiles


def to_pixel_matrix(tile) -> PixelMatrix:
    """Column-major stack each channel and bind the three vectors as columns.

    Accepts an RgbTile or a whole RgbImage; row k of the result is the
    (r, g, b) triplet of a single pixel.
    """
    columns = [np.asarray(band, dtype=np.float64).flatten(order="F") for band in (tile.red, tile.green, tile.blue)]
    return PixelMatrix(np.stack(columns, axis=1))


# ---------------------------------------------------------------------------
# file I/O
# ---------------------------------------------------------------------------

_SUPPORTED_SUFFIXES = {".png", ".pgm", ".tif", ".tiff"}


def _read_gray(path: Path) -> np.ndarray:
    with Image.open(path) as img:
        arr = np.asarray(img)
    if arr.ndim != 2:
        raise DataError(f"{path}: expected a single-band grayscale image")
    return arr


def load_image(path, divisor: float = DEFAULT_DIVISOR) -> RgbImage:
    """Load an image as unit-interval RGB intensities.

    Supported inputs, chosen by path type / extension:
      * a directory holding ``red.*``, ``green.*`` and ``blue.*`` band files
        (16-bit grayscale PNG/PGM/TIFF); values are divided by ``divisor``
        and clamped to 1.0;
      * a packed 8-bit RGB PNG/TIFF; values are divided by 255.
    """
    path = Path(path)
    if path.is_dir():
        bands = {}
        for name in _BAND_NAMES:
            matches = sorted(
                f for f in path.glob(f"{name}.*") if f.suffix.lower() in _SUPPORTED_SUFFIXES
            )
            if not matches:
                raise DataError(f"{path}: missing {name} band file")
            bands[name] = normalize_band(_read_gray(matches[0]), divisor)
        return RgbImage(**bands)
    if not path.exists():
        raise DataError(f"{path}: no such image")
    if path.suffix.lower() not in _SUPPORTED_SUFFIXES:
        raise DataError(f"{path}: unsupported image format {path.suffix!r}")
    with Image.open(path) as img:
        if img.mode in ("RGB", "RGBA"):
            arr = np.asarray(img.convert("RGB"))
            return RgbImage(
                red=arr[:, :, 0] / 255.0,
                green=arr[:, :, 1] / 255.0,
                blue=arr[:, :, 2] / 255.0,
            )
        arr = np.asarray(img)
    if arr.ndim == 2:
        raise DataError(
            f"{path}: single grayscale band; pass a directory with red/green/blue band files"
        )
    raise DataError(f"{path}: unsupported image layout (mode {img.mode!r})")


def save_bands(directory, image: RgbImage, divisor: float = DEFAULT_DIVISOR) -> None:
    """Write an RgbImage as three 16-bit grayscale PNG band files."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name in _BAND_NAMES:
        band = getattr(image, name)
        digital = np.round(band * divisor).astype(np.uint16)
        Image.fromarray(digital).save(directory / f"{name}.png")


# ---------------------------------------------------------------------------
# labeled datasets
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DatasetItem:
    matrix: PixelMatrix
    label: str
    identifier: str


@dataclass
class LabeledDataset:
    """Training images flattened to pixel matrices, with forest/non-forest tags."""

    items: list[DatasetItem] = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for item in self.items:
            if item.label not in LABELS:
                raise DataError(f"unknown label {item.label!r} for {item.identifier!r}")
            if item.identifier in seen:
                raise DataError(f"duplicate identifier {item.identifier!r}")
            seen.add(item.identifier)

    def __len__(self) -> int:
        return len(self.items)

    def labels(self) -> set[str]:
        return {item.label for item in self.items}

    def require_both_labels(self) -> None:
        missing = set(LABELS) - self.labels()
        if missing:
            raise DataError(f"dataset is missing label(s): {sorted(missing)}")


def load_manifest(manifest_path, divisor: float = DEFAULT_DIVISOR) -> LabeledDataset:
    """Read a JSON manifest of {path, label[, id]} entries into a dataset.

    Relative paths resolve against the manifest's own directory.
    """
    manifest_path = Path(manifest_path)
    try:
        entries = json.loads(manifest_path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read manifest {manifest_path}: {exc}") from exc
    if not isinstance(entries, list):
        raise DataError(f"{manifest_path}: manifest must be a JSON list")
    items = []
    for entry in entries:
        if not isinstance(entry, dict) or "path" not in entry or "label" not in entry:
            raise DataError(f"{manifest_path}: each entry needs 'path' and 'label'")
        image_path = Path(entry["path"])
        if not image_path.is_absolute():
            image_path = manifest_path.parent / image_path
        image = load_image(image_path, divisor=divisor)
        items.append(
            DatasetItem(
                matrix=to_pixel_matrix(image),
                label=entry["label"],
                identifier=str(entry.get("id", entry["path"])),
            )
        )
    return LabeledDataset(items)
