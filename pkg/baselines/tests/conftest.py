import json
from pathlib import Path

import numpy as np
import pytest
from PIL import Image


def write_tile(directory: Path, rng, level: float, spread: float = 40.0, size: int = 8):
    """One tile as three 16-bit band files around a digital-number level."""
    directory.mkdir(parents=True, exist_ok=True)
    for name in ("red", "green", "blue"):
        values = np.clip(rng.normal(level, spread, (size, size)), 0, 4000)
        Image.fromarray(values.astype(np.uint16)).save(directory / f"{name}.png")


@pytest.fixture
def tiny_dataset(tmp_path):
    """Separable two-class band-directory dataset plus manifest."""
    rng = np.random.default_rng(0)
    entries = []
    for i in range(24):
        name = f"forest_{i:03d}"
        write_tile(tmp_path / name, rng, level=400.0)
        entries.append({"path": name, "label": "forest", "id": name})
    for i in range(24):
        name = f"other_{i:03d}"
        write_tile(tmp_path / name, rng, level=1000.0)
        entries.append({"path": name, "label": "non-forest", "id": name})
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps(entries))
    return manifest
