"""Reference classifiers and comparison harness for forest tile datasets.

This package never imports the detector library; it talks to it exclusively
through its command line and its file formats (dataset manifests, model JSON,
evaluation CSV/JSON).
"""
from .data import load_features, load_manifest_entries, split_entries, write_manifest
from .grid import DNN_LAYERS, run_grid
from .compare import merge_series

__version__ = "0.1.0"

__all__ = [
    "DNN_LAYERS",
    "load_features",
    "load_manifest_entries",
    "merge_series",
    "run_grid",
    "split_entries",
    "write_manifest",
]
