"""Statistical forest / non-forest detection for RGB Earth-observation tiles.

Two classifiers share one training pipeline: a non-parametric
Mahalanobis-distance test on colour means and covariances (`mdc`) and a
parametric test on empirical characteristic functions of per-channel
alpha-stable colour models (`sdc`).
"""
from .kernels import backend_name
from .mdc import MdcModel, SampleStats, pooled_covariance, sample_stats, t_statistic
from .raster import (
    FOREST,
    NON_FOREST,
    LabeledDataset,
    PixelMatrix,
    RgbImage,
    RgbTile,
    load_image,
    load_manifest,
    normalize_band,
    tile_image,
    to_pixel_matrix,
)
from .sdc import SdcModel, SdcReference, aggregate_channels, channel_statistic, two_sample_statistic
from .stable import (
    EcfPoint,
    FitReport,
    StableParams,
    ecf,
    estimate_koutrouvelis,
    fit_report,
    mcculloch_initial,
    sample_stable,
    sigma_z,
    stable_cf,
    stable_pdf,
    z0,
)
from .trainer import CvConfig, cross_validate_mdc, cross_validate_sdc, kfold_split, threshold_search

__version__ = "0.1.0"

__all__ = [
    "FOREST",
    "NON_FOREST",
    "CvConfig",
    "EcfPoint",
    "FitReport",
    "LabeledDataset",
    "MdcModel",
    "PixelMatrix",
    "RgbImage",
    "RgbTile",
    "SampleStats",
    "SdcModel",
    "SdcReference",
    "StableParams",
    "aggregate_channels",
    "backend_name",
    "channel_statistic",
    "cross_validate_mdc",
    "cross_validate_sdc",
    "ecf",
    "estimate_koutrouvelis",
    "fit_report",
    "kfold_split",
    "load_image",
    "load_manifest",
    "mcculloch_initial",
    "normalize_band",
    "pooled_covariance",
    "sample_stable",
    "sample_stats",
    "sigma_z",
    "stable_cf",
    "stable_pdf",
    "t_statistic",
    "threshold_search",
    "tile_image",
    "to_pixel_matrix",
    "two_sample_statistic",
    "z0",
]
