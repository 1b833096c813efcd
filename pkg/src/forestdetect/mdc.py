"""Non-parametric Mahalanobis-distance classifier (MDC).

A tile is summarised by its pixel count, mean colour vector and colour
covariance matrix.  Two summaries are compared with the rescaled squared
Mahalanobis distance T = (n1 n2 / (n1 + n2)) d' S^-1 d, where S is the pooled
covariance; under equal means and covariances T is asymptotically
chi-square with as many degrees of freedom as there are channels.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError, DegenerateStatisticsError
from .raster import FOREST, NON_FOREST, PixelMatrix

DEFAULT_RIDGE = 1e-9

_SYM_TOL = 1e-12
_EIG_TOL = -1e-12


@dataclass(frozen=True, eq=False)
class SampleStats:
    """Pixel count, mean vector and covariance matrix of one image."""

    n: int
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        if self.n < 2:
            raise DataError(f"need at least 2 pixels, got {self.n}")
        p = self.mean.shape[0]
        if self.cov.shape != (p, p):
            raise DataError(f"covariance shape {self.cov.shape} does not match mean length {p}")
        if np.abs(self.cov - self.cov.T).max() > _SYM_TOL:
            raise DataError("covariance matrix is not symmetric")
        if np.linalg.eigvalsh(self.cov).min() < _EIG_TOL:
            raise DataError("covariance matrix has a negative eigenvalue")

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


def sample_stats(matrix: PixelMatrix | np.ndarray) -> SampleStats:
    """Mean vector and covariance (divisor n) of a pixel matrix.

    The maximum-likelihood divisor n is used so that the pooled formula
    (n1 S1 + n2 S2) / (n1 + n2 - 2) reduces to the unbiased pooled estimator.
    """
    data = matrix.data if isinstance(matrix, PixelMatrix) else np.asarray(matrix, dtype=np.float64)
    n = data.shape[0]
    if n < 2:
        raise DataError(f"need at least 2 pixels to form sample statistics, got {n}")
    mean = data.mean(axis=0)
    centered = data - mean
    cov = centered.T @ centered / n
    cov = (cov + cov.T) / 2.0
    return SampleStats(n=n, mean=mean, cov=cov)


def pooled_covariance(s1: SampleStats, s2: SampleStats) -> np.ndarray:
    """(n1 S1 + n2 S2) / (n1 + n2 - 2)."""
    if s1.n + s2.n <= 2:
        raise DataError("pooled covariance needs n1 + n2 > 2")
    return (s1.n * s1.cov + s2.n * s2.cov) / (s1.n + s2.n - 2)


def t_statistic(s1: SampleStats, s2: SampleStats, ridge: float = DEFAULT_RIDGE) -> float:
    """Rescaled squared Mahalanobis distance between two sample summaries.

    Raises DegenerateStatisticsError when the pooled covariance stays
    singular after adding ``ridge`` to its diagonal; callers treat that as
    an infinite distance.
    """
    if s1.dim != s2.dim:
        raise DataError(f"dimension mismatch: {s1.dim} vs {s2.dim}")
    pooled = pooled_covariance(s1, s2) + ridge * np.eye(s1.dim)
    diff = s1.mean - s2.mean
    try:
        solved = np.linalg.solve(pooled, diff)
    except np.linalg.LinAlgError as exc:
        raise DegenerateStatisticsError("pooled covariance is singular") from exc
    if not np.all(np.isfinite(solved)):
        raise DegenerateStatisticsError("pooled covariance is numerically singular")
    t = (s1.n * s2.n / (s1.n + s2.n)) * float(diff @ solved)
    return max(t, 0.0)


@dataclass
class MdcModel:
    """Forest reference summaries plus a trained decision threshold."""

    references: list[SampleStats]
    reference_ids: list[str]
    threshold: float
    ridge: float = DEFAULT_RIDGE

    def __post_init__(self):
        if not self.references:
            raise DataError("model needs at least one forest reference")
        if len(self.reference_ids) != len(self.references):
            raise DataError("reference_ids must match references one-to-one")
        if self.threshold < 0:
            raise DataError(f"threshold must be non-negative, got {self.threshold}")

    def to_json(self) -> str:
        payload = {
            "threshold": self.threshold,
            "ridge": self.ridge,
            "references": [
                {
                    "id": ref_id,
                    "n": ref.n,
                    "mean": ref.mean.tolist(),
                    "cov": ref.cov.tolist(),
                }
                for ref_id, ref in zip(self.reference_ids, self.references)
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "MdcModel":
        payload = json.loads(text)
        references, ids = [], []
        for entry in payload["references"]:
            references.append(
                SampleStats(
                    n=int(entry["n"]),
                    mean=np.asarray(entry["mean"], dtype=np.float64),
                    cov=np.asarray(entry["cov"], dtype=np.float64),
                )
            )
            ids.append(str(entry["id"]))
        return cls(
            references=references,
            reference_ids=ids,
            threshold=float(payload["threshold"]),
            ridge=float(payload.get("ridge", DEFAULT_RIDGE)),
        )

    def save(self, path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path) -> "MdcModel":
        return cls.from_json(Path(path).read_text())


def min_statistic(test: SampleStats, model: MdcModel) -> float:
    """Smallest T against any reference; inf when every pair is degenerate."""
    best = math.inf
    for ref in model.references:
        try:
            t = t_statistic(test, ref, ridge=model.ridge)
        except DegenerateStatisticsError:
            continue
        best = min(best, t)
    return best


def classify(test: SampleStats, model: MdcModel) -> tuple[str, float]:
    """Label a tile summary: forest iff min-over-references T < threshold.

    The boundary T == threshold is classified non-forest.
    """
    t_min = min_statistic(test, model)
    label = FOREST if t_min < model.threshold else NON_FOREST
    return label, t_min
