"""k-fold cross-validated threshold training for both classifiers.

Images are shuffled whole into folds; every holdout image is scored by the
smallest statistic against the forest images of the remaining folds; the
decision threshold is the smallest grid point maximizing accuracy over the
pooled fold scores.  The returned model carries references built from the
full dataset.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels, mdc, sdc
from .chisquare import chi2_quantile
from .errors import DataError, DegenerateStatisticsError, EstimationError
from .mdc import DEFAULT_RIDGE, MdcModel, SampleStats
from .raster import FOREST, LabeledDataset
from .sdc import DEFAULT_CF_ARGUMENT, SdcModel, SdcReference


@dataclass(frozen=True)
class CvConfig:
    """Cross-validation settings; t_max defaults per method when None."""

    k: int = 5
    t_max: float | None = None
    grid_steps: int = 1000
    seed: int = 0
    ridge: float = DEFAULT_RIDGE

    def __post_init__(self):
        if self.k < 2:
            raise DataError(f"fold count must be >= 2, got {self.k}")
        if self.t_max is not None and self.t_max <= 0:
            raise DataError(f"t_max must be positive, got {self.t_max}")
        if self.grid_steps < 1:
            raise DataError(f"grid_steps must be >= 1, got {self.grid_steps}")


@dataclass(frozen=True)
class ScoredImage:
    identifier: str
    label: str
    min_stat: float

    def __post_init__(self):
        if self.min_stat < 0:
            raise DataError(f"score must be non-negative, got {self.min_stat}")


@dataclass
class TrainingReport:
    method: str
    k: int
    seed: int
    t_max: float
    grid_steps: int
    threshold: float
    cv_accuracy: float
    scores: list[ScoredImage] = field(default_factory=list)
    accuracy_curve: list[list[float]] = field(default_factory=list)
    excluded_references: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        payload = {
            "method": self.method,
            "k": self.k,
            "seed": self.seed,
            "t_max": self.t_max,
            "grid_steps": self.grid_steps,
            "threshold": self.threshold,
            "cv_accuracy": self.cv_accuracy,
            "scores": [
                {"id": s.identifier, "label": s.label, "min_stat": s.min_stat}
                for s in self.scores
            ],
            "accuracy_curve": self.accuracy_curve,
            "excluded_references": self.excluded_references,
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    def save(self, path) -> None:
        Path(path).write_text(self.to_json())


def default_t_max(df: int) -> float:
    """Threshold grid upper bound: ten times the 99.99% chi-square quantile."""
    return chi2_quantile(0.9999, df) * 10.0


def kfold_split(n_items: int, k: int, seed: int) -> list[np.ndarray]:
    """Deterministic index folds with sizes differing by at most one."""
    if k < 2:
        raise DataError(f"fold count must be >= 2, got {k}")
    if k > n_items:
        raise DataError(f"cannot split {n_items} images into {k} folds")
    order = np.random.default_rng(seed).permutation(n_items)
    return np.array_split(order, k)


def threshold_search(
    scored: list[ScoredImage], t_max: float, grid_steps: int = 1000
) -> tuple[float, float]:
    """Accuracy-maximizing threshold on a uniform grid over [0, t_max].

    Ties break toward the smallest threshold.  The decision rule is
    min_stat < threshold  =>  forest.
    """
    if not scored:
        raise DataError("no scored images to search over")
    labels = {s.label for s in scored}
    if len(labels) < 2:
        raise DataError("threshold search needs scores from both labels")
    stats = np.array([s.min_stat for s in scored])
    is_forest = np.array([s.label == FOREST for s in scored])
    grid = np.linspace(0.0, t_max, grid_steps + 1)
    accuracy = kernels.accuracy_curve(stats, is_forest, grid)
    index = int(np.argmax(accuracy))
    return float(grid[index]), float(accuracy[index])


def _curve_samples(scored, t_max, grid_steps, points: int = 101) -> list[list[float]]:
    """Subsampled (threshold, accuracy) pairs for the training report."""
    stats = np.array([s.min_stat for s in scored])
    is_forest = np.array([s.label == FOREST for s in scored])
    grid = np.linspace(0.0, t_max, grid_steps + 1)
    accuracy = kernels.accuracy_curve(stats, is_forest, grid)
    step = max(1, grid_steps // (points - 1))
    return [[float(grid[i]), float(accuracy[i])] for i in range(0, grid.size, step)]


def _score_mdc(items, stats_by_id, references, ridge) -> list[ScoredImage]:
    scored = []
    for item in items:
        best = math.inf
        for ref in references:
            try:
                t = mdc.t_statistic(stats_by_id[item.identifier], ref, ridge=ridge)
            except DegenerateStatisticsError:
                continue
            best = min(best, t)
        scored.append(ScoredImage(item.identifier, item.label, best))
    return scored


def score_holdout(
    fold_items,
    references,
    method: str = "mdc",
    *,
    ridge: float = DEFAULT_RIDGE,
    aggregation: str = "min",
) -> list[ScoredImage]:
    """Score holdout images by their minimum statistic over forest references.

    ``references`` holds SampleStats for the non-parametric method and
    SdcReference objects (which carry the CF argument) for the parametric one.
    """
    if not references:
        raise DataError("no forest references available for scoring")
    if method == "mdc":
        stats_by_id = {item.identifier: mdc.sample_stats(item.matrix) for item in fold_items}
        return _score_mdc(fold_items, stats_by_id, references, ridge)
    if method == "sdc":
        t = references[0].red.z0.t
        scored = []
        for item in fold_items:
            zn = sdc.tile_ecf(item.matrix, t)
            best = min(
                sdc.reference_score(zn, ref, item.matrix.n, aggregation, ridge)
                for ref in references
            )
            scored.append(ScoredImage(item.identifier, item.label, best))
        return scored
    raise DataError(f"unknown method {method!r}")


def cross_validate_mdc(dataset: LabeledDataset, cfg: CvConfig) -> tuple[MdcModel, TrainingReport]:
    """Algorithmic threshold training for the non-parametric classifier."""
    dataset.require_both_labels()
    items = dataset.items
    stats_by_id = {item.identifier: mdc.sample_stats(item.matrix) for item in items}

    folds = kfold_split(len(items), cfg.k, cfg.seed)
    scored: list[ScoredImage] = []
    for fold in folds:
        holdout = [items[i] for i in fold]
        in_fold = set(fold.tolist())
        references = [
            stats_by_id[items[i].identifier]
            for i in range(len(items))
            if i not in in_fold and items[i].label == FOREST
        ]
        if not references:
            raise DataError("a fold has no forest references outside it; lower k")
        scored.extend(_score_mdc(holdout, stats_by_id, references, cfg.ridge))

    t_max = cfg.t_max if cfg.t_max is not None else default_t_max(3)
    threshold, accuracy = threshold_search(scored, t_max, cfg.grid_steps)

    forest_items = [item for item in items if item.label == FOREST]
    model = MdcModel(
        references=[stats_by_id[item.identifier] for item in forest_items],
        reference_ids=[item.identifier for item in forest_items],
        threshold=threshold,
        ridge=cfg.ridge,
    )
    report = TrainingReport(
        method="mdc",
        k=cfg.k,
        seed=cfg.seed,
        t_max=t_max,
        grid_steps=cfg.grid_steps,
        threshold=threshold,
        cv_accuracy=accuracy,
        scores=scored,
        accuracy_curve=_curve_samples(scored, t_max, cfg.grid_steps),
    )
    return model, report


def cross_validate_sdc(
    dataset: LabeledDataset,
    cfg: CvConfig,
    t: float = DEFAULT_CF_ARGUMENT,
    aggregation: str = "min",
    min_pixels: int = 50,
) -> tuple[SdcModel, TrainingReport]:
    """Algorithmic threshold training for the parametric classifier.

    Forest images whose stable fits fail are excluded from the reference set
    with a warning; they still participate as test-side images.
    """
    dataset.require_both_labels()
    if t == 0.0:
        raise DataError("CF argument t must be non-zero")
    items = dataset.items

    references: dict[str, SdcReference] = {}
    excluded: list[str] = []
    for item in items:
        if item.label != FOREST:
            continue
        try:
            references[item.identifier] = sdc.fit_reference(
                item.matrix, t, item.identifier, min_pixels=min_pixels
            )
        except (EstimationError, ArithmeticError) as exc:
            warnings.warn(
                f"excluding forest reference {item.identifier!r}: {exc}", stacklevel=2
            )
            excluded.append(item.identifier)
    if not references:
        raise DataError("no forest image could be fitted as a reference")

    ecf_by_id = {item.identifier: sdc.tile_ecf(item.matrix, t) for item in items}
    n_by_id = {item.identifier: item.matrix.n for item in items}

    folds = kfold_split(len(items), cfg.k, cfg.seed)
    scored: list[ScoredImage] = []
    for fold in folds:
        in_fold = {items[i].identifier for i in fold.tolist()}
        fold_refs = [ref for ref_id, ref in references.items() if ref_id not in in_fold]
        if not fold_refs:
            raise DataError("a fold has no forest references outside it; lower k")
        for i in fold:
            item = items[i]
            best = min(
                sdc.reference_score(
                    ecf_by_id[item.identifier], ref, n_by_id[item.identifier],
                    aggregation, cfg.ridge,
                )
                for ref in fold_refs
            )
            scored.append(ScoredImage(item.identifier, item.label, best))

    t_max = cfg.t_max if cfg.t_max is not None else default_t_max(2)
    threshold, accuracy = threshold_search(scored, t_max, cfg.grid_steps)

    model = SdcModel(
        references=list(references.values()),
        t=t,
        threshold=threshold,
        aggregation=aggregation,
        ridge=cfg.ridge,
    )
    report = TrainingReport(
        method="sdc",
        k=cfg.k,
        seed=cfg.seed,
        t_max=t_max,
        grid_steps=cfg.grid_steps,
        threshold=threshold,
        cv_accuracy=accuracy,
        scores=scored,
        accuracy_curve=_curve_samples(scored, t_max, cfg.grid_steps),
        excluded_references=excluded,
    )
    return model, report
