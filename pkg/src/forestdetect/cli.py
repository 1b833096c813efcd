"""Command-line surface: train, classify, fit-report, simulate, eval.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical degeneracy.
"""
from __future__ import annotations

import csv
import json
import math
import sys
from pathlib import Path

import click
import numpy as np
from PIL import Image

from . import mdc, sdc, synth
from .chisquare import chi2_quantile
from .errors import DataError, DegenerateStatisticsError, EstimationError
from .raster import (
    DEFAULT_DIVISOR,
    FOREST,
    NON_FOREST,
    load_image,
    load_manifest,
    tile_image,
    to_pixel_matrix,
)
from .stable import fit_report
from .trainer import CvConfig, cross_validate_mdc, cross_validate_sdc


@click.group()
def cli():
    """Statistical forest / non-forest detection for RGB tiles."""


def _load_any_model(path: Path):
    try:
        payload = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read model {path}: {exc}") from exc
    if "t" in payload:
        return "sdc", sdc.SdcModel.from_json(path.read_text())
    return "mdc", mdc.MdcModel.from_json(path.read_text())


def _classify_matrix(method, model, matrix):
    if method == "mdc":
        return mdc.classify(mdc.sample_stats(matrix), model)
    return sdc.classify(matrix, model)


@cli.command()
@click.option("--manifest", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--method", type=click.Choice(["mdc", "sdc"]), required=True)
@click.option("--out", type=click.Path(path_type=Path), default=Path("model.json"))
@click.option("--report", type=click.Path(path_type=Path), default=None)
@click.option("--k", type=int, default=5, show_default=True, help="Fold count.")
@click.option("--t-max", type=float, default=None, help="Threshold grid upper bound.")
@click.option("--grid-steps", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--ridge", type=float, default=mdc.DEFAULT_RIDGE, show_default=True)
@click.option("--cf-t", type=float, default=sdc.DEFAULT_CF_ARGUMENT, show_default=True,
              help="CF argument for the parametric method.")
@click.option("--aggregation", type=click.Choice(["min", "max"]), default="min",
              show_default=True)
@click.option("--normalize-divisor", type=float, default=DEFAULT_DIVISOR, show_default=True)
@click.option("--chi2-level", type=float, default=None,
              help="Override the trained threshold with a chi-square quantile "
                   "(not part of the cross-validation procedure).")
def train(manifest, method, out, report, k, t_max, grid_steps, seed, ridge, cf_t,
          aggregation, normalize_divisor, chi2_level):
    """Cross-validate a decision threshold and write the trained model."""
    dataset = load_manifest(manifest, divisor=normalize_divisor)
    cfg = CvConfig(k=k, t_max=t_max, grid_steps=grid_steps, seed=seed, ridge=ridge)
    if method == "mdc":
        model, training_report = cross_validate_mdc(dataset, cfg)
        df = 3
    else:
        model, training_report = cross_validate_sdc(dataset, cfg, t=cf_t, aggregation=aggregation)
        df = 2
    if chi2_level is not None:
        model.threshold = chi2_quantile(chi2_level, df)
    out.write_text(model.to_json())
    if report is not None:
        training_report.save(report)
    click.echo(
        f"{method} model written to {out}: threshold={model.threshold:.6g} "
        f"cv_accuracy={training_report.cv_accuracy:.4f}"
    )


@cli.command()
@click.option("--image", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--model", "model_path", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--tile-size", type=int, default=10, show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=Path("mask.png"))
@click.option("--scores", type=click.Path(path_type=Path), default=None,
              help="Optional per-tile score CSV.")
@click.option("--upscale/--no-upscale", default=False,
              help="Render each tile as a tile-size block instead of one pixel.")
@click.option("--normalize-divisor", type=float, default=DEFAULT_DIVISOR, show_default=True)
def classify(image, model_path, tile_size, out, scores, upscale, normalize_divisor):
    """Classify every tile of an image and write a binary mask (white=forest)."""
    method, model = _load_any_model(model_path)
    scene = load_image(image, divisor=normalize_divisor)
    tiles = tile_image(scene, tile_size)
    rows_count = scene.shape[0] // tile_size
    cols_count = scene.shape[1] // tile_size

    mask = np.zeros((rows_count, cols_count), dtype=np.uint8)
    records = []
    degenerate = 0
    for tile in tiles:
        matrix = to_pixel_matrix(tile)
        label, statistic = _classify_matrix(method, model, matrix)
        i, j = tile.origin[0] // tile_size, tile.origin[1] // tile_size
        if label == FOREST:
            mask[i, j] = 255
        if not math.isfinite(statistic):
            degenerate += 1
        records.append((i, j, statistic, label))

    rendered = np.kron(mask, np.ones((tile_size, tile_size), dtype=np.uint8)) if upscale else mask
    Image.fromarray(rendered, mode="L").save(out)
    if scores is not None:
        with open(scores, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["tile_row", "tile_col", "statistic", "label"])
            for i, j, statistic, label in records:
                writer.writerow([i, j, repr(statistic), label])
    if degenerate:
        click.echo(
            f"warning: {degenerate} tile(s) had degenerate statistics and were "
            "classified non-forest",
            err=True,
        )
    forest_tiles = int((mask == 255).sum())
    click.echo(f"mask {rows_count}x{cols_count} written to {out}: {forest_tiles} forest tiles")


@cli.command("fit-report")
@click.option("--input", "input_path", type=click.Path(exists=True, path_type=Path),
              required=True,
              help="Image (band directory / packed PNG) or a text file of sample values.")
@click.option("--out-prefix", type=click.Path(path_type=Path), default=Path("fit_report"))
@click.option("--density-csv/--no-density-csv", default=False,
              help="Also write the evaluated density grid as CSV.")
@click.option("--normalize-divisor", type=float, default=DEFAULT_DIVISOR, show_default=True)
def fit_report_cmd(input_path, out_prefix, density_csv, normalize_divisor):
    """Fit Normal/Gamma/Stable laws and report RMSE against the empirical density."""
    samples = {}
    if input_path.is_file() and input_path.suffix.lower() in (".csv", ".txt"):
        try:
            samples[""] = np.loadtxt(input_path, delimiter="," if input_path.suffix == ".csv" else None).ravel()
        except ValueError as exc:
            raise DataError(f"cannot parse sample file {input_path}: {exc}") from exc
    else:
        matrix = to_pixel_matrix(load_image(input_path, divisor=normalize_divisor))
        for index, name in enumerate(("red", "green", "blue")):
            samples[f"_{name}"] = matrix.channel(index)

    for suffix, sample in samples.items():
        report = fit_report(sample)
        base = Path(str(out_prefix) + suffix)
        base.with_suffix(".json").write_text(report.to_json())
        base.with_suffix(".txt").write_text(report.to_text() + "\n")
        if density_csv:
            base.with_suffix(".csv").write_text(report.density_csv())
        click.echo(f"== {base.name} ==")
        click.echo(report.to_text())


@cli.command()
@click.option("--params", type=click.Path(exists=True, path_type=Path), required=True,
              help="JSON file of per-region, per-channel stable parameters.")
@click.option("--mode", type=click.Choice(["dataset", "image"]), default="dataset",
              show_default=True)
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tile-size", type=int, default=10, show_default=True)
@click.option("--n-per-class", type=int, default=100, show_default=True,
              help="Tiles per class (dataset mode).")
@click.option("--width", type=int, default=200, show_default=True)
@click.option("--height", type=int, default=200, show_default=True)
@click.option("--layout", type=click.Choice(list(synth.LAYOUTS)), default="vsplit",
              show_default=True)
@click.option("--normalize-divisor", type=float, default=DEFAULT_DIVISOR, show_default=True)
def simulate(params, mode, out, seed, tile_size, n_per_class, width, height, layout,
             normalize_divisor):
    """Generate synthetic images with ground truth from stable colour laws."""
    regions = synth.load_region_params(params)
    out = Path(out)
    if mode == "dataset":
        manifest = synth.write_dataset(
            out, regions, n_per_class, tile_size, seed, divisor=normalize_divisor
        )
        click.echo(f"dataset manifest written to {manifest}")
        return
    rng = np.random.default_rng(seed)
    scene, forest_mask = synth.simulate_image(regions, height, width, layout, rng)
    out.mkdir(parents=True, exist_ok=True)
    from .raster import save_bands

    save_bands(out, scene, divisor=normalize_divisor)
    truth = synth.tile_truth(forest_mask, tile_size)
    with open(out / "tile_truth.csv", "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["tile_row", "tile_col", "label"])
        writer.writerows(truth)
    (out / "meta.json").write_text(
        json.dumps(
            {"layout": layout, "height": height, "width": width,
             "tile_size": tile_size, "seed": seed},
            indent=2, sort_keys=True,
        )
    )
    click.echo(f"image bands and tile truth written to {out}")


@cli.command("eval")
@click.option("--manifest", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--model", "model_path", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--out", type=click.Path(path_type=Path), default=None,
              help="Per-image prediction CSV.")
@click.option("--summary", type=click.Path(path_type=Path), default=None,
              help="JSON summary (accuracy / error rate).")
@click.option("--normalize-divisor", type=float, default=DEFAULT_DIVISOR, show_default=True)
def eval_cmd(manifest, model_path, out, summary, normalize_divisor):
    """Classify every manifest image whole and report the error rate."""
    method, model = _load_any_model(model_path)
    dataset = load_manifest(manifest, divisor=normalize_divisor)
    records = []
    correct = 0
    for item in dataset.items:
        label, statistic = _classify_matrix(method, model, item.matrix)
        correct += int(label == item.label)
        records.append((item.identifier, item.label, label, statistic))
    n = len(dataset)
    accuracy = correct / n if n else float("nan")
    payload = {
        "method": method,
        "n": n,
        "accuracy": accuracy,
        "error_rate": 1.0 - accuracy if n else float("nan"),
    }
    if out is not None:
        with open(out, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["id", "label", "predicted", "statistic"])
            for identifier, label, predicted, statistic in records:
                writer.writerow([identifier, label, predicted, repr(statistic)])
    if summary is not None:
        Path(summary).write_text(json.dumps(payload, indent=2, sort_keys=True))
    click.echo(json.dumps(payload, sort_keys=True))


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        sys.exit(1)
    except click.UsageError as exc:
        exc.show()
        sys.exit(2)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except (DataError, EstimationError) as exc:
        click.echo(f"data error: {exc}", err=True)
        sys.exit(3)
    except (DegenerateStatisticsError, ArithmeticError) as exc:
        click.echo(f"numerical degeneracy: {exc}", err=True)
        sys.exit(4)


if __name__ == "__main__":
    main()
