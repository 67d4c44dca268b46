"""Command line interface: analyze single images, batch directories, and
score records against human annotations."""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click

from .config import PipelineConfig
from .errors import UndefinedRatesError
from .evaluation import (
    compute_rates,
    evaluate_images,
    format_rates_line,
    load_annotations,
)
from .imageio import (
    SUPPORTED_EXTENSIONS,
    load_image,
    preprocess,
    render_overlay,
    save_image,
    write_scaled_pgm16,
)
from .saliency import CHANNEL_NAMES, AnalysisResult, analyze
from .segmentation import build_cooccurrence, quantize, smooth_histogram

OUTPUT_DIR_ENVVAR = "UNCOMMONMAP_OUTPUT_DIR"

_CONFIG_OPTIONS = (
    click.option("--downsample-factor", type=int, default=2, show_default=True,
                 help="Block-average downsampling factor applied before cropping."),
    click.option("--crop-width", type=int, default=192, show_default=True,
                 help="Width of the centered working crop."),
    click.option("--crop-height", type=int, default=144, show_default=True,
                 help="Height of the centered working crop."),
    click.option("--quantization-bins", type=int, default=64, show_default=True,
                 help="Gray levels per channel for the co-occurrence histogram."),
    click.option("--histogram-sigma", type=float, default=1.0, show_default=True,
                 help="Gaussian smoothing (bins) of the histogram before peak finding."),
    click.option("--min-peak-fraction", type=float, default=1e-4, show_default=True,
                 help="Minimum smoothed peak mass as a fraction of total pairs."),
    click.option("--max-classes", type=int, default=8, show_default=True,
                 help="Population-ranked classes kept per channel; the rest is noise."),
    click.option("--blur-width", type=int, default=10, show_default=True,
                 help="Width of the Gaussian blur applied to the interest map."),
    click.option("--top-k", type=int, default=3, show_default=True,
                 help="Number of interest points reported per image."),
    click.option("--suppression-radius", type=float, default=10.0, show_default=True,
                 help="Minimum separation between reported points."),
    click.option("--match-radius", type=float, default=10.0, show_default=True,
                 help="Concurrence radius used by the evaluate command."),
)


def _with_config_options(command):
    for option in reversed(_CONFIG_OPTIONS):
        command = option(command)
    return command


def _config_from_kwargs(kwargs: dict) -> PipelineConfig:
    return PipelineConfig(
        downsample_factor=kwargs.pop("downsample_factor"),
        crop_width=kwargs.pop("crop_width"),
        crop_height=kwargs.pop("crop_height"),
        quantization_bins=kwargs.pop("quantization_bins"),
        histogram_sigma=kwargs.pop("histogram_sigma"),
        min_peak_fraction=kwargs.pop("min_peak_fraction"),
        max_classes=kwargs.pop("max_classes"),
        blur_width=kwargs.pop("blur_width"),
        top_k=kwargs.pop("top_k"),
        suppression_radius=kwargs.pop("suppression_radius"),
        match_radius=kwargs.pop("match_radius"),
    )


def _fail(exc: Exception, path: str | None = None) -> None:
    payload = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    if path is not None:
        payload["error"]["path"] = str(path)
    click.echo(json.dumps(payload, sort_keys=True))
    sys.exit(1)


def _build_config_or_fail(kwargs: dict) -> PipelineConfig:
    try:
        return _config_from_kwargs(kwargs)
    except ValueError as exc:
        _fail(exc)
        raise AssertionError("unreachable")  # _fail always exits


def _dump_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _points_block(result: AnalysisResult) -> dict:
    def listed(points):
        return [
            {"rank": i + 1, "x": p.x, "y": p.y, "score": p.score}
            for i, p in enumerate(points)
        ]

    return {
        "blurred": listed(result.points.blurred_points),
        "raw": listed(result.points.raw_points),
        "blurred_degenerate": result.points.blurred_degenerate,
        "raw_degenerate": result.points.raw_degenerate,
        # raw-scale points are persisted for inspection but never reported
        "raw_reported": False,
        "suppression_radius": result.points.suppression_radius,
    }


def _channels_block(result: AnalysisResult) -> dict:
    block = {}
    for name in CHANNEL_NAMES:
        seg = result.segmentations[name]
        if seg is None:
            block[name] = {"classes": 0, "populations": [], "degenerate": True}
        else:
            block[name] = {
                "classes": seg.n_classes,
                "populations": [int(v) for v in seg.populations],
                "degenerate": False,
            }
    return block


def _write_debug_maps(
    result: AnalysisResult, config: PipelineConfig, output_dir: Path, stem: str
) -> dict:
    files: dict[str, str] = {}
    scales: dict[str, float] = {}

    raw_name = f"{stem}_interest_raw.pgm"
    scales["raw"] = write_scaled_pgm16(output_dir / raw_name, result.interest.raw)
    files["interest_raw"] = raw_name
    blurred_name = f"{stem}_interest_blurred.pgm"
    scales["blurred"] = write_scaled_pgm16(
        output_dir / blurred_name, result.interest.blurred
    )
    files["interest_blurred"] = blurred_name

    for name in CHANNEL_NAMES:
        plane = getattr(result.hsi, name)
        quantized = quantize(plane, config.quantization_bins)
        histogram = build_cooccurrence(quantized, config.quantization_bins)
        if histogram.total_pairs > 0:
            hist_name = f"{stem}_{name}_histogram.pgm"
            scales[f"{name}_histogram"] = write_scaled_pgm16(
                output_dir / hist_name,
                smooth_histogram(histogram, config.histogram_sigma),
            )
            files[f"{name}_histogram"] = hist_name
        seg = result.segmentations[name]
        if seg is not None:
            seg_name = f"{stem}_{name}_segmentation.pgm"
            scales[f"{name}_segmentation"] = write_scaled_pgm16(
                output_dir / seg_name, seg.labels.astype(float)
            )
            files[f"{name}_segmentation"] = seg_name
    return {"files": files, "scale_factors": scales}


def _analyze_one(
    image_path: Path,
    config: PipelineConfig,
    output_dir: Path,
    debug_maps: bool,
    overlay_format: str,
) -> dict:
    started = time.perf_counter()
    image = load_image(image_path)
    working = preprocess(
        image,
        downsample_factor=config.downsample_factor,
        crop_width=config.crop_width,
        crop_height=config.crop_height,
    )
    result = analyze(working, config)
    stem = image_path.stem

    overlay_name = f"{stem}_overlay.{overlay_format}"
    save_image(output_dir / overlay_name, render_overlay(working, result.points))

    record = {
        "image_id": stem,
        "source": image_path.name,
        "config": config.to_dict(),
        "points": _points_block(result),
        "channels": _channels_block(result),
        "warnings": result.warnings,
        "outputs": {"overlay": overlay_name},
    }
    if debug_maps:
        record["outputs"]["debug"] = _write_debug_maps(result, config, output_dir, stem)
    # wall-clock lives in its own block so reruns stay byte-comparable
    record["timing"] = {"total_ms": (time.perf_counter() - started) * 1000.0}
    _dump_json(output_dir / f"{stem}_record.json", record)
    return record


@click.group()
def main():
    """Find uncommon regions in color imagery and report interest points."""


@main.command(name="analyze")
@click.argument("image_path", type=click.Path(path_type=Path))
@click.option("-o", "--output-dir", type=click.Path(path_type=Path), default=".",
              envvar=OUTPUT_DIR_ENVVAR, show_default=True,
              help=f"Where records and overlays are written (env {OUTPUT_DIR_ENVVAR}).")
@click.option("--debug-maps", is_flag=True,
              help="Also dump smoothed histograms, segmentations and interest maps.")
@click.option("--overlay-format", type=click.Choice(["png", "ppm"]), default="png",
              show_default=True, help="File format of the annotated overlay.")
@_with_config_options
def cmd_analyze(image_path: Path, output_dir: Path, debug_maps: bool,
                overlay_format: str, **kwargs):
    """Analyze one image and print its reported points as 'rank x y score'."""
    config = _build_config_or_fail(kwargs)
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
        record = _analyze_one(image_path, config, output_dir, debug_maps, overlay_format)
    except Exception as exc:  # noqa: BLE001 - reported as machine-readable JSON
        _fail(exc, path=str(image_path))
        return
    for point in record["points"]["blurred"]:
        click.echo(f"{point['rank']} {point['x']} {point['y']} {point['score']:.6f}")


@main.command(name="batch")
@click.argument("directory", type=click.Path(path_type=Path))
@click.option("-o", "--output-dir", type=click.Path(path_type=Path), default=".",
              envvar=OUTPUT_DIR_ENVVAR, show_default=True,
              help=f"Where records and overlays are written (env {OUTPUT_DIR_ENVVAR}).")
@click.option("--debug-maps", is_flag=True,
              help="Also dump smoothed histograms, segmentations and interest maps.")
@click.option("--overlay-format", type=click.Choice(["png", "ppm"]), default="png",
              show_default=True, help="File format of the annotated overlays.")
@_with_config_options
def cmd_batch(directory: Path, output_dir: Path, debug_maps: bool,
              overlay_format: str, **kwargs):
    """Analyze every supported image in a directory, in filename order."""
    config = _build_config_or_fail(kwargs)
    if not directory.is_dir():
        _fail(NotADirectoryError(f"not a directory: {directory}"), path=str(directory))
    paths = sorted(
        p for p in directory.iterdir()
        if p.is_file() and p.suffix.lower() in SUPPORTED_EXTENSIONS
    )
    if not paths:
        _fail(FileNotFoundError(f"no supported images ({', '.join(SUPPORTED_EXTENSIONS)}) in {directory}"),
              path=str(directory))
    output_dir.mkdir(parents=True, exist_ok=True)

    started = time.perf_counter()
    processed: list[str] = []
    failures: list[dict] = []
    for path in paths:
        try:
            record = _analyze_one(path, config, output_dir, debug_maps, overlay_format)
        except Exception as exc:  # noqa: BLE001 - recorded, batch continues
            failures.append({
                "path": path.name,
                "error": {"type": type(exc).__name__, "message": str(exc)},
            })
            continue
        processed.append(record["image_id"])

    total_ms = (time.perf_counter() - started) * 1000.0
    summary = {
        "count": len(processed),
        "images": processed,
        "failures": failures,
        "config": config.to_dict(),
        "timing": {
            "total_ms": total_ms,
            "mean_ms": total_ms / len(processed) if processed else None,
        },
    }
    _dump_json(output_dir / "batch_summary.json", summary)
    click.echo(f"processed {len(processed)} images, {len(failures)} failures")
    if not processed:
        sys.exit(1)


@main.command(name="evaluate")
@click.argument("records_path", type=click.Path(path_type=Path))
@click.argument("annotations_path", type=click.Path(path_type=Path))
@click.option("-o", "--output-dir", type=click.Path(path_type=Path), default=".",
              envvar=OUTPUT_DIR_ENVVAR, show_default=True,
              help=f"Where the report is written (env {OUTPUT_DIR_ENVVAR}).")
@click.option("--match-radius", type=float, default=10.0, show_default=True,
              help="Concurrence radius in pixels.")
def cmd_evaluate(records_path: Path, annotations_path: Path, output_dir: Path,
                 match_radius: float):
    """Score recorded interest points against annotated features."""
    try:
        predictions = _load_predictions(records_path)
        annotations = load_annotations(annotations_path)
        report = evaluate_images(predictions, annotations, match_radius)
    except Exception as exc:  # noqa: BLE001 - reported as machine-readable JSON
        _fail(exc)
        return
    output_dir.mkdir(parents=True, exist_ok=True)
    _dump_json(output_dir / "concurrence_report.json", report)
    aggregate = report["aggregate"]
    try:
        rates = compute_rates(aggregate["tp"], aggregate["fp"], aggregate["fn"])
    except UndefinedRatesError as exc:
        _fail(exc)
        return
    click.echo(format_rates_line(rates))


def _load_predictions(records_path: Path) -> dict[str, list[tuple[float, float]]]:
    """Collect reported (blurred-scale) points from analysis records."""
    if records_path.is_dir():
        files = sorted(records_path.glob("*_record.json"))
        if not files:
            raise FileNotFoundError(f"no *_record.json files in {records_path}")
        documents = [json.loads(f.read_text()) for f in files]
    else:
        payload = json.loads(records_path.read_text())
        documents = payload if isinstance(payload, list) else [payload]

    predictions: dict[str, list[tuple[float, float]]] = {}
    for doc in documents:
        if "image_id" not in doc or "points" not in doc:
            raise ValueError(f"{records_path}: record missing image_id/points")
        image_id = doc["image_id"]
        if image_id in predictions:
            raise ValueError(f"duplicate records for image id {image_id!r}")
        predictions[image_id] = [
            (float(p["x"]), float(p["y"])) for p in doc["points"]["blurred"]
        ]
    return predictions


if __name__ == "__main__":
    main()
