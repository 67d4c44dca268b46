"""Uncommon maps, interest map fusion, smoothing and point extraction.

An uncommon map inverts a segmentation's class ranking: pixels of the most
populous class get value 1, rarer classes count upward, and anything ranked
past the retained classes (or never assigned) is treated as noise and gets
0. The three per-channel uncommon maps sum into the interest map, whose
Gaussian-blurred peaks are the locations reported to the operator; the
unblurred peaks are kept alongside for inspection but are not reported.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .color import HsiPlanes, rgb_to_hsi
from .config import PipelineConfig
from .errors import DegenerateInputError
from .filters import gaussian_smooth
from .segmentation import SegmentationMap, segment_plane

CHANNEL_NAMES = ("hue", "saturation", "intensity")


@dataclass(frozen=True)
class InterestPoint:
    x: int
    y: int
    score: float


@dataclass(frozen=True)
class InterestMap:
    """Pointwise sum of the three uncommon maps, raw and blurred."""

    raw: np.ndarray
    blurred: np.ndarray
    blur_width: int


@dataclass(frozen=True)
class InterestPointSet:
    """Ranked peak locations at the blurred (reported) and raw scales."""

    blurred_points: tuple[InterestPoint, ...]
    raw_points: tuple[InterestPoint, ...]
    suppression_radius: float
    blurred_degenerate: bool
    raw_degenerate: bool


@dataclass
class AnalysisResult:
    hsi: HsiPlanes
    segmentations: dict[str, SegmentationMap | None]
    uncommon: dict[str, np.ndarray]
    interest: InterestMap
    points: InterestPointSet
    warnings: list[str] = field(default_factory=list)
    elapsed_ms: float = 0.0


def uncommon_map(seg: SegmentationMap, max_classes: int = 8) -> np.ndarray:
    """Rank-invert a segmentation map into per-pixel uncommonness.

    Class k (1 = most populous) maps to value k while k <= max_classes;
    classes ranked past max_classes and unassigned pixels are treated as
    noise and map to 0.
    """
    if max_classes < 1:
        raise ValueError(f"max_classes must be positive, got {max_classes}")
    populations = np.asarray(seg.populations)
    if populations.size > 1 and np.any(np.diff(populations) > 0):
        raise ValueError("segmentation classes are not ranked by descending population")
    labels = seg.labels
    return np.where((labels >= 1) & (labels <= max_classes), labels, 0).astype(np.int64)


def fuse_interest(
    hue_uncommon: np.ndarray,
    saturation_uncommon: np.ndarray,
    intensity_uncommon: np.ndarray,
) -> np.ndarray:
    """Pointwise integer sum of the three channel uncommon maps."""
    h = np.asarray(hue_uncommon)
    s = np.asarray(saturation_uncommon)
    i = np.asarray(intensity_uncommon)
    if not (h.shape == s.shape == i.shape):
        raise ValueError(
            f"uncommon map shapes differ: {h.shape}, {s.shape}, {i.shape}"
        )
    return (h + s + i).astype(np.int64)


def blur_interest(raw: np.ndarray, blur_width: int = 10, sigma: float | None = None) -> np.ndarray:
    """Gaussian-smooth the raw interest map.

    The kernel standard deviation defaults to blur_width / 2 and is truncated
    at radius ceil(3 * sigma); near the borders it is renormalized so every
    output stays a convex combination of inputs. Smoothing concentrates
    weight on clusters of uncommon pixels instead of isolated rare pixels.
    """
    if blur_width < 1:
        raise ValueError(f"blur_width must be at least 1, got {blur_width}")
    if sigma is None:
        sigma = blur_width / 2.0
    return gaussian_smooth(np.asarray(raw, dtype=float), sigma)


def extract_points(
    score_map: np.ndarray,
    k: int = 3,
    suppression_radius: float = 10.0,
) -> tuple[list[InterestPoint], bool]:
    """Greedily pick the top-k peaks of a score map with radius suppression.

    Each round takes the global maximum (ties broken by smallest row, then
    smallest column) and excludes every pixel strictly closer than
    suppression_radius to it, stopping early once the map is exhausted.
    Returns the points in selection order as (x, y, score) plus a degenerate
    flag that is set when the map is exactly constant.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if suppression_radius <= 0:
        raise ValueError(f"suppression_radius must be positive, got {suppression_radius}")
    grid = np.asarray(score_map, dtype=float)
    if grid.ndim != 2 or grid.size == 0:
        raise ValueError(f"expected a non-empty 2-D map, got shape {grid.shape}")

    degenerate = bool(np.all(grid == grid.flat[0]))
    work = grid.copy()
    height, width = grid.shape
    rows, cols = np.indices(grid.shape)
    radius_sq = float(suppression_radius) ** 2

    points: list[InterestPoint] = []
    for _ in range(k):
        if np.all(np.isneginf(work)):
            break
        flat_index = int(np.argmax(work))  # first max in row-major order
        r, c = divmod(flat_index, width)
        points.append(InterestPoint(x=c, y=r, score=float(grid[r, c])))
        work[(rows - r) ** 2 + (cols - c) ** 2 < radius_sq] = -np.inf
    return points, degenerate


def analyze(img: np.ndarray, config: PipelineConfig | None = None) -> AnalysisResult:
    """Run the full per-channel pipeline on a preprocessed RGB image.

    Each HSI plane is segmented independently and rank-inverted into an
    uncommon map; a channel whose segmentation degenerates (no pixel pairs
    or no qualifying histogram peaks) contributes an all-zero map and a
    warning instead of failing the whole image. The fused interest map is
    blurred and the top-k points of both the blurred and the raw map are
    extracted with the same suppression radius.
    """
    cfg = config if config is not None else PipelineConfig()
    arr = np.asarray(img, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected a (H, W, 3) image, got shape {arr.shape}")

    start = time.perf_counter()
    planes = rgb_to_hsi(arr)
    segmentations: dict[str, SegmentationMap | None] = {}
    uncommon: dict[str, np.ndarray] = {}
    warnings: list[str] = []
    for name, plane in zip(CHANNEL_NAMES, planes):
        try:
            seg = segment_plane(
                plane,
                quantization_bins=cfg.quantization_bins,
                histogram_sigma=cfg.histogram_sigma,
                min_peak_fraction=cfg.min_peak_fraction,
            )
        except DegenerateInputError as exc:
            segmentations[name] = None
            uncommon[name] = np.zeros(plane.shape, dtype=np.int64)
            warnings.append(f"{name} channel degenerate: {exc}")
            continue
        segmentations[name] = seg
        uncommon[name] = uncommon_map(seg, cfg.max_classes)

    raw = fuse_interest(uncommon["hue"], uncommon["saturation"], uncommon["intensity"])
    blurred = blur_interest(raw, cfg.blur_width)
    blurred_points, blurred_degenerate = extract_points(
        blurred, cfg.top_k, cfg.suppression_radius
    )
    raw_points, raw_degenerate = extract_points(
        raw.astype(float), cfg.top_k, cfg.suppression_radius
    )
    elapsed_ms = (time.perf_counter() - start) * 1000.0

    return AnalysisResult(
        hsi=planes,
        segmentations=segmentations,
        uncommon=uncommon,
        interest=InterestMap(raw=raw, blurred=blurred, blur_width=cfg.blur_width),
        points=InterestPointSet(
            blurred_points=tuple(blurred_points),
            raw_points=tuple(raw_points),
            suppression_radius=float(cfg.suppression_radius),
            blurred_degenerate=blurred_degenerate,
            raw_degenerate=raw_degenerate,
        ),
        warnings=warnings,
        elapsed_ms=elapsed_ms,
    )
