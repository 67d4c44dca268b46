"""Uncommon-region interest point detection for color field imagery.

The pipeline segments the hue, saturation and intensity planes of an image
independently with a co-occurrence histogram method, inverts each class
ranking into an uncommon map, sums the three maps into an interest map,
and reports the top peaks of its Gaussian-blurred form.
"""

from .color import HsiPlanes, rgb_to_hsi
from .config import PipelineConfig
from .errors import (
    DegenerateInputError,
    DimensionError,
    ImageFormatError,
    UndefinedRatesError,
)
from .estimator import InterestPointDetector
from .evaluation import (
    AnnotatedFeature,
    ConcurrenceRates,
    MatchResult,
    compute_rates,
    evaluate_images,
    match_points,
)
from .imageio import load_image, preprocess, render_overlay, save_image
from .saliency import (
    AnalysisResult,
    InterestMap,
    InterestPoint,
    InterestPointSet,
    analyze,
    blur_interest,
    extract_points,
    fuse_interest,
    uncommon_map,
)
from .segmentation import (
    CooccurrenceHistogram,
    SegmentationMap,
    build_cooccurrence,
    classify_pixels,
    find_histogram_peaks,
    quantize,
    segment_plane,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisResult",
    "AnnotatedFeature",
    "ConcurrenceRates",
    "CooccurrenceHistogram",
    "DegenerateInputError",
    "DimensionError",
    "HsiPlanes",
    "ImageFormatError",
    "InterestMap",
    "InterestPoint",
    "InterestPointDetector",
    "InterestPointSet",
    "MatchResult",
    "PipelineConfig",
    "SegmentationMap",
    "UndefinedRatesError",
    "analyze",
    "blur_interest",
    "build_cooccurrence",
    "classify_pixels",
    "compute_rates",
    "evaluate_images",
    "extract_points",
    "find_histogram_peaks",
    "fuse_interest",
    "load_image",
    "match_points",
    "preprocess",
    "quantize",
    "render_overlay",
    "rgb_to_hsi",
    "save_image",
    "segment_plane",
    "uncommon_map",
]
