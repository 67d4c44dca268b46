"""scikit-learn style front end for the detection pipeline.

The detector is stateless (fit only validates), so it composes with
sklearn tooling that relies on get_params / set_params / clone while the
actual work happens in `transform` and `predict`.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .config import PipelineConfig
from .saliency import AnalysisResult, analyze
from .validation import check_image_batch, check_rgb_image, is_single_image


class InterestPointDetector(BaseEstimator):
    """Detect uncommon-region interest points in RGB imagery.

    Parameters
    ----------
    quantization_bins : int, default=64
        Gray levels used when histogramming each HSI plane.
    histogram_sigma : float, default=1.0
        Gaussian smoothing (in bins) applied to the co-occurrence histogram
        before peak finding.
    min_peak_fraction : float, default=1e-4
        Fraction of the total pair count a smoothed histogram peak must
        reach to define a pixel class.
    max_classes : int, default=8
        Number of population-ranked classes retained per channel; rarer
        classes are treated as noise.
    blur_width : int, default=10
        Width of the Gaussian kernel applied to the interest map (the
        kernel standard deviation is blur_width / 2).
    top_k : int, default=3
        Number of interest points reported per image.
    suppression_radius : float, default=10.0
        Minimum separation enforced between reported points.

    Examples
    --------
    >>> detector = InterestPointDetector()
    >>> points = detector.fit(image).predict(image)  # (k, 3) of x, y, score
    """

    def __init__(
        self,
        quantization_bins: int = 64,
        histogram_sigma: float = 1.0,
        min_peak_fraction: float = 1e-4,
        max_classes: int = 8,
        blur_width: int = 10,
        top_k: int = 3,
        suppression_radius: float = 10.0,
    ):
        self.quantization_bins = quantization_bins
        self.histogram_sigma = histogram_sigma
        self.min_peak_fraction = min_peak_fraction
        self.max_classes = max_classes
        self.blur_width = blur_width
        self.top_k = top_k
        self.suppression_radius = suppression_radius

    def fit(self, X=None, y=None) -> "InterestPointDetector":
        """Validate parameters (and input, if given); no state is learned."""
        self.pipeline_config_ = self._build_config()
        if X is not None:
            self._as_images(X)
        return self

    def transform(self, X):
        """Blurred interest map(s) for an image or a batch of images."""
        if is_single_image(X):
            return self.analyze_image(check_rgb_image(X)).interest.blurred
        return [self.analyze_image(img).interest.blurred for img in self._as_images(X)]

    def predict(self, X):
        """Interest points for an image or a batch of images.

        A single (H, W, 3) image yields one (n_points, 3) array of
        (x, y, score) rows in rank order; a batch yields a list of them.
        """
        if is_single_image(X):
            return self._points_array(self.analyze_image(check_rgb_image(X)))
        return [self._points_array(self.analyze_image(img)) for img in self._as_images(X)]

    def fit_predict(self, X, y=None):
        return self.fit(X).predict(X)

    def analyze_image(self, image: np.ndarray) -> AnalysisResult:
        """Full pipeline output (planes, segmentations, maps, points)."""
        return analyze(check_rgb_image(image, "image"), self._build_config())

    def _build_config(self) -> PipelineConfig:
        return PipelineConfig(
            downsample_factor=1,
            crop_width=1,
            crop_height=1,
            quantization_bins=self.quantization_bins,
            histogram_sigma=self.histogram_sigma,
            min_peak_fraction=self.min_peak_fraction,
            max_classes=self.max_classes,
            blur_width=self.blur_width,
            top_k=self.top_k,
            suppression_radius=self.suppression_radius,
        )

    def _as_images(self, X) -> list[np.ndarray]:
        if is_single_image(X):
            return [check_rgb_image(X)]
        return check_image_batch(X)

    @staticmethod
    def _points_array(result: AnalysisResult) -> np.ndarray:
        points = result.points.blurred_points
        if not points:
            return np.empty((0, 3))
        return np.array([[p.x, p.y, p.score] for p in points], dtype=float)
