"""Co-occurrence histogram segmentation of a single image plane.

The plane is quantized to G gray levels, every 4-neighbor pixel pair is
accumulated into a symmetric G x G co-occurrence histogram, and the peaks
of the smoothed histogram define the pixel classes: each histogram bin is
attached to a peak by steepest-ascent hill climbing, each pixel votes once
per adjacency with the label of the bin its pair falls in, and the majority
label wins. Classes are finally renumbered 1..K by descending pixel
population; label 0 marks pixels that no peak claimed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError
from .filters import gaussian_smooth

_NEIGHBOR_OFFSETS = (
    (-1, -1), (-1, 0), (-1, 1),
    (0, -1), (0, 1),
    (1, -1), (1, 0), (1, 1),
)


@dataclass(frozen=True)
class CooccurrenceHistogram:
    """Symmetric pair-count histogram over quantized gray levels.

    total_pairs is twice the number of in-bounds 4-neighbor adjacencies,
    because every adjacency (p, q) increments both bins[g(p), g(q)] and
    bins[g(q), g(p)].
    """

    bins: np.ndarray
    total_pairs: int


@dataclass(frozen=True)
class SegmentationMap:
    """Per-pixel class labels, 1..K by descending population, 0 = unassigned."""

    labels: np.ndarray
    populations: np.ndarray

    @property
    def n_classes(self) -> int:
        return int(self.populations.size)


def quantize(plane: np.ndarray, bins: int) -> np.ndarray:
    """Map values in [0, 1] to integer levels via min(floor(v * G), G - 1)."""
    if bins < 2:
        raise ValueError(f"need at least 2 quantization bins, got {bins}")
    arr = np.asarray(plane, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"expected a single plane, got shape {arr.shape}")
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        raise ValueError("plane values must lie in [0, 1]")
    return np.minimum(np.floor(arr * bins).astype(np.int64), bins - 1)


def build_cooccurrence(quantized: np.ndarray, bins: int) -> CooccurrenceHistogram:
    """Accumulate all in-bounds 4-neighbor pairs of a quantized plane."""
    q = np.asarray(quantized)
    if q.ndim != 2:
        raise ValueError(f"expected a quantized plane, got shape {q.shape}")
    if q.size and (q.min() < 0 or q.max() >= bins):
        raise ValueError(f"quantized values must lie in [0, {bins - 1}]")

    flat_counts = np.zeros(bins * bins, dtype=np.int64)
    for a, b in (
        (q[:, :-1], q[:, 1:]),  # horizontal adjacencies
        (q[:-1, :], q[1:, :]),  # vertical adjacencies
    ):
        a = a.ravel()
        b = b.ravel()
        if a.size == 0:
            continue
        flat_counts += np.bincount(a * bins + b, minlength=bins * bins)
        flat_counts += np.bincount(b * bins + a, minlength=bins * bins)
    counts = flat_counts.reshape(bins, bins)
    return CooccurrenceHistogram(bins=counts, total_pairs=int(counts.sum()))


def smooth_histogram(hist: CooccurrenceHistogram, sigma: float) -> np.ndarray:
    """The Gaussian-smoothed pair counts that peak finding and labeling use."""
    return gaussian_smooth(hist.bins.astype(float), sigma)


def find_histogram_peaks(
    hist: CooccurrenceHistogram,
    smoothing_sigma: float = 1.0,
    min_fraction: float = 1e-4,
) -> list[tuple[int, int]]:
    """Find the class-defining peaks of the smoothed histogram.

    A peak is a strict local maximum of the smoothed histogram over its
    in-bounds 8-neighborhood whose smoothed value is at least
    min_fraction * total_pairs (this floor suppresses phantom peaks made of
    a handful of stray pairs). Peaks are returned as (row, col) bins sorted
    by descending smoothed value, ties broken by ascending (row, col).
    """
    if hist.total_pairs == 0:
        raise DegenerateInputError("histogram holds no pixel pairs")
    smoothed = smooth_histogram(hist, smoothing_sigma)
    threshold = min_fraction * hist.total_pairs

    padded = np.pad(smoothed, 1, mode="constant", constant_values=-np.inf)
    center = padded[1:-1, 1:-1]
    is_peak = center >= threshold
    for dy, dx in _NEIGHBOR_OFFSETS:
        neighbor = padded[1 + dy : padded.shape[0] - 1 + dy, 1 + dx : padded.shape[1] - 1 + dx]
        is_peak &= center > neighbor

    rows, cols = np.nonzero(is_peak)
    order = sorted(range(rows.size), key=lambda i: (-smoothed[rows[i], cols[i]], rows[i], cols[i]))
    return [(int(rows[i]), int(cols[i])) for i in order]


def classify_pixels(
    quantized: np.ndarray,
    hist: CooccurrenceHistogram,
    peaks: list[tuple[int, int]],
    smoothing_sigma: float = 1.0,
) -> SegmentationMap:
    """Assign every pixel to a histogram peak and rank classes by population.

    Bins are attached to peaks by steepest ascent on the smoothed histogram:
    from each bin, move to the largest strictly-greater 8-neighbor (ties by
    ascending (row, col)) until a local maximum is reached. Bins whose climb
    ends on a listed peak inherit that peak's id; the rest stay unlabeled.

    Each pixel then casts one vote per in-bounds adjacency, namely the label
    of the bin its (own level, neighbor level) pair falls in, and takes the
    majority label, ties going to the smaller label id. Unlabeled-bin votes
    count as label 0, so a pixel dominated by them stays unassigned.

    Finally classes are renumbered 1..K by descending pixel population
    (ties keep peak order); classes that win no pixels are dropped.
    """
    if not peaks:
        raise DegenerateInputError("no histogram peaks to classify against")
    q = np.asarray(quantized)
    smoothed = smooth_histogram(hist, smoothing_sigma)
    bin_label = _label_bins(smoothed, peaks)

    height, width = q.shape
    n_candidates = len(peaks)
    votes = np.zeros((height, width, n_candidates + 1), dtype=np.int32)
    directions = (
        (q[:, : width - 1], q[:, 1:], 0, 0),  # vote with right neighbor
        (q[:, 1:], q[:, : width - 1], 0, 1),  # vote with left neighbor
        (q[: height - 1, :], q[1:, :], 0, 0),  # vote with lower neighbor
        (q[1:, :], q[: height - 1, :], 1, 0),  # vote with upper neighbor
    )
    for center, neighbor, row0, col0 in directions:
        if center.size == 0:
            continue
        cast = bin_label[center, neighbor]
        rr, cc = np.indices(center.shape)
        np.add.at(votes, (rr + row0, cc + col0, cast), 1)

    # argmax returns the first maximum, so vote ties resolve to the
    # smallest label id (0 included).
    majority = np.argmax(votes, axis=2)

    counts = np.bincount(majority.ravel(), minlength=n_candidates + 1)
    survivors = [lab for lab in range(1, n_candidates + 1) if counts[lab] > 0]
    survivors.sort(key=lambda lab: (-counts[lab], lab))
    lut = np.zeros(n_candidates + 1, dtype=np.int64)
    for new_id, old_id in enumerate(survivors, start=1):
        lut[old_id] = new_id
    labels = lut[majority]
    populations = np.array([counts[old_id] for old_id in survivors], dtype=np.int64)
    return SegmentationMap(labels=labels, populations=populations)


def segment_plane(
    plane: np.ndarray,
    quantization_bins: int = 64,
    histogram_sigma: float = 1.0,
    min_peak_fraction: float = 1e-4,
) -> SegmentationMap:
    """Run the full quantize / histogram / peaks / classify chain on a plane."""
    q = quantize(plane, quantization_bins)
    hist = build_cooccurrence(q, quantization_bins)
    peaks = find_histogram_peaks(hist, histogram_sigma, min_peak_fraction)
    return classify_pixels(q, hist, peaks, histogram_sigma)


def _label_bins(smoothed: np.ndarray, peaks: list[tuple[int, int]]) -> np.ndarray:
    """Hill-climb every bin of the smoothed histogram to its peak label."""
    size = smoothed.shape[0]
    peak_id = {peak: i + 1 for i, peak in enumerate(peaks)}
    labels = np.full((size, size), -1, dtype=np.int64)

    def successor(row: int, col: int) -> tuple[int, int] | None:
        best_value = smoothed[row, col]
        best = None
        for dy, dx in _NEIGHBOR_OFFSETS:
            r, c = row + dy, col + dx
            if 0 <= r < size and 0 <= c < size and smoothed[r, c] > best_value:
                best_value = smoothed[r, c]
                best = (r, c)
        return best

    for start_row in range(size):
        for start_col in range(size):
            if labels[start_row, start_col] != -1:
                continue
            path = []
            cur = (start_row, start_col)
            while labels[cur] == -1:
                path.append(cur)
                nxt = successor(*cur)
                if nxt is None:
                    label = peak_id.get(cur, 0)
                    break
                cur = nxt
            else:
                label = labels[cur]
            for visited in path:
                labels[visited] = label
    return labels
