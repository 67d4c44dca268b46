"""Truncated Gaussian smoothing with border renormalization."""

from __future__ import annotations

import math

import numpy as np


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian kernel truncated at radius ceil(3 * sigma)."""
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    if sigma == 0:
        return np.ones(1)
    radius = math.ceil(3.0 * sigma)
    x = np.arange(-radius, radius + 1, dtype=float)
    kernel = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return kernel / kernel.sum()


def _correlate1d(arr: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    # Zero-padded correlation; the kernel is symmetric so this equals convolution.
    radius = kernel.size // 2
    pad = [(0, 0)] * arr.ndim
    pad[axis] = (radius, radius)
    padded = np.pad(arr, pad, mode="constant")
    windows = np.lib.stride_tricks.sliding_window_view(padded, kernel.size, axis=axis)
    return windows @ kernel


def gaussian_smooth(arr: np.ndarray, sigma: float) -> np.ndarray:
    """Smooth a 2-D grid with an isotropic truncated Gaussian.

    Near the borders the kernel is renormalized over the in-bounds samples,
    so every output value is a convex combination of input values and the
    output range never leaves [min(arr), max(arr)]. Constant grids are
    returned unchanged; that combination is exact.
    """
    arr = np.asarray(arr, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D grid, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("cannot smooth an empty grid")
    if sigma == 0 or np.all(arr == arr.flat[0]):
        return arr.copy()
    kernel = gaussian_kernel(sigma)
    num = _correlate1d(_correlate1d(arr, kernel, 0), kernel, 1)
    coverage = _correlate1d(_correlate1d(np.ones_like(arr), kernel, 0), kernel, 1)
    return num / coverage
