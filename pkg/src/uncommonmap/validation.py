"""Input validation helpers for array-facing entry points."""

from __future__ import annotations

import numpy as np


def check_rgb_image(X, name: str = "X") -> np.ndarray:
    """Coerce one image to (H, W, 3) float64 in [0, 1].

    Accepts float arrays already in the unit interval and integer arrays
    (interpreted as 8-bit samples and divided by 255).
    """
    arr = np.asarray(X)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"{name} must have shape (H, W, 3), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be non-empty, got shape {arr.shape}")
    if np.issubdtype(arr.dtype, np.integer):
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError(f"{name}: integer samples must lie in [0, 255]")
        return arr.astype(float) / 255.0
    arr = arr.astype(float)
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite samples")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError(f"{name}: float samples must lie in [0, 1]")
    return arr


def check_image_batch(X, name: str = "X") -> list[np.ndarray]:
    """Coerce a batch (4-D array or sequence of images) to a list of images."""
    if isinstance(X, np.ndarray) and X.ndim == 4:
        return [check_rgb_image(X[i], f"{name}[{i}]") for i in range(X.shape[0])]
    if isinstance(X, (list, tuple)):
        return [check_rgb_image(item, f"{name}[{i}]") for i, item in enumerate(X)]
    raise ValueError(
        f"{name} must be a (N, H, W, 3) array or a sequence of (H, W, 3) images"
    )


def is_single_image(X) -> bool:
    return isinstance(X, np.ndarray) and X.ndim == 3
