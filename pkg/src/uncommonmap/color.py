"""RGB to hue / saturation / intensity decomposition.

The triangle color model is used: intensity is the channel mean, saturation
is 1 - min/mean, and hue is the angle of the pixel around the achromatic
axis measured from the red direction, stored on [0, 1). Hue is pinned to 0
wherever it is undefined (achromatic or black pixels) so downstream
segmentation stays deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_TWO_PI = 2.0 * np.pi
_SQRT3_HALF = np.sqrt(3.0) / 2.0


@dataclass(frozen=True)
class HsiPlanes:
    """The three single-channel planes produced from one RGB image."""

    hue: np.ndarray
    saturation: np.ndarray
    intensity: np.ndarray

    def __iter__(self):
        return iter((self.hue, self.saturation, self.intensity))


def rgb_to_hsi(img: np.ndarray) -> HsiPlanes:
    """Convert a (H, W, 3) RGB image in [0, 1] to its HSI planes.

    Per pixel: I = (R + G + B) / 3, S = 1 - min(R, G, B) / I (0 at black),
    and H = atan2(sqrt(3)/2 * (G - B), R - (G + B) / 2) / (2 pi), wrapped to
    [0, 1). H is 0 by convention when S = 0 or I = 0.
    """
    arr = np.asarray(img, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected a (H, W, 3) image, got shape {arr.shape}")

    r, g, b = arr[..., 0], arr[..., 1], arr[..., 2]
    intensity = np.clip((r + g + b) / 3.0, 0.0, 1.0)

    lowest = np.minimum(np.minimum(r, g), b)
    safe = np.where(intensity > 0, intensity, 1.0)
    saturation = np.where(intensity > 0, 1.0 - lowest / safe, 0.0)
    achromatic = (r == g) & (g == b)
    saturation = np.clip(np.where(achromatic, 0.0, saturation), 0.0, 1.0)

    alpha = r - 0.5 * (g + b)
    beta = _SQRT3_HALF * (g - b)
    hue = np.mod(np.arctan2(beta, alpha) / _TWO_PI, 1.0)
    hue = np.where(hue >= 1.0, 0.0, hue)  # mod can round up to 1.0 for tiny negatives
    hue = np.where((saturation == 0.0) | (intensity == 0.0), 0.0, hue)

    return HsiPlanes(hue=hue, saturation=saturation, intensity=intensity)
