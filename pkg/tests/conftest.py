from __future__ import annotations

import numpy as np
import pytest

WHITE_PATCH = (40, 44, 8)  # top row, left col, side
DARK_PATCH = (100, 140, 4)


def build_red_bed(seed: int, height: int = 144, width: int = 192, noise: float = 0.01):
    """Uniform red field with a white patch, a dark patch and sample noise.

    Returns (image, white_center_xy, dark_center_xy).
    """
    rng = np.random.default_rng(seed)
    img = np.zeros((height, width, 3))
    img[:] = (0.80, 0.20, 0.10)
    wy, wx, ws = WHITE_PATCH
    img[wy : wy + ws, wx : wx + ws] = (1.0, 1.0, 1.0)
    dy, dx, ds = DARK_PATCH
    img[dy : dy + ds, dx : dx + ds] = (0.10, 0.02, 0.02)
    img = np.clip(img + rng.normal(0.0, noise, img.shape), 0.0, 1.0)
    return img, (wx + ws // 2, wy + ws // 2), (dx + ds // 2, dy + ds // 2)


@pytest.fixture
def red_bed():
    return build_red_bed(seed=0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
