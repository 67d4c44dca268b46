"""Independent brute-force reference implementations used as test oracles.

Everything here is deliberately written the slow, obvious way and shares no
code with the package: scalar loops, direct formula transcriptions, and a
from-scratch PNG reader.
"""

from __future__ import annotations

import math
import struct
import zlib
from pathlib import Path

import numpy as np


def hsi_reference(r: float, g: float, b: float) -> tuple[float, float, float]:
    """Triangle-model HSI of one pixel, hue via the arccos formulation."""
    i = (r + g + b) / 3.0
    mn = min(r, g, b)
    s = 0.0 if i == 0 else 1.0 - mn / i
    if s == 0 or i == 0:
        h = 0.0
    else:
        num = 0.5 * ((r - g) + (r - b))
        den = math.sqrt((r - g) ** 2 + (r - b) * (g - b))
        theta = math.acos(max(-1.0, min(1.0, num / den)))
        h = theta / (2 * math.pi) if b <= g else 1.0 - theta / (2 * math.pi)
    return h, s, i


def gaussian_smooth_reference(arr: np.ndarray, sigma: float) -> np.ndarray:
    """Direct O(N^2 K^2) renormalized Gaussian smoothing."""
    arr = np.asarray(arr, dtype=float)
    if sigma == 0:
        return arr.copy()
    radius = math.ceil(3.0 * sigma)
    height, width = arr.shape
    out = np.zeros_like(arr)
    for y in range(height):
        for x in range(width):
            acc = 0.0
            weight_total = 0.0
            for dy in range(-radius, radius + 1):
                for dx in range(-radius, radius + 1):
                    yy, xx = y + dy, x + dx
                    if 0 <= yy < height and 0 <= xx < width:
                        w = math.exp(-(dy * dy + dx * dx) / (2.0 * sigma * sigma))
                        acc += w * arr[yy, xx]
                        weight_total += w
            out[y, x] = acc / weight_total
    return out


def cooccurrence_reference(quantized: np.ndarray, bins: int) -> np.ndarray:
    """Pair enumeration over explicit right/down adjacencies."""
    q = np.asarray(quantized)
    counts = np.zeros((bins, bins), dtype=np.int64)
    height, width = q.shape
    for y in range(height):
        for x in range(width):
            for dy, dx in ((0, 1), (1, 0)):
                yy, xx = y + dy, x + dx
                if yy < height and xx < width:
                    a, b = int(q[y, x]), int(q[yy, xx])
                    counts[a, b] += 1
                    counts[b, a] += 1
    return counts


def histogram_peaks_reference(
    bins_array: np.ndarray,
    total_pairs: int,
    sigma: float,
    min_fraction: float,
) -> list[tuple[int, int]]:
    """Scan every bin of the brute-force smoothed histogram for peaks."""
    smoothed = gaussian_smooth_reference(bins_array.astype(float), sigma)
    threshold = min_fraction * total_pairs
    size = smoothed.shape[0]
    peaks = []
    for y in range(size):
        for x in range(size):
            value = smoothed[y, x]
            if value < threshold:
                continue
            strict_max = True
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    if dy == 0 and dx == 0:
                        continue
                    yy, xx = y + dy, x + dx
                    if 0 <= yy < size and 0 <= xx < size and smoothed[yy, xx] >= value:
                        strict_max = False
            if strict_max:
                peaks.append((y, x))
    peaks.sort(key=lambda p: (-smoothed[p[0], p[1]], p[0], p[1]))
    return peaks


def greedy_points_reference(
    score_map: np.ndarray, k: int, suppression_radius: float
) -> list[tuple[int, int, float]]:
    """Naive greedy top-k with strict-distance suppression."""
    grid = np.asarray(score_map, dtype=float)
    height, width = grid.shape
    excluded = np.zeros(grid.shape, dtype=bool)
    points = []
    for _ in range(k):
        best = None
        for y in range(height):
            for x in range(width):
                if excluded[y, x]:
                    continue
                if best is None or grid[y, x] > grid[best[0], best[1]]:
                    best = (y, x)
        if best is None:
            break
        by, bx = best
        points.append((bx, by, float(grid[by, bx])))
        for y in range(height):
            for x in range(width):
                if (y - by) ** 2 + (x - bx) ** 2 < suppression_radius**2:
                    excluded[y, x] = True
    return points


def decode_png_rgb8(path: str | Path) -> np.ndarray:
    """Minimal PNG reader for 8-bit non-interlaced RGB images.

    Implements just the signature / IHDR / IDAT parsing and the five
    scanline filters, independently of any imaging library.
    """
    data = Path(path).read_bytes()
    if data[:8] != b"\x89PNG\r\n\x1a\n":
        raise ValueError("not a PNG file")

    pos = 8
    width = height = None
    idat = b""
    while pos < len(data):
        (length,) = struct.unpack(">I", data[pos : pos + 4])
        chunk_type = data[pos + 4 : pos + 8]
        chunk = data[pos + 8 : pos + 8 + length]
        pos += 12 + length
        if chunk_type == b"IHDR":
            width, height, bit_depth, color_type, _, _, interlace = struct.unpack(
                ">IIBBBBB", chunk
            )
            if bit_depth != 8 or color_type != 2 or interlace != 0:
                raise ValueError("oracle only reads 8-bit non-interlaced RGB PNGs")
        elif chunk_type == b"IDAT":
            idat += chunk
        elif chunk_type == b"IEND":
            break
    if width is None:
        raise ValueError("missing IHDR")

    raw = zlib.decompress(idat)
    stride = width * 3
    out = np.zeros((height, width, 3), dtype=np.uint8)
    previous = bytearray(stride)
    offset = 0
    for row in range(height):
        filter_type = raw[offset]
        line = bytearray(raw[offset + 1 : offset + 1 + stride])
        offset += 1 + stride
        recon = bytearray(stride)
        for i in range(stride):
            x = line[i]
            left = recon[i - 3] if i >= 3 else 0
            up = previous[i]
            up_left = previous[i - 3] if i >= 3 else 0
            if filter_type == 0:
                value = x
            elif filter_type == 1:
                value = x + left
            elif filter_type == 2:
                value = x + up
            elif filter_type == 3:
                value = x + (left + up) // 2
            elif filter_type == 4:
                value = x + _paeth(left, up, up_left)
            else:
                raise ValueError(f"unknown PNG filter {filter_type}")
            recon[i] = value & 0xFF
        out[row] = np.frombuffer(bytes(recon), dtype=np.uint8).reshape(width, 3)
        previous = recon
    return out


def _paeth(a: int, b: int, c: int) -> int:
    p = a + b - c
    pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
    if pa <= pb and pa <= pc:
        return a
    if pb <= pc:
        return b
    return c
