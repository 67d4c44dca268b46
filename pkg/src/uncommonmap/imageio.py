"""Image loading, saving, field preprocessing and overlay rendering.

Images are numpy float64 arrays with samples in [0, 1]: shape (H, W, 3)
for color images and (H, W) for single planes. 8-bit files are mapped to
the unit interval by v / 255 on load, and back by round(v * 255) on save,
so a load / save / load cycle is pixel exact.

Supported formats are binary PPM (P6), binary PGM (P5) and PNG. PPM is
the byte-exact reference format; PNG goes through Pillow.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DimensionError, ImageFormatError

SUPPORTED_EXTENSIONS = (".ppm", ".pgm", ".png")

# Fig-style marker geometry: hollow green squares for the reported (blurred
# scale) points, hollow green circles for the raw 1-pixel-scale points.
MARKER_COLOR = (0.0, 1.0, 0.0)
SQUARE_SIDE = 11
CIRCLE_RADIUS = 5


def load_image(path: str | Path) -> np.ndarray:
    """Load a PPM, PGM or PNG file as a (H, W, 3) float array in [0, 1].

    Grayscale inputs are replicated across the three channels. Raises
    FileNotFoundError / OSError for unreadable files and ImageFormatError
    for unsupported or corrupt content; both name the offending path.
    """
    p = Path(path)
    suffix = p.suffix.lower()
    if suffix not in SUPPORTED_EXTENSIONS:
        raise ImageFormatError(
            f"{p}: unsupported image format {suffix!r}, expected one of "
            f"{', '.join(SUPPORTED_EXTENSIONS)}"
        )
    if suffix == ".png":
        try:
            with Image.open(p) as im:
                arr = np.asarray(im.convert("RGB"), dtype=float) / 255.0
        except UnidentifiedImageError as exc:
            raise ImageFormatError(f"{p}: not a readable PNG image") from exc
        return arr
    arr, _ = _parse_pnm(p.read_bytes(), p)
    if arr.ndim == 2:
        arr = np.repeat(arr[:, :, None], 3, axis=2)
    return arr


def save_image(path: str | Path, img: np.ndarray) -> None:
    """Write a float image in [0, 1] as 8-bit PPM, PGM or PNG by extension."""
    p = Path(path)
    suffix = p.suffix.lower()
    arr = np.asarray(img, dtype=float)
    if suffix == ".ppm":
        write_ppm(p, arr)
    elif suffix == ".pgm":
        if arr.ndim != 2:
            raise ValueError(f"PGM output needs a single plane, got shape {arr.shape}")
        data = _to_uint8(arr)
        header = f"P5\n{arr.shape[1]} {arr.shape[0]}\n255\n".encode("ascii")
        p.write_bytes(header + data.tobytes())
    elif suffix == ".png":
        if arr.ndim == 2:
            Image.fromarray(_to_uint8(arr), mode="L").save(p)
        else:
            Image.fromarray(_to_uint8(_check_rgb(arr)), mode="RGB").save(p)
    else:
        raise ImageFormatError(f"{p}: unsupported output format {suffix!r}")


def write_ppm(path: str | Path, img: np.ndarray) -> None:
    """Write a 3-channel float image in [0, 1] as binary 8-bit PPM (P6)."""
    arr = _check_rgb(np.asarray(img, dtype=float))
    data = _to_uint8(arr)
    header = f"P6\n{arr.shape[1]} {arr.shape[0]}\n255\n".encode("ascii")
    Path(path).write_bytes(header + data.tobytes())


def write_scaled_pgm16(path: str | Path, values: np.ndarray) -> float:
    """Write a non-negative 2-D map as a 16-bit PGM, scaled to use full range.

    Returns the scale factor applied (output = round(value * scale)), so the
    caller can record it next to the file.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D map, got shape {arr.shape}")
    if arr.size == 0 or arr.min() < 0:
        raise ValueError("map must be non-empty and non-negative")
    peak = float(arr.max())
    scale = 65535.0 / peak if peak > 0 else 1.0
    data = np.rint(arr * scale).astype(">u2")
    header = f"P5\n{arr.shape[1]} {arr.shape[0]}\n65535\n".encode("ascii")
    Path(path).write_bytes(header + data.tobytes())
    return scale


def read_pnm(path: str | Path) -> tuple[np.ndarray, int]:
    """Read a binary PNM (P5/P6) file.

    Returns (array, max_value) with the array already scaled to [0, 1];
    shape is (H, W) for P5 and (H, W, 3) for P6.
    """
    p = Path(path)
    return _parse_pnm(p.read_bytes(), p)


def preprocess(
    img: np.ndarray,
    downsample_factor: int = 2,
    crop_width: int = 192,
    crop_height: int = 144,
) -> np.ndarray:
    """Downsample by block averaging, then center-crop to the working frame.

    Each factor x factor block is averaged (rows/columns that do not fill a
    whole block are dropped), then a crop_width x crop_height window is taken
    with floor((dim - crop) / 2) offsets. Raises DimensionError when the
    downsampled image is smaller than the crop.
    """
    if int(downsample_factor) != downsample_factor or downsample_factor < 1:
        raise ValueError(f"downsample_factor must be a positive integer, got {downsample_factor}")
    if crop_width < 1 or crop_height < 1:
        raise ValueError("crop dimensions must be positive")
    arr = np.asarray(img, dtype=float)
    if arr.ndim not in (2, 3):
        raise ValueError(f"expected an image array, got shape {arr.shape}")

    f = int(downsample_factor)
    if f > 1:
        h2, w2 = arr.shape[0] // f, arr.shape[1] // f
        if h2 == 0 or w2 == 0:
            raise DimensionError(
                f"image {arr.shape[1]}x{arr.shape[0]} vanishes at downsample factor {f}"
            )
        trimmed = arr[: h2 * f, : w2 * f]
        if arr.ndim == 3:
            arr = trimmed.reshape(h2, f, w2, f, arr.shape[2]).mean(axis=(1, 3))
        else:
            arr = trimmed.reshape(h2, f, w2, f).mean(axis=(1, 3))

    height, width = arr.shape[0], arr.shape[1]
    if width < crop_width or height < crop_height:
        raise DimensionError(
            f"downsampled image {width}x{height} is smaller than the "
            f"{crop_width}x{crop_height} crop"
        )
    x0 = (width - crop_width) // 2
    y0 = (height - crop_height) // 2
    return arr[y0 : y0 + crop_height, x0 : x0 + crop_width].copy()


def square_perimeter_offsets(side: int = SQUARE_SIDE) -> list[tuple[int, int]]:
    """(dy, dx) offsets of the hollow square marker, centered on the point."""
    half = side // 2
    return [
        (dy, dx)
        for dy in range(-half, half + 1)
        for dx in range(-half, half + 1)
        if max(abs(dy), abs(dx)) == half
    ]


def circle_ring_offsets(radius: int = CIRCLE_RADIUS) -> list[tuple[int, int]]:
    """(dy, dx) offsets of the hollow circle marker, centered on the point."""
    return [
        (dy, dx)
        for dy in range(-radius, radius + 1)
        for dx in range(-radius, radius + 1)
        if round(math.hypot(dy, dx)) == radius
    ]


def render_overlay(img: np.ndarray, points) -> np.ndarray:
    """Return a copy of the image with interest point markers drawn in.

    Blurred-scale points become hollow squares (side 11), raw-scale points
    hollow circles (radius 5), both in the fixed marker color. Marker arms
    are clipped at the borders; `points` must expose `blurred_points` and
    `raw_points` with integer `x` / `y` inside the image. The input image
    is never modified.
    """
    arr = _check_rgb(np.asarray(img, dtype=float))
    height, width = arr.shape[0], arr.shape[1]
    blurred = list(points.blurred_points)
    raw = list(points.raw_points)
    for point in blurred + raw:
        if not (0 <= point.x < width and 0 <= point.y < height):
            raise ValueError(
                f"point ({point.x}, {point.y}) outside image bounds {width}x{height}"
            )
    out = arr.copy()
    color = np.array(MARKER_COLOR)
    for point, offsets in [(p, square_perimeter_offsets()) for p in blurred] + [
        (p, circle_ring_offsets()) for p in raw
    ]:
        for dy, dx in offsets:
            y, x = point.y + dy, point.x + dx
            if 0 <= y < height and 0 <= x < width:
                out[y, x] = color
    return out


def _check_rgb(arr: np.ndarray) -> np.ndarray:
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected a (H, W, 3) image, got shape {arr.shape}")
    return arr


def _to_uint8(arr: np.ndarray) -> np.ndarray:
    return np.rint(np.clip(arr, 0.0, 1.0) * 255.0).astype(np.uint8)


def _parse_pnm(data: bytes, path: Path) -> tuple[np.ndarray, int]:
    if len(data) < 2 or data[:2] not in (b"P5", b"P6"):
        raise ImageFormatError(f"{path}: not a binary PGM/PPM (P5/P6) file")
    channels = 3 if data[:2] == b"P6" else 1

    pos = 2
    fields: list[int] = []
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            newline = data.find(b"\n", pos)
            if newline == -1:
                raise ImageFormatError(f"{path}: unterminated comment in header")
            pos = newline + 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        token = data[start:pos]
        if not token.isdigit():
            raise ImageFormatError(f"{path}: malformed header token {token!r}")
        fields.append(int(token))
    pos += 1  # the single whitespace byte separating header and raster

    width, height, maxval = fields
    if width < 1 or height < 1:
        raise ImageFormatError(f"{path}: invalid dimensions {width}x{height}")
    if not 0 < maxval < 65536:
        raise ImageFormatError(f"{path}: invalid maxval {maxval}")
    bytes_per_sample = 1 if maxval < 256 else 2
    count = width * height * channels
    expected = count * bytes_per_sample
    if len(data) - pos < expected:
        raise ImageFormatError(f"{path}: truncated raster data")
    dtype = np.dtype(">u2") if bytes_per_sample == 2 else np.dtype(np.uint8)
    values = np.frombuffer(data, dtype=dtype, count=count, offset=pos)
    arr = values.astype(float) / float(maxval)
    if channels == 3:
        return arr.reshape(height, width, 3), maxval
    return arr.reshape(height, width), maxval
