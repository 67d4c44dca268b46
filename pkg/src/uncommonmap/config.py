"""Pipeline configuration shared by the library, the estimator and the CLI."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields


@dataclass(frozen=True)
class PipelineConfig:
    """Every tunable of the detection pipeline, with its default.

    downsample_factor / crop_width / crop_height describe the preprocessing
    applied to raw captures before analysis; the remaining fields drive the
    per-channel segmentation, the interest map and point extraction, and the
    concurrence scoring radius.
    """

    downsample_factor: int = 2
    crop_width: int = 192
    crop_height: int = 144
    quantization_bins: int = 64
    histogram_sigma: float = 1.0
    min_peak_fraction: float = 1e-4
    max_classes: int = 8
    blur_width: int = 10
    top_k: int = 3
    suppression_radius: float = 10.0
    match_radius: float = 10.0

    def __post_init__(self) -> None:
        for name in (
            "downsample_factor",
            "crop_width",
            "crop_height",
            "quantization_bins",
            "histogram_sigma",
            "min_peak_fraction",
            "max_classes",
            "blur_width",
            "top_k",
            "suppression_radius",
            "match_radius",
        ):
            value = getattr(self, name)
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if self.quantization_bins < 2:
            raise ValueError(
                f"quantization_bins must be at least 2, got {self.quantization_bins}"
            )
        if self.max_classes > 8:
            # Classes ranked 9th or lower are treated as noise, so allowing a
            # larger cap would silently change the meaning of the uncommon map.
            raise ValueError(f"max_classes must be at most 8, got {self.max_classes}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)
