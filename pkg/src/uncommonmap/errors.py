"""Exception types shared across the pipeline."""


class ImageFormatError(ValueError):
    """The file is not a readable image in a supported format."""


class DimensionError(ValueError):
    """The image is too small for the requested operation."""


class DegenerateInputError(ValueError):
    """The input carries no usable structure (no pixel pairs, no histogram peaks)."""


class UndefinedRatesError(ValueError):
    """Concurrence rates were requested but no predictions were scored."""
