"""Exception hierarchy for wavemark.

``ConfigError`` maps to CLI exit code 2, every other ``WavemarkError`` to exit code 3.
"""


class WavemarkError(Exception):
    """Base class for all wavemark errors."""


class ConfigError(WavemarkError):
    """Invalid configuration or command-line input."""


class ImageNotFoundError(WavemarkError, FileNotFoundError):
    """Image path does not exist."""


class UnsupportedFormatError(WavemarkError):
    """Image container or pixel mode is not PGM, PNG or JPEG at 8 bits."""


class CorruptImageError(WavemarkError):
    """Image file exists but cannot be decoded."""


class ImageWriteError(WavemarkError):
    """Image could not be written."""


class InvalidDimensionsError(WavemarkError):
    """Image or target dimensions are below the 2x2 minimum."""


class OddDimensionsError(WavemarkError):
    """Width or height is not divisible by 2."""


class MismatchedPlanesError(WavemarkError):
    """Subband planes do not share one shape."""


class DimensionMismatchError(WavemarkError):
    """Two images that must agree in shape do not."""


class WatermarkTooLargeError(WavemarkError):
    """Watermark window does not fit inside the subband at the given offset."""


class InvalidParamError(WavemarkError):
    """A numeric parameter is outside its valid range."""


class AttackEvaluationError(WavemarkError):
    """An attack row of an evaluation failed."""
