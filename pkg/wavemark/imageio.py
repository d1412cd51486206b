"""Grayscale image container and 8-bit codecs.

Pixels are held as float64 in the nominal range [0, 1] (MAX = 1.0). Quantization to 8 bits
happens only at save time and uses round-half-up.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np
from PIL import Image, UnidentifiedImageError
from scipy import ndimage

from .errors import (
    CorruptImageError,
    ImageNotFoundError,
    ImageWriteError,
    InvalidDimensionsError,
    InvalidParamError,
    UnsupportedFormatError,
)

logger = logging.getLogger(__name__)

ResizeMethod = Literal["nearest", "bilinear"]

# Pillow reports PGM/PPM files as "PPM"
READABLE_FORMATS = {"PPM", "PNG", "JPEG"}
SIXTEEN_BIT_MODES = {"I", "I;16", "I;16B", "I;16L", "I;16N", "F"}
PGM_SUFFIXES = {".pgm"}
PNG_SUFFIXES = {".png"}
JPEG_SUFFIXES = {".jpg", ".jpeg"}


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Immutable row-major luminance matrix."""

    data: np.ndarray

    def __post_init__(self) -> None:
        pixels = np.array(self.data, dtype=np.float64)
        if pixels.ndim != 2:
            raise InvalidDimensionsError(f"expected a 2D pixel matrix, got {pixels.ndim} dimensions")
        height, width = pixels.shape
        if width < 2 or height < 2:
            raise InvalidDimensionsError(f"image must be at least 2x2, got {width}x{height}")
        pixels.setflags(write=False)
        object.__setattr__(self, "data", pixels)

    @classmethod
    def from_uint8(cls, values: np.ndarray) -> "GrayImage":
        return cls(np.asarray(values, dtype=np.uint8).astype(np.float64) / 255.0)

    @classmethod
    def constant(cls, height: int, width: int, value: float) -> "GrayImage":
        return cls(np.full((height, width), value, dtype=np.float64))

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def clamped(self) -> "GrayImage":
        return GrayImage(np.clip(self.data, 0.0, 1.0))

    def to_uint8(self) -> np.ndarray:
        """Quantize to 8 bits: round(clamp(sample, 0, 1) * 255), halves rounded up."""
        return np.floor(np.clip(self.data, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)

    def quantized(self) -> "GrayImage":
        """The image as it would read back after an 8-bit save."""
        return GrayImage.from_uint8(self.to_uint8())


def load_image(path: str | Path) -> GrayImage:
    """Load a PGM, PNG or JPEG file as a normalized grayscale image.

    Color inputs are reduced to luminance with ITU-R BT.601 weights (Pillow's "L" conversion).

    Args:
        path: Image file path

    Returns:
        GrayImage with samples equal to stored 8-bit value / 255
    """
    path = Path(path)
    if not path.is_file():
        raise ImageNotFoundError(f"image not found: {path}")

    try:
        with Image.open(path) as im:
            if im.format not in READABLE_FORMATS:
                raise UnsupportedFormatError(f"{path}: unsupported image format {im.format}")
            if im.mode in SIXTEEN_BIT_MODES:
                raise UnsupportedFormatError(f"{path}: only 8-bit images are supported, got mode {im.mode}")
            im.load()
            if im.mode != "L":
                logger.debug(f"Converting {path.name} from {im.mode} to luminance")
                im = im.convert("L")
            pixels = np.asarray(im, dtype=np.uint8)
    except UnidentifiedImageError as e:
        raise UnsupportedFormatError(f"{path}: not a PGM, PNG or JPEG image") from e
    except (OSError, SyntaxError, ValueError) as e:
        raise CorruptImageError(f"{path}: {e}") from e

    return GrayImage.from_uint8(pixels)


def encode_pgm(img: GrayImage) -> bytes:
    """Binary PGM (P5, maxval 255) with a fixed single-space header."""
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.to_uint8().tobytes()


def save_image(img: GrayImage, path: str | Path, jpeg_quality: int = 95) -> None:
    """Write an image as 8-bit grayscale, format chosen by file suffix.

    Samples are clamped to [0, 1] and stored as round(sample * 255).
    """
    path = Path(path)
    suffix = path.suffix.lower()

    try:
        if suffix in PGM_SUFFIXES:
            path.write_bytes(encode_pgm(img))
        elif suffix in PNG_SUFFIXES:
            Image.fromarray(img.to_uint8()).save(path, format="PNG")
        elif suffix in JPEG_SUFFIXES:
            Image.fromarray(img.to_uint8()).save(path, format="JPEG", quality=jpeg_quality)
        else:
            raise UnsupportedFormatError(f"{path}: cannot write '{suffix}', use .pgm, .png or .jpg")
    except OSError as e:
        raise ImageWriteError(f"failed to write {path}: {e}") from e

    logger.debug(f"Wrote {img.width}x{img.height} image to {path}")


def _source_coords(src_size: int, dst_size: int) -> np.ndarray:
    # Pixel-center alignment: dst center i maps to src coordinate (i + 0.5) * scale - 0.5
    scale = src_size / dst_size
    return (np.arange(dst_size, dtype=np.float64) + 0.5) * scale - 0.5


def resize(img: GrayImage, new_width: int, new_height: int, method: ResizeMethod = "bilinear") -> GrayImage:
    """Resample to new dimensions with edge-clamped nearest or bilinear sampling."""
    if new_width < 2 or new_height < 2:
        raise InvalidDimensionsError(f"resize target must be at least 2x2, got {new_width}x{new_height}")
    if (new_height, new_width) == img.shape:
        return img

    rows = _source_coords(img.height, new_height)
    cols = _source_coords(img.width, new_width)

    if method == "nearest":
        row_idx = np.clip(np.floor(rows + 0.5).astype(int), 0, img.height - 1)
        col_idx = np.clip(np.floor(cols + 0.5).astype(int), 0, img.width - 1)
        return GrayImage(img.data[np.ix_(row_idx, col_idx)])

    if method == "bilinear":
        grid = np.meshgrid(rows, cols, indexing="ij")
        return GrayImage(ndimage.map_coordinates(img.data, grid, order=1, mode="nearest"))

    raise InvalidParamError(f"unknown resize method '{method}', expected nearest or bilinear")
