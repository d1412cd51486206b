"""Nested watermark construction and additive LL/HH embedding."""

import logging
import math
import numbers
from dataclasses import asdict, dataclass, replace
from typing import Any

import numpy as np

from .errors import DimensionMismatchError, InvalidParamError, WatermarkTooLargeError
from .imageio import GrayImage
from .wavelet import SubbandSet, WaveletKind, dwt2, idwt2

logger = logging.getLogger(__name__)


def _is_number(value: Any) -> bool:
    return isinstance(value, numbers.Real) and not isinstance(value, bool) and math.isfinite(value)


@dataclass(frozen=True)
class EmbedParams:
    """Embedding knobs: wavelet, per-band scaling factors and window origin."""

    wavelet: WaveletKind = WaveletKind.HAAR
    alpha_ll: float = 0.04
    alpha_hh: float = 0.01
    alpha_nest: float = 1.0
    offset_row: int = 0
    offset_col: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "wavelet", WaveletKind.parse(self.wavelet))

        for name in ("alpha_ll", "alpha_hh", "alpha_nest"):
            value = getattr(self, name)
            if not _is_number(value) or value < 0:
                raise InvalidParamError(f"{name} must be a finite value >= 0, got {value!r}")
            object.__setattr__(self, name, float(value))

        for name in ("offset_row", "offset_col"):
            value = getattr(self, name)
            if not _is_number(value) or int(value) != value or value < 0:
                raise InvalidParamError(f"{name} must be a non-negative integer, got {value!r}")
            object.__setattr__(self, name, int(value))

        # Low-frequency coefficients are larger, so the LL factor should be too
        if self.alpha_ll < self.alpha_hh:
            logger.warning(f"alpha_ll ({self.alpha_ll}) is smaller than alpha_hh ({self.alpha_hh})")

    def to_dict(self) -> dict[str, Any]:
        return {**asdict(self), "wavelet": self.wavelet.value}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "EmbedParams":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidParamError(f"unknown embedding parameters {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True, eq=False)
class NestedWatermark:
    """Primary watermark carrying the secondary in its horizontal-detail band."""

    image: GrayImage
    primary_dims: tuple[int, int]
    secondary_dims: tuple[int, int]

    def __post_init__(self) -> None:
        if self.image.shape != tuple(self.primary_dims):
            raise DimensionMismatchError(
                f"nested image {self.image.shape} does not match primary dims {self.primary_dims}"
            )
        expected = (self.primary_dims[0] // 2, self.primary_dims[1] // 2)
        if tuple(self.secondary_dims) != expected:
            raise DimensionMismatchError(f"secondary dims {self.secondary_dims} must be {expected}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.image.shape


def nest_watermarks(primary: GrayImage, secondary: GrayImage, params: EmbedParams) -> NestedWatermark:
    """Add the secondary watermark to the horizontal-detail band of the primary.

    The result is idwt2(cap, chp + alpha_nest * secondary, cvp, cdp).
    """
    bands = dwt2(primary, params.wavelet)
    if secondary.shape != bands.shape:
        raise DimensionMismatchError(
            f"secondary watermark must be half the primary per axis: expected {bands.shape}, got {secondary.shape}"
        )

    nested = idwt2(replace(bands, ch=bands.ch + params.alpha_nest * secondary.data), params.wavelet)
    return NestedWatermark(image=nested, primary_dims=primary.shape, secondary_dims=secondary.shape)


def embedding_window(
    subband_shape: tuple[int, int], wm_shape: tuple[int, int], params: EmbedParams
) -> tuple[slice, slice]:
    """Slices of a subband plane covered by the watermark at the configured offset."""
    rows = slice(params.offset_row, params.offset_row + wm_shape[0])
    cols = slice(params.offset_col, params.offset_col + wm_shape[1])
    if rows.stop > subband_shape[0] or cols.stop > subband_shape[1]:
        raise WatermarkTooLargeError(
            f"watermark {wm_shape[0]}x{wm_shape[1]} at offset ({params.offset_row}, {params.offset_col}) "
            f"does not fit subband {subband_shape[0]}x{subband_shape[1]}"
        )
    return rows, cols


def _watermark_pixels(watermark: NestedWatermark | GrayImage) -> np.ndarray:
    if isinstance(watermark, NestedWatermark):
        return watermark.image.data
    return watermark.data


def embed_into_cover(cover: GrayImage, nested: NestedWatermark | GrayImage, params: EmbedParams) -> GrayImage:
    """Embed a watermark additively into the LL and HH bands of the cover.

    Ca1 = ca1 + alpha_ll * W and Cd1 = cd1 + alpha_hh * W over the offset window. The
    horizontal and vertical bands are untouched and the output is not clamped.
    """
    bands = dwt2(cover, params.wavelet)
    pixels = _watermark_pixels(nested)
    window = embedding_window(bands.shape, pixels.shape, params)

    ca = bands.ca.copy()
    cd = bands.cd.copy()
    ca[window] += params.alpha_ll * pixels
    cd[window] += params.alpha_hh * pixels

    return idwt2(SubbandSet(ca=ca, ch=bands.ch, cv=bands.cv, cd=cd), params.wavelet)


def capacity_bits(cover: GrayImage, wm_dims: tuple[int, int], nested: bool) -> int:
    """Payload in bits: one per watermark pixel, doubled when a secondary is nested."""
    subband = (cover.height // 2, cover.width // 2)
    if wm_dims[0] > subband[0] or wm_dims[1] > subband[1]:
        raise WatermarkTooLargeError(
            f"watermark {wm_dims[0]}x{wm_dims[1]} does not fit subband {subband[0]}x{subband[1]}"
        )
    area = wm_dims[0] * wm_dims[1]
    return 2 * area if nested else area


def predicted_mse(cover_shape: tuple[int, int], watermark: NestedWatermark | GrayImage, params: EmbedParams) -> float:
    """Analytic MSE of embedding, exact for orthonormal filters with periodic boundaries.

    (alpha_ll^2 + alpha_hh^2) * mean(W^2) * wm_area / cover_area
    """
    pixels = _watermark_pixels(watermark)
    cover_area = cover_shape[0] * cover_shape[1]
    gain = params.alpha_ll**2 + params.alpha_hh**2
    return float(gain * np.mean(pixels**2) * pixels.size / cover_area)
