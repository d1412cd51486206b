"""Fidelity and similarity scores on normalized images (MAX = 1)."""

import math
from enum import StrEnum

import numpy as np

from .errors import DimensionMismatchError, InvalidParamError
from .imageio import GrayImage


class SRMode(StrEnum):
    EXACT_8BIT = "exact8bit"
    BINARY = "binary"


def _require_same_shape(a: GrayImage, b: GrayImage) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"images differ in shape: {a.shape} vs {b.shape}")


def mse(a: GrayImage, b: GrayImage) -> float:
    _require_same_shape(a, b)
    return float(np.mean((a.data - b.data) ** 2))


def psnr_from_mse(value: float) -> float:
    """10 * log10(MAX^2 / MSE) with MAX = 1; infinite for zero error."""
    if value == 0:
        return math.inf
    return 10.0 * math.log10(1.0 / value)


def psnr(a: GrayImage, b: GrayImage) -> float:
    return psnr_from_mse(mse(a, b))


def _levels(img: GrayImage, mode: SRMode, threshold: float) -> np.ndarray:
    if mode == SRMode.EXACT_8BIT:
        return img.to_uint8()
    return np.clip(img.data, 0.0, 1.0) >= threshold


def similarity_ratio(
    extracted: GrayImage,
    reference: GrayImage,
    mode: SRMode | str = SRMode.EXACT_8BIT,
    threshold: float = 0.5,
) -> float:
    """SR = S / (S + D) over pixels whose quantized values match (S) or differ (D).

    ``exact8bit`` compares 8-bit renderings, ``binary`` compares samples thresholded at ``threshold``.
    """
    _require_same_shape(extracted, reference)
    mode = SRMode(mode)
    if not 0.0 <= threshold <= 1.0:
        raise InvalidParamError(f"SR threshold must lie in [0, 1], got {threshold}")

    matches = _levels(extracted, mode, threshold) == _levels(reference, mode, threshold)
    return float(np.count_nonzero(matches)) / matches.size


def format_db(value: float) -> str:
    """Decibel value for reports; identical images give the literal "inf"."""
    if math.isinf(value):
        return "inf"
    return f"{value:.4f}"


def parse_db(text: str) -> float:
    return math.inf if text == "inf" else float(text)
