"""Single-level 2D DWT with orthonormal Daubechies filters and periodic boundaries.

For a 2x2 block [[a, b], [c, d]] under Haar the planes are
ca = (a+b+c+d)/2, ch = (a+b-c-d)/2, cv = (a-b+c-d)/2, cd = (a-b-c+d)/2.
"""

from dataclasses import dataclass
from enum import StrEnum

import numpy as np
import pywt

from .errors import InvalidParamError, MismatchedPlanesError, OddDimensionsError
from .imageio import GrayImage

# Periodization halves each axis exactly and keeps the transform orthonormal
BOUNDARY_MODE = "periodization"


class WaveletKind(StrEnum):
    HAAR = "haar"
    DB2 = "db2"

    @classmethod
    def parse(cls, value: "str | WaveletKind") -> "WaveletKind":
        try:
            return cls(str(value).lower())
        except ValueError as e:
            choices = ", ".join(kind.value for kind in cls)
            raise InvalidParamError(f"unknown wavelet '{value}', expected one of: {choices}") from e

    @property
    def filter_bank(self) -> pywt.Wavelet:
        return pywt.Wavelet(self.value)


@dataclass(frozen=True, eq=False)
class SubbandSet:
    """The four level-1 coefficient planes of one image."""

    ca: np.ndarray
    ch: np.ndarray
    cv: np.ndarray
    cd: np.ndarray

    def __post_init__(self) -> None:
        planes = [np.array(p, dtype=np.float64) for p in (self.ca, self.ch, self.cv, self.cd)]
        shapes = {p.shape for p in planes}
        if len(shapes) != 1 or planes[0].ndim != 2:
            raise MismatchedPlanesError(f"subband planes must share one 2D shape, got {sorted(shapes)}")
        for name, plane in zip(("ca", "ch", "cv", "cd"), planes, strict=True):
            plane.setflags(write=False)
            object.__setattr__(self, name, plane)

    @property
    def shape(self) -> tuple[int, int]:
        return self.ca.shape

    def energy(self) -> float:
        return float(sum(np.sum(p**2) for p in (self.ca, self.ch, self.cv, self.cd)))


def dwt2(img: GrayImage, kind: WaveletKind = WaveletKind.HAAR) -> SubbandSet:
    """Forward single-level transform of an even-sized image."""
    if img.width % 2 or img.height % 2:
        raise OddDimensionsError(f"DWT needs even dimensions, got {img.width}x{img.height}")

    ca, (ch, cv, cd) = pywt.dwt2(img.data, kind.filter_bank, mode=BOUNDARY_MODE)
    return SubbandSet(ca=ca, ch=ch, cv=cv, cd=cd)


def idwt2(bands: SubbandSet, kind: WaveletKind = WaveletKind.HAAR) -> GrayImage:
    """Inverse transform. The result is not clamped to [0, 1]."""
    pixels = pywt.idwt2((bands.ca, (bands.ch, bands.cv, bands.cd)), kind.filter_bank, mode=BOUNDARY_MODE)
    return GrayImage(pixels)
