"""Deterministic image attacks used to test watermark robustness.

Every attack clamps its input to [0, 1] first and returns samples in [0, 1].
"""

import io
import logging
import math
import numbers
from collections.abc import Callable
from dataclasses import dataclass, field, replace
from enum import StrEnum
from typing import Any

import numpy as np
from PIL import Image
from scipy import ndimage

from . import imageio
from .errors import InvalidParamError
from .imageio import GrayImage
from .metrics import psnr

logger = logging.getLogger(__name__)


class AttackKind(StrEnum):
    IDENTITY = "identity"
    INTENSITY_ADJUST = "intensity_adjust"
    GAMMA_CORRECTION = "gamma_correction"
    HIST_EQ = "hist_eq"
    LOW_PASS = "low_pass"
    RESIZE = "resize"
    GAUSSIAN_NOISE = "gaussian_noise"
    HIGH_PASS = "high_pass"
    JPEG = "jpeg"

    @property
    def display_name(self) -> str:
        return ATTACK_TITLES[self]


ATTACK_TITLES = {
    AttackKind.IDENTITY: "Identity",
    AttackKind.INTENSITY_ADJUST: "Intensity Adjustment",
    AttackKind.GAMMA_CORRECTION: "Gamma Correction",
    AttackKind.HIST_EQ: "Histogram Equalization",
    AttackKind.LOW_PASS: "Low Pass Filter",
    AttackKind.RESIZE: "Resizing",
    AttackKind.GAUSSIAN_NOISE: "Gaussian Noise",
    AttackKind.HIGH_PASS: "High Pass Filter",
    AttackKind.JPEG: "JPEG Compression",
}

DEFAULT_PARAMS: dict[AttackKind, dict[str, float]] = {
    AttackKind.IDENTITY: {},
    AttackKind.INTENSITY_ADJUST: {"gamma": 1.5},
    AttackKind.GAMMA_CORRECTION: {"low_in": 0.0, "high_in": 0.8, "low_out": 0.0, "high_out": 1.0},
    AttackKind.HIST_EQ: {"levels": 256},
    AttackKind.LOW_PASS: {"size": 3},
    AttackKind.RESIZE: {"scale": 0.5},
    AttackKind.GAUSSIAN_NOISE: {"mean": 0.0, "variance": 0.001},
    AttackKind.HIGH_PASS: {"alpha": 0.6},
    AttackKind.JPEG: {"quality": 75},
}

# Row order of the published robustness table
DEFAULT_MATRIX_ORDER = [
    AttackKind.INTENSITY_ADJUST,
    AttackKind.GAMMA_CORRECTION,
    AttackKind.HIST_EQ,
    AttackKind.LOW_PASS,
    AttackKind.RESIZE,
    AttackKind.GAUSSIAN_NOISE,
    AttackKind.HIGH_PASS,
    AttackKind.JPEG,
]


@dataclass(frozen=True)
class AttackSpec:
    """One attack with its parameters. Missing parameters take the defaults."""

    kind: AttackKind
    params: dict[str, float] = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self) -> None:
        try:
            kind = AttackKind(self.kind)
        except ValueError as e:
            raise InvalidParamError(f"unknown attack '{self.kind}'") from e

        defaults = DEFAULT_PARAMS[kind]
        unknown = set(self.params) - set(defaults)
        if unknown:
            raise InvalidParamError(f"{kind.value}: unknown parameters {sorted(unknown)}")

        params = {}
        for name, default in defaults.items():
            value = self.params.get(name, default)
            if isinstance(value, bool) or not isinstance(value, numbers.Real) or not math.isfinite(value):
                raise InvalidParamError(f"{kind.value}: parameter {name} must be a finite number, got {value!r}")
            params[name] = float(value)

        if self.seed is not None and (
            isinstance(self.seed, bool) or not isinstance(self.seed, numbers.Integral) or self.seed < 0
        ):
            raise InvalidParamError(f"{kind.value}: seed must be a non-negative integer, got {self.seed!r}")

        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "seed", None if self.seed is None else int(self.seed))

    @property
    def name(self) -> str:
        return self.kind.value

    @property
    def label(self) -> str:
        """Compact parameter rendering, e.g. ``mean=0;variance=0.001``."""
        return ";".join(f"{name}={value:g}" for name, value in self.params.items())

    def with_seed(self, seed: int) -> "AttackSpec":
        return replace(self, seed=seed)

    def with_params(self, **params: float) -> "AttackSpec":
        return replace(self, params={**self.params, **params})

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "params": dict(self.params), "seed": self.seed}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "AttackSpec":
        return cls(kind=data["kind"], params=dict(data.get("params", {})), seed=data.get("seed"))


def default_attack_matrix(seed: int | None = None, jpeg_quality: int = 75) -> list[AttackSpec]:
    """The eight attacks of the robustness table at their published settings."""
    matrix = []
    for kind in DEFAULT_MATRIX_ORDER:
        spec = AttackSpec(kind)
        if kind == AttackKind.GAUSSIAN_NOISE:
            spec = spec.with_seed(seed)
        elif kind == AttackKind.JPEG:
            spec = spec.with_params(quality=jpeg_quality)
        matrix.append(spec)
    return matrix


def _identity(pixels: np.ndarray, params: dict[str, float], rng: np.random.Generator) -> np.ndarray:
    return pixels


def _intensity_adjust(pixels: np.ndarray, params: dict[str, float], rng: np.random.Generator) -> np.ndarray:
    gamma = params["gamma"]
    if gamma <= 0:
        raise InvalidParamError(f"intensity exponent must be > 0, got {gamma}")
    return np.power(pixels, gamma)


def _gamma_correction(pixels: np.ndarray, params: dict[str, float], rng: np.random.Generator) -> np.ndarray:
    # Linear stretch of [low_in, high_in] onto [low_out, high_out], clipping outside
    low_in, high_in = params["low_in"], params["high_in"]
    low_out, high_out = params["low_out"], params["high_out"]
    if not 0 <= low_in < high_in <= 1:
        raise InvalidParamError(f"input range must satisfy 0 <= low < high <= 1, got [{low_in}, {high_in}]")
    stretched = np.clip((pixels - low_in) / (high_in - low_in), 0.0, 1.0)
    return low_out + stretched * (high_out - low_out)


def _hist_eq(pixels: np.ndarray, params: dict[str, float], rng: np.random.Generator) -> np.ndarray:
    levels = int(params["levels"])
    if levels < 2:
        raise InvalidParamError(f"histogram equalization needs at least 2 levels, got {levels}")

    top = levels - 1
    bins = np.floor(pixels * top + 0.5).astype(np.int64)
    cdf = np.cumsum(np.bincount(bins.ravel(), minlength=levels))
    cdf_min = cdf[np.flatnonzero(cdf)[0]]
    if cdf[-1] == cdf_min:
        return pixels

    lut = np.floor((cdf - cdf_min) / (cdf[-1] - cdf_min) * top + 0.5)
    return lut[bins] / top


def _low_pass(pixels: np.ndarray, params: dict[str, float], rng: np.random.Generator) -> np.ndarray:
    size = int(params["size"])
    if size < 1:
        raise InvalidParamError(f"filter size must be >= 1, got {size}")
    return ndimage.uniform_filter(pixels, size=size, mode="nearest")


def _resize(pixels: np.ndarray, params: dict[str, float], rng: np.random.Generator) -> np.ndarray:
    scale = params["scale"]
    if not 0 < scale <= 1:
        raise InvalidParamError(f"resize scale must lie in (0, 1], got {scale}")
    img = GrayImage(pixels)
    small = imageio.resize(img, max(2, round(img.width * scale)), max(2, round(img.height * scale)))
    return imageio.resize(small, img.width, img.height, method="bilinear").data


def _gaussian_noise(pixels: np.ndarray, params: dict[str, float], rng: np.random.Generator) -> np.ndarray:
    variance = params["variance"]
    if variance < 0:
        raise InvalidParamError(f"noise variance must be >= 0, got {variance}")
    return pixels + rng.normal(params["mean"], np.sqrt(variance), size=pixels.shape)


def unsharp_kernel(alpha: float) -> np.ndarray:
    """3x3 sharpening kernel built from a negative Laplacian with shape parameter alpha."""
    return np.array(
        [
            [-alpha, alpha - 1, -alpha],
            [alpha - 1, alpha + 5, alpha - 1],
            [-alpha, alpha - 1, -alpha],
        ]
    ) / (alpha + 1)


def _high_pass(pixels: np.ndarray, params: dict[str, float], rng: np.random.Generator) -> np.ndarray:
    alpha = params["alpha"]
    if not 0 <= alpha <= 1:
        raise InvalidParamError(f"sharpening alpha must lie in [0, 1], got {alpha}")
    return ndimage.convolve(pixels, unsharp_kernel(alpha), mode="nearest")


def _jpeg(pixels: np.ndarray, params: dict[str, float], rng: np.random.Generator) -> np.ndarray:
    quality = params["quality"]
    if int(quality) != quality or not 1 <= quality <= 100:
        raise InvalidParamError(f"JPEG quality must be an integer in [1, 100], got {quality}")

    buffer = io.BytesIO()
    Image.fromarray(GrayImage(pixels).to_uint8()).save(buffer, format="JPEG", quality=int(quality))
    buffer.seek(0)
    with Image.open(buffer) as decoded:
        return np.asarray(decoded.convert("L"), dtype=np.float64) / 255.0


_ATTACKS: dict[AttackKind, Callable[[np.ndarray, dict[str, float], np.random.Generator], np.ndarray]] = {
    AttackKind.IDENTITY: _identity,
    AttackKind.INTENSITY_ADJUST: _intensity_adjust,
    AttackKind.GAMMA_CORRECTION: _gamma_correction,
    AttackKind.HIST_EQ: _hist_eq,
    AttackKind.LOW_PASS: _low_pass,
    AttackKind.RESIZE: _resize,
    AttackKind.GAUSSIAN_NOISE: _gaussian_noise,
    AttackKind.HIGH_PASS: _high_pass,
    AttackKind.JPEG: _jpeg,
}


def apply_attack(img: GrayImage, spec: AttackSpec) -> GrayImage:
    """Apply one attack. A spec without a seed uses seed 0."""
    seed = 0 if spec.seed is None else spec.seed
    rng = np.random.default_rng(seed)
    attacked = _ATTACKS[spec.kind](img.clamped().data, spec.params, rng)
    logger.debug(f"Applied {spec.name}({spec.label}) with seed {seed}")
    return GrayImage(np.clip(attacked, 0.0, 1.0))


def attack_psnr(original: GrayImage, attacked: GrayImage) -> float:
    return psnr(original, attacked)
