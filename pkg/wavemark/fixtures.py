"""Procedural test images: a smooth 512x512 portrait-like cover and two binary logos.

All images are generated deterministically and stored as 8-bit PGM, so golden values computed
on them are reproducible on any machine.
"""

import logging
from pathlib import Path

import numpy as np
from scipy import ndimage

from .config import RunConfig
from .embedder import EmbedParams
from .imageio import GrayImage, save_image

logger = logging.getLogger(__name__)

FIXTURE_FILES = {
    "cover": "pseudo_lena.pgm",
    "primary": "primary_64.pgm",
    "secondary": "secondary_32.pgm",
}
CONFIG_FILE = "config.json"

TEXTURE_SEED = 512

# (row, col, sigma, amplitude) in units of the image size
_BLOBS = [
    (0.70, 0.30, 0.12, 0.22),
    (0.35, 0.75, 0.10, -0.20),
    (0.80, 0.80, 0.15, 0.15),
    (0.15, 0.55, 0.08, -0.12),
    (0.55, 0.50, 0.06, 0.10),
]


def pseudo_lena(size: int = 512) -> GrayImage:
    """Smooth cover with broad shading, soft blobs and a faint low-pass texture.

    Samples span the studio range [16, 235] / 255 and are exact multiples of 1/255.
    """
    y, x = np.mgrid[0:size, 0:size] / size
    image = (
        0.5
        + 0.15 * np.sin(2 * np.pi * (0.9 * x + 0.6 * y) + 0.4)
        + 0.08 * np.cos(2 * np.pi * (1.7 * y - 0.4 * x))
    )
    for row, col, sigma, amplitude in _BLOBS:
        image += amplitude * np.exp(-((y - row) ** 2 + (x - col) ** 2) / (2 * sigma**2))

    rng = np.random.default_rng(TEXTURE_SEED)
    texture = ndimage.gaussian_filter(rng.standard_normal((size, size)), sigma=3.0, mode="wrap")
    image += 0.01 * texture / texture.std()

    low, high = 16 / 255, 235 / 255
    image = low + (image - image.min()) / (image.max() - image.min()) * (high - low)
    return GrayImage(image).quantized()


def primary_logo(size: int = 64) -> GrayImage:
    """Binary ring crossed by two bars."""
    y, x = np.mgrid[0:size, 0:size] - (size - 1) / 2
    radius = np.hypot(x, y)
    ring = (radius >= 0.28 * size) & (radius <= 0.42 * size)
    bar = max(2, size // 8)
    cross = (np.abs(x) < bar / 2) | (np.abs(y) < bar / 2)
    inside = radius <= 0.42 * size
    return GrayImage((ring | (cross & inside)).astype(np.float64))


def secondary_logo(size: int = 32) -> GrayImage:
    """Binary diamond with a square hole."""
    y, x = np.mgrid[0:size, 0:size] - (size - 1) / 2
    diamond = np.abs(x) + np.abs(y) <= 0.4 * size
    hole = (np.abs(x) < 0.1 * size) & (np.abs(y) < 0.1 * size)
    return GrayImage((diamond & ~hole).astype(np.float64))


def fixture_config() -> RunConfig:
    """Run configuration for the bundled fixtures, with paths relative to the fixture directory.

    alpha_nest = 0.5 keeps nested samples of binary logos off the 0.5 SR threshold.
    """
    return RunConfig(
        cover=Path(FIXTURE_FILES["cover"]),
        primary=Path(FIXTURE_FILES["primary"]),
        secondary=Path(FIXTURE_FILES["secondary"]),
        out_dir=Path("out"),
        embed=EmbedParams(alpha_nest=0.5),
        report_formats=["csv", "json", "markdown"],
    )


def write_fixtures(directory: Path) -> dict[str, Path]:
    """Write the fixture images and a matching config.json into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    images = {"cover": pseudo_lena(), "primary": primary_logo(), "secondary": secondary_logo()}
    written = {}
    for name, image in images.items():
        path = directory / FIXTURE_FILES[name]
        save_image(image, path)
        written[name] = path
        logger.debug(f"Wrote fixture {path}")

    config_path = directory / CONFIG_FILE
    fixture_config().save(config_path)
    written["config"] = config_path
    return written
