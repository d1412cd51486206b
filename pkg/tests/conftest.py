"""Shared fixtures for unit tests."""

import pytest

from wavemark.embedder import EmbedParams, nest_watermarks
from wavemark.fixtures import primary_logo, pseudo_lena, secondary_logo


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Keep WAVEMARK_* variables from the developer's shell out of the tests."""
    for name in ("WAVEMARK_SEED", "WAVEMARK_WAVELET", "WAVEMARK_OUT_DIR", "WAVEMARK_JPEG_QUALITY"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture(scope="session")
def cover():
    """Small smooth cover, 64x64."""
    return pseudo_lena(64)


@pytest.fixture(scope="session")
def primary():
    return primary_logo(16)


@pytest.fixture(scope="session")
def secondary():
    return secondary_logo(8)


@pytest.fixture
def params():
    # alpha_nest = 0.5 keeps nested binary samples away from the 0.5 SR threshold
    return EmbedParams(alpha_nest=0.5)


@pytest.fixture
def nested(primary, secondary, params):
    return nest_watermarks(primary, secondary, params)
