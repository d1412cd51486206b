"""Pytest configuration for end-to-end CLI tests."""

import os
import shutil
from pathlib import Path

import pytest
from dotenv import load_dotenv

from wavemark.fixtures import write_fixtures

# Load environment variables
load_dotenv()

GOLDEN_DIR = Path(__file__).parent.parent / "tests" / "golden"


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ("WAVEMARK_SEED", "WAVEMARK_WAVELET", "WAVEMARK_OUT_DIR", "WAVEMARK_JPEG_QUALITY"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    """Bundled fixtures (512x512 cover, 64x64 and 32x32 logos, config.json), generated once."""
    directory = tmp_path_factory.mktemp("fixtures")
    write_fixtures(directory)
    return directory


@pytest.fixture
def workspace(fixture_dir, tmp_path):
    """Private copy of the fixtures so tests can write next to them."""
    target = tmp_path / "fixtures"
    shutil.copytree(fixture_dir, target)
    return target


@pytest.fixture
def config_path(workspace):
    return workspace / "config.json"


@pytest.fixture
def golden():
    """Compare text output with a frozen file under tests/golden.

    A missing file is recorded from the current output and the test is skipped, so the
    values freeze on the first verified build. Set WAVEMARK_UPDATE_GOLDEN=1 to re-record.
    """

    def check(name: str, actual: str) -> None:
        path = GOLDEN_DIR / name
        if os.getenv("WAVEMARK_UPDATE_GOLDEN") or not path.is_file():
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(actual)
            pytest.skip(f"recorded golden file {path.name}")
        assert actual == path.read_text()

    return check
