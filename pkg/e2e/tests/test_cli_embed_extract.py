"""E2E tests for the embed, extract and fixtures commands."""

import json
import math

import numpy as np
import pytest

from wavemark.cli import EXIT_CONFIG, EXIT_OK, EXIT_PROCESSING, main
from wavemark.config import RunConfig
from wavemark.imageio import GrayImage, load_image, save_image

pytestmark = pytest.mark.e2e


def run(*args) -> int:
    return main([str(arg) for arg in args])


def test_help_lists_flags(capsys):
    """Every subcommand documents the shared flags with their defaults."""
    with pytest.raises(SystemExit) as excinfo:
        main(["evaluate", "--help"])
    assert excinfo.value.code == 0

    out = capsys.readouterr().out
    for flag in ("--config", "--seed", "--jpeg-quality", "--paper-literal-alphas", "--wavelet", "--out", "--parallel"):
        assert flag in out
    assert "default" in out

    text = " ".join(out.split())
    assert "default: None" not in text
    assert "config default 0)" in text
    assert "config default 75)" in text
    assert "config default haar)" in text


def test_fixtures_command(tmp_path):
    out = tmp_path / "generated"
    assert run("fixtures", "--out", out) == EXIT_OK
    for name in ("pseudo_lena.pgm", "primary_64.pgm", "secondary_32.pgm", "config.json"):
        assert (out / name).is_file()


def test_embed_writes_image_and_fidelity(config_path, tmp_path):
    out = tmp_path / "out"
    assert run("embed", "--config", config_path, "--out", out) == EXIT_OK

    assert load_image(out / "watermarked.png").shape == (512, 512)
    assert load_image(out / "nested.png").shape == (64, 64)

    fidelity = json.loads((out / "fidelity.json").read_text())
    assert fidelity["psnr2"] >= 40.0
    assert fidelity["capacity_bits"] == 8192
    assert math.isfinite(fidelity["psnr1"])
    assert fidelity["mse2"] == pytest.approx(fidelity["predicted_mse2"], rel=1e-9)


def test_extract_after_embed(config_path, tmp_path):
    """Estimates read back from the 8-bit watermarked PNG still match the nested watermark."""
    out = tmp_path / "out"
    assert run("embed", "--config", config_path, "--out", out) == EXIT_OK
    assert run("extract", "--config", config_path, "--out", out, "--paper-literal-alphas") == EXIT_OK

    summary = json.loads((out / "extraction.json").read_text())
    assert summary["sr_mode"] == "binary"
    assert summary["sr_ll"] >= 0.99
    assert summary["sr_secondary"] >= 0.99
    assert "sr_ll_paperalpha" in summary

    for name in ("ll_estimate.png", "hh_estimate.png"):
        assert load_image(out / name).shape == (64, 64)
    assert load_image(out / "secondary_estimate.png").shape == (32, 32)


def test_db2_embed_and_extract(config_path, tmp_path):
    out = tmp_path / "out"
    assert run("embed", "--config", config_path, "--out", out, "--wavelet", "db2") == EXIT_OK
    assert run("extract", "--config", config_path, "--out", out, "--wavelet", "db2") == EXIT_OK
    assert json.loads((out / "extraction.json").read_text())["sr_ll"] >= 0.9


def test_extract_rejects_wrong_size_image(config_path, workspace, tmp_path, capsys):
    code = run("extract", "--config", config_path, "--out", tmp_path, "--watermarked", workspace / "primary_64.pgm")
    assert code == EXIT_CONFIG
    assert "differ in shape" in capsys.readouterr().out


def test_extract_without_embed_output(config_path, tmp_path, capsys):
    assert run("extract", "--config", config_path, "--out", tmp_path / "empty") == EXIT_CONFIG
    assert "watermarked image not found" in capsys.readouterr().out


def test_missing_cover_is_a_config_error(config_path, tmp_path, capsys):
    missing = tmp_path / "nowhere" / "cover.pgm"
    config = RunConfig.load(config_path)
    config.cover = missing
    config.save(config_path)

    assert run("embed", "--config", config_path, "--out", tmp_path / "out") == EXIT_CONFIG
    assert str(missing) in capsys.readouterr().out


def test_odd_cover_is_a_processing_error(config_path, tmp_path, capsys):
    odd = tmp_path / "odd.pgm"
    save_image(GrayImage(np.full((63, 64), 0.5)), odd)
    config = RunConfig.load(config_path)
    config.cover = odd
    config.save(config_path)

    assert run("embed", "--config", config_path, "--out", tmp_path / "out") == EXIT_PROCESSING
    assert "OddDimensionsError" in capsys.readouterr().out


def test_resize_secondary_flag(config_path, workspace, tmp_path):
    """A secondary of the wrong size is only accepted when resizing is requested."""
    save_image(GrayImage(np.eye(40)), workspace / "secondary_32.pgm")
    out = tmp_path / "out"

    assert run("embed", "--config", config_path, "--out", out) == EXIT_PROCESSING
    assert run("embed", "--config", config_path, "--out", out, "--resize-secondary") == EXIT_OK
