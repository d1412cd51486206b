import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavemark.embedder import EmbedParams, embed_into_cover, nest_watermarks
from wavemark.errors import DimensionMismatchError, InvalidParamError
from wavemark.extractor import PAPER_LITERAL_DIVISORS, denest_secondary, extract_watermark
from wavemark.fixtures import pseudo_lena
from wavemark.imageio import GrayImage, load_image, save_image
from wavemark.metrics import SRMode
from wavemark.wavelet import WaveletKind


def test_float_round_trip_is_exact(cover, nested, params):
    marked = embed_into_cover(cover, nested, params)
    result = extract_watermark(marked, cover, params, reference=nested.image)

    np.testing.assert_allclose(result.ll_estimate.data, nested.image.data, atol=1e-9)
    np.testing.assert_allclose(result.hh_estimate.data, nested.image.data, atol=1e-9)
    assert result.sr_ll == 1.0
    assert result.sr_hh == 1.0


def test_db2_round_trip(cover, primary, secondary):
    params = EmbedParams(wavelet=WaveletKind.DB2, alpha_nest=0.5)
    nested = nest_watermarks(primary, secondary, params)
    marked = embed_into_cover(cover, nested, params)
    result = extract_watermark(marked, cover, params, shape=nested.shape)

    np.testing.assert_allclose(result.ll_estimate.data, nested.image.data, atol=1e-9)
    assert result.sr_ll is None


def test_round_trip_with_offset(cover, primary, secondary):
    params = EmbedParams(alpha_nest=0.5, offset_row=4, offset_col=6)
    nested = nest_watermarks(primary, secondary, params)
    marked = embed_into_cover(cover, nested, params)
    result = extract_watermark(marked, cover, params, reference=nested.image)
    assert (result.sr_ll, result.sr_hh) == (1.0, 1.0)


def test_default_window_runs_to_subband_edge(cover):
    params = EmbedParams(offset_row=4, offset_col=8)
    result = extract_watermark(cover, cover, params)
    assert result.ll_estimate.shape == (28, 24)
    np.testing.assert_array_equal(result.ll_estimate.data, 0.0)


def test_literal_divisors_scale_estimates(cover, nested, params):
    marked = embed_into_cover(cover, nested, params)
    result = extract_watermark(marked, cover, params, shape=nested.shape, divisors=PAPER_LITERAL_DIVISORS)

    np.testing.assert_allclose(result.ll_estimate.data, nested.image.data * params.alpha_ll / 3.0, atol=1e-12)
    np.testing.assert_allclose(result.hh_estimate.data, nested.image.data * params.alpha_hh, atol=1e-12)


def test_renderings_are_quantized(cover, nested, params):
    marked = embed_into_cover(cover, nested, params)
    result = extract_watermark(marked, cover, params, shape=nested.shape)
    assert result.ll_rendering.data.min() >= 0.0
    assert result.ll_rendering.data.max() <= 1.0


def test_extraction_rejects_bad_input(cover, params):
    with pytest.raises(DimensionMismatchError):
        extract_watermark(pseudo_lena(32), cover, params)
    with pytest.raises(InvalidParamError):
        extract_watermark(cover, cover, params, divisors=(0.0, 1.0))


def test_secondary_is_recovered(cover, primary, secondary, nested, params):
    marked = embed_into_cover(cover, nested, params)
    result = extract_watermark(marked, cover, params, shape=nested.shape)
    recovered = denest_secondary(result.ll_estimate, primary, params)
    np.testing.assert_allclose(recovered.data, secondary.data, atol=1e-8)


def test_denest_rejects_bad_input(primary, secondary, params):
    with pytest.raises(InvalidParamError):
        denest_secondary(primary, primary, EmbedParams(alpha_nest=0.0))
    with pytest.raises(DimensionMismatchError):
        denest_secondary(secondary, primary, params)


def test_eight_bit_round_trip(tmp_path, cover, nested, params):
    """After an 8-bit save, thresholded estimates still match the nested watermark."""
    marked = embed_into_cover(cover, nested, params)
    save_image(marked, tmp_path / "marked.png")
    reloaded = load_image(tmp_path / "marked.png")

    result = extract_watermark(reloaded, cover, params, reference=nested.image, sr_mode=SRMode.BINARY)
    assert result.sr_ll >= 0.99
    assert result.sr_hh >= 0.9


def test_pristine_cover_gives_zero_estimates(cover, nested, params):
    """With nothing embedded, binary SR equals the share of dark watermark pixels."""
    result = extract_watermark(cover, cover, params, reference=nested.image, sr_mode=SRMode.BINARY)
    np.testing.assert_array_equal(result.ll_estimate.data, 0.0)
    assert result.sr_ll == pytest.approx(float(np.mean(nested.image.data < 0.5)))


@pytest.mark.parametrize("kind", list(WaveletKind))
def test_quantization_error_is_bounded(tmp_path, kind):
    """Rounding each pixel by at most half a step moves a coefficient by at most that times the filter's L1 gain."""
    rng = np.random.default_rng(7)
    gain = float(np.abs(kind.filter_bank.dec_lo).sum()) ** 2
    for trial in range(20):
        params = EmbedParams(wavelet=kind, offset_row=int(rng.integers(0, 5)), offset_col=int(rng.integers(0, 5)))
        cover = GrayImage(rng.uniform(0.2, 0.8, size=(16, 16)))
        watermark = GrayImage(rng.uniform(size=(4, 4)))
        path = tmp_path / f"marked_{trial}.png"
        save_image(embed_into_cover(cover, watermark, params), path)

        result = extract_watermark(load_image(path), cover, params, shape=watermark.shape)
        step = 0.5 / 255 * gain
        assert np.max(np.abs(result.ll_estimate.data - watermark.data)) <= step / params.alpha_ll + 1e-12
        assert np.max(np.abs(result.hh_estimate.data - watermark.data)) <= step / params.alpha_hh + 1e-12


@st.composite
def embedding_cases(draw):
    half = draw(st.integers(min_value=2, max_value=16))
    wm = draw(st.integers(min_value=2, max_value=half))
    params = EmbedParams(
        wavelet=draw(st.sampled_from(list(WaveletKind))),
        alpha_ll=draw(st.floats(0.005, 0.2)),
        alpha_hh=draw(st.floats(0.005, 0.2)),
        offset_row=draw(st.integers(0, half - wm)),
        offset_col=draw(st.integers(0, half - wm)),
    )
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    return GrayImage(rng.uniform(size=(2 * half, 2 * half))), GrayImage(rng.uniform(size=(wm, wm))), params


@settings(max_examples=50, deadline=None)
@given(case=embedding_cases())
def test_extraction_inverts_embedding(case):
    cover, watermark, params = case
    marked = embed_into_cover(cover, watermark, params)
    result = extract_watermark(marked, cover, params, shape=watermark.shape)

    np.testing.assert_allclose(result.ll_estimate.data, watermark.data, atol=1e-8)
    np.testing.assert_allclose(result.hh_estimate.data, watermark.data, atol=1e-8)
