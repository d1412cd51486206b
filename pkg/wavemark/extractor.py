"""Non-blind extraction of the LL and HH watermark estimates."""

import logging
from dataclasses import dataclass

from .embedder import EmbedParams, embedding_window
from .errors import DimensionMismatchError, InvalidParamError
from .imageio import GrayImage
from .metrics import SRMode, similarity_ratio
from .wavelet import dwt2

logger = logging.getLogger(__name__)

# Literal extraction constants from the published attacked-path formulas. They cannot
# invert an embedding done with 0.04 / 0.01 and are kept only for comparison runs.
PAPER_LITERAL_DIVISORS = (3.0, 1.0)


@dataclass(frozen=True, eq=False)
class ExtractionResult:
    """Raw (unclamped) band estimates, plus SR scores when a reference was given."""

    ll_estimate: GrayImage
    hh_estimate: GrayImage
    sr_ll: float | None = None
    sr_hh: float | None = None

    @property
    def ll_rendering(self) -> GrayImage:
        return self.ll_estimate.quantized()

    @property
    def hh_rendering(self) -> GrayImage:
        return self.hh_estimate.quantized()


def extract_watermark(
    suspect: GrayImage,
    original_cover: GrayImage,
    params: EmbedParams,
    *,
    shape: tuple[int, int] | None = None,
    reference: GrayImage | None = None,
    divisors: tuple[float, float] | None = None,
    sr_mode: SRMode | str = SRMode.EXACT_8BIT,
    sr_threshold: float = 0.5,
) -> ExtractionResult:
    """Recover watermark estimates from the difference of suspect and cover subbands.

    LL estimate = (ca(suspect) - ca(cover)) / alpha_ll and HH estimate = (cd(suspect) - cd(cover)) / alpha_hh
    over the embedding window.

    Args:
        suspect: Watermarked, possibly attacked, image
        original_cover: The unmarked cover image
        params: Parameters used at embedding time
        shape: Watermark dimensions; defaults to the reference's, else the rest of the subband past the offset
        reference: Watermark to score the estimates against with the similarity ratio
        divisors: Override of (alpha_ll, alpha_hh) as extraction divisors
        sr_mode: Quantization rule for the similarity ratio
        sr_threshold: Threshold for binary SR mode

    Returns:
        ExtractionResult with raw estimates and optional SR values
    """
    if suspect.shape != original_cover.shape:
        raise DimensionMismatchError(f"suspect {suspect.shape} and cover {original_cover.shape} differ in shape")

    div_ll, div_hh = divisors if divisors is not None else (params.alpha_ll, params.alpha_hh)
    if div_ll <= 0 or div_hh <= 0:
        raise InvalidParamError(f"extraction divisors must be > 0, got ({div_ll}, {div_hh})")

    marked = dwt2(suspect, params.wavelet)
    original = dwt2(original_cover, params.wavelet)

    if shape is None:
        if reference is not None:
            shape = reference.shape
        else:
            shape = (marked.shape[0] - params.offset_row, marked.shape[1] - params.offset_col)
    window = embedding_window(marked.shape, shape, params)

    ll = GrayImage((marked.ca[window] - original.ca[window]) / div_ll)
    hh = GrayImage((marked.cd[window] - original.cd[window]) / div_hh)

    if reference is None:
        return ExtractionResult(ll_estimate=ll, hh_estimate=hh)

    return ExtractionResult(
        ll_estimate=ll,
        hh_estimate=hh,
        sr_ll=similarity_ratio(ll, reference, sr_mode, sr_threshold),
        sr_hh=similarity_ratio(hh, reference, sr_mode, sr_threshold),
    )


def denest_secondary(primary_estimate: GrayImage, original_primary: GrayImage, params: EmbedParams) -> GrayImage:
    """Recover the secondary watermark: (ch(estimate) - ch(original primary)) / alpha_nest."""
    if primary_estimate.shape != original_primary.shape:
        raise DimensionMismatchError(
            f"primary estimate {primary_estimate.shape} and original primary {original_primary.shape} differ in shape"
        )
    if params.alpha_nest <= 0:
        raise InvalidParamError(f"alpha_nest must be > 0 to recover the secondary, got {params.alpha_nest}")

    estimate = dwt2(primary_estimate, params.wavelet)
    original = dwt2(original_primary, params.wavelet)
    return GrayImage((estimate.ch - original.ch) / params.alpha_nest)
