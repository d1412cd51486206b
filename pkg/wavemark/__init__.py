"""Nested DWT image watermarking: embed, attack, extract and score."""

from .attacks import AttackKind, AttackSpec, apply_attack, attack_psnr, default_attack_matrix
from .config import RunConfig, get_run_config
from .embedder import EmbedParams, NestedWatermark, capacity_bits, embed_into_cover, nest_watermarks, predicted_mse
from .errors import ConfigError, WavemarkError
from .extractor import ExtractionResult, denest_secondary, extract_watermark
from .imageio import GrayImage, load_image, resize, save_image
from .metrics import SRMode, mse, psnr, similarity_ratio
from .report import EvaluationReport, ReportRow, build_report, check_band_pattern
from .wavelet import SubbandSet, WaveletKind, dwt2, idwt2

__version__ = "0.1.0"

__all__ = [
    "AttackKind",
    "AttackSpec",
    "ConfigError",
    "EmbedParams",
    "EvaluationReport",
    "ExtractionResult",
    "GrayImage",
    "NestedWatermark",
    "ReportRow",
    "RunConfig",
    "SRMode",
    "SubbandSet",
    "WaveletKind",
    "WavemarkError",
    "apply_attack",
    "attack_psnr",
    "build_report",
    "capacity_bits",
    "check_band_pattern",
    "default_attack_matrix",
    "denest_secondary",
    "dwt2",
    "embed_into_cover",
    "extract_watermark",
    "get_run_config",
    "idwt2",
    "load_image",
    "mse",
    "nest_watermarks",
    "predicted_mse",
    "psnr",
    "resize",
    "save_image",
    "similarity_ratio",
]
