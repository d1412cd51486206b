"""Run configuration for the CLI: input paths, embedding parameters and the attack matrix."""

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from .attacks import AttackKind, AttackSpec, default_attack_matrix
from .embedder import EmbedParams
from .errors import ConfigError, WavemarkError
from .metrics import SRMode

SCHEMA = "wavemark-config/1"
REPORT_FORMATS = ("csv", "json", "markdown")
IMAGE_FORMATS = ("png", "pgm")


@dataclass
class RunConfig:
    """Configuration for one embedding/evaluation run."""

    cover: Path | None = None  # cover image
    primary: Path | None = None  # primary watermark
    secondary: Path | None = None  # secondary watermark, half the primary per axis
    out_dir: Path = Path("out")
    embed: EmbedParams = field(default_factory=EmbedParams)
    attacks: list[AttackSpec] = field(default_factory=default_attack_matrix)
    report_formats: list[str] = field(default_factory=lambda: ["csv", "json"])
    seed: int = 0  # seed for attacks that carry none of their own
    sr_mode: SRMode = SRMode.BINARY
    sr_threshold: float = 0.5
    image_format: str = "png"
    parallel: bool = False
    paper_literal_alphas: bool = False
    resize_secondary: bool = False

    def __post_init__(self) -> None:
        for name in ("cover", "primary", "secondary"):
            value = getattr(self, name)
            if value is not None:
                setattr(self, name, Path(value))
        self.out_dir = Path(self.out_dir)
        self.sr_mode = SRMode(self.sr_mode)

        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")

        unknown = set(self.report_formats) - set(REPORT_FORMATS)
        if unknown:
            raise ConfigError(f"unknown report formats {sorted(unknown)}, expected a subset of {REPORT_FORMATS}")
        if self.image_format not in IMAGE_FORMATS:
            raise ConfigError(f"unknown image format '{self.image_format}', expected one of {IMAGE_FORMATS}")

    @property
    def effective_attacks(self) -> list[AttackSpec]:
        """Attack matrix with the global seed filled in where a spec has none."""
        return [spec if spec.seed is not None else spec.with_seed(self.seed) for spec in self.attacks]

    @property
    def watermarked_path(self) -> Path:
        return self.out_dir / f"watermarked.{self.image_format}"

    @property
    def nested_path(self) -> Path:
        return self.out_dir / f"nested.{self.image_format}"

    @property
    def fidelity_path(self) -> Path:
        return self.out_dir / "fidelity.json"

    @property
    def extraction_path(self) -> Path:
        return self.out_dir / "extraction.json"

    def report_path(self, fmt: str) -> Path:
        suffix = {"csv": "csv", "json": "json", "markdown": "md"}[fmt]
        return self.out_dir / f"report.{suffix}"

    def validate(self, required: tuple[str, ...] = ("cover", "primary", "secondary")) -> None:
        """Check that every required input path is set and exists."""
        for name in required:
            path = getattr(self, name)
            if path is None:
                raise ConfigError(f"no {name} image configured")
            if not path.is_file():
                raise ConfigError(f"{name} image not found: {path}")

    def with_overrides(
        self,
        seed: int | None = None,
        wavelet: str | None = None,
        out_dir: Path | None = None,
        jpeg_quality: int | None = None,
        paper_literal_alphas: bool | None = None,
        parallel: bool | None = None,
        resize_secondary: bool | None = None,
    ) -> "RunConfig":
        """Copy of this config with any non-None override applied."""
        config = self
        try:
            if seed is not None:
                config = replace(config, seed=seed, attacks=[spec.with_seed(seed) for spec in config.attacks])
            if wavelet is not None:
                config = replace(config, embed=replace(config.embed, wavelet=wavelet))
            if jpeg_quality is not None:
                attacks = [
                    spec.with_params(quality=jpeg_quality) if spec.kind == AttackKind.JPEG else spec
                    for spec in config.attacks
                ]
                config = replace(config, attacks=attacks)
        except WavemarkError as e:
            raise ConfigError(str(e)) from e
        if out_dir is not None:
            config = replace(config, out_dir=Path(out_dir))
        if paper_literal_alphas is not None:
            config = replace(config, paper_literal_alphas=paper_literal_alphas)
        if parallel is not None:
            config = replace(config, parallel=parallel)
        if resize_secondary is not None:
            config = replace(config, resize_secondary=resize_secondary)
        return config

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "paths": {
                "cover": None if self.cover is None else str(self.cover),
                "primary": None if self.primary is None else str(self.primary),
                "secondary": None if self.secondary is None else str(self.secondary),
                "out_dir": str(self.out_dir),
            },
            "embed": self.embed.to_dict(),
            "attacks": [spec.to_dict() for spec in self.attacks],
            "report_formats": list(self.report_formats),
            "seed": self.seed,
            "sr_mode": self.sr_mode.value,
            "sr_threshold": self.sr_threshold,
            "image_format": self.image_format,
            "parallel": self.parallel,
            "paper_literal_alphas": self.paper_literal_alphas,
            "resize_secondary": self.resize_secondary,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        if data.get("schema") != SCHEMA:
            raise ConfigError(f"unsupported config schema {data.get('schema')!r}, expected {SCHEMA!r}")

        paths = data.get("paths", {})
        try:
            return cls(
                cover=paths.get("cover"),
                primary=paths.get("primary"),
                secondary=paths.get("secondary"),
                out_dir=paths.get("out_dir", "out"),
                embed=EmbedParams.from_dict(data.get("embed", {})),
                attacks=[AttackSpec.from_dict(spec) for spec in data.get("attacks", [])],
                report_formats=list(data.get("report_formats", ["csv", "json"])),
                seed=int(data.get("seed", 0)),
                sr_mode=data.get("sr_mode", SRMode.BINARY),
                sr_threshold=float(data.get("sr_threshold", 0.5)),
                image_format=data.get("image_format", "png"),
                parallel=bool(data.get("parallel", False)),
                paper_literal_alphas=bool(data.get("paper_literal_alphas", False)),
                resize_secondary=bool(data.get("resize_secondary", False)),
            )
        except ConfigError:
            raise
        except (WavemarkError, KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"invalid config: {e}") from e

    @classmethod
    def load(cls, path: Path) -> "RunConfig":
        """Read a JSON config. Relative paths resolve against the config file's directory."""
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise ConfigError(f"config {path} is not valid JSON: {e}") from e

        config = cls.from_dict(data)
        base = path.parent
        for name in ("cover", "primary", "secondary", "out_dir"):
            value = getattr(config, name)
            if value is not None and not value.is_absolute():
                setattr(config, name, base / value)
        return config

    def save(self, path: Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")


def apply_environment(config: RunConfig) -> RunConfig:
    """Apply WAVEMARK_* environment overrides (a .env file is loaded by the CLI)."""
    try:
        seed = os.getenv("WAVEMARK_SEED")
        jpeg_quality = os.getenv("WAVEMARK_JPEG_QUALITY")
        return config.with_overrides(
            seed=None if seed is None else int(seed),
            wavelet=os.getenv("WAVEMARK_WAVELET"),
            out_dir=os.getenv("WAVEMARK_OUT_DIR"),
            jpeg_quality=None if jpeg_quality is None else int(jpeg_quality),
        )
    except ValueError as e:
        raise ConfigError(f"invalid WAVEMARK_* environment value: {e}") from e


def get_run_config(path: Path | None = None) -> RunConfig:
    """Get the run configuration from an optional JSON file and the environment."""
    config = RunConfig.load(path) if path is not None else RunConfig()
    return apply_environment(config)
