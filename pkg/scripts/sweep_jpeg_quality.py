#!/usr/bin/env python3
# /// script
# requires-python = ">=3.12"
# dependencies = [
#   "numpy",
#   "pillow",
#   "python-dotenv",
#   "pywavelets",
#   "rich",
#   "scipy",
# ]
# ///
"""Sweep JPEG quality and show how the LL and HH extractions hold up."""

import argparse
import json
import sys
from pathlib import Path

# Add project root to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from dotenv import load_dotenv
from rich.table import Table

from wavemark.attacks import AttackKind, AttackSpec
from wavemark.config import get_run_config
from wavemark.console import OK, configure_logging, console
from wavemark.errors import ConfigError, WavemarkError
from wavemark.imageio import load_image
from wavemark.metrics import format_db
from wavemark.report import build_report

DEFAULT_QUALITIES = [50, 75, 90]

logger = configure_logging()


def main() -> int:
    """Evaluate the JPEG attack at several quality factors."""
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    parser.add_argument("--config", type=Path, required=True, help="Run configuration JSON")
    parser.add_argument("--quality", type=int, nargs="+", default=DEFAULT_QUALITIES, help="JPEG quality factors")
    parser.add_argument("--output", type=Path, default=None, help="Write the sweep as JSON to this file")
    args = parser.parse_args()

    load_dotenv()
    console.rule("[bold magenta]JPEG Quality Sweep[/bold magenta]")

    try:
        config = get_run_config(args.config)
        config.validate()
        matrix = [AttackSpec(AttackKind.JPEG, {"quality": quality}, seed=config.seed) for quality in args.quality]
        report = build_report(
            load_image(config.cover),
            load_image(config.primary),
            load_image(config.secondary),
            config.embed,
            matrix,
            sr_mode=config.sr_mode,
            sr_threshold=config.sr_threshold,
        )
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return 2
    except WavemarkError as e:
        logger.error(f"Sweep failed: {type(e).__name__}: {e}")
        return 3

    table = Table(title="JPEG robustness")
    table.add_column("Quality", justify="right")
    table.add_column("PSNR (dB)", justify="right")
    table.add_column("SR LL", justify="right")
    table.add_column("SR HH", justify="right")
    table.add_column("Best band")
    for quality, row in zip(args.quality, report.rows, strict=True):
        table.add_row(str(quality), format_db(row.psnr_db), f"{row.sr_ll:.4f}", f"{row.sr_hh:.4f}", row.best_band.value)
    console.print(table)

    if args.output:
        sweep = [{"quality": q, **row.to_dict()} for q, row in zip(args.quality, report.rows, strict=True)]
        args.output.write_text(json.dumps(sweep, indent=2) + "\n")
        console.print(f"{OK} Sweep written to [cyan]{args.output}[/cyan]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
