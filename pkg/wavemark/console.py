"""Shared console and logging setup."""

import logging

from rich.console import Console
from rich.logging import RichHandler

console = Console()

OK = "[green]✓[/green]"
WARN = "[yellow]⚠[/yellow]"
FAIL = "[red]✗[/red]"


def configure_logging(verbose: bool = False) -> logging.Logger:
    """Configure Rich logging with standard settings."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False, show_time=False)],
        force=True,
    )
    return logging.getLogger("wavemark")
