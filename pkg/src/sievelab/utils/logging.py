"""Logging setup for the command-line interface."""

import logging

from rich.console import Console
from rich.logging import RichHandler


def log_level(verbosity: int = 0, quiet: bool = False) -> int:
    """WARNING by default, INFO for one -v, DEBUG for two or more; ERROR when quiet."""
    if quiet:
        return logging.ERROR
    if verbosity >= 2:
        return logging.DEBUG
    if verbosity == 1:
        return logging.INFO
    return logging.WARNING


def configure_logging(verbosity: int = 0, quiet: bool = False) -> None:
    """Route ``sievelab`` loggers through a Rich handler on stderr."""
    handler = RichHandler(
        console=Console(stderr=True),
        show_path=False,
        rich_tracebacks=True,
    )
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))

    root = logging.getLogger("sievelab")
    root.handlers.clear()
    root.addHandler(handler)
    root.setLevel(log_level(verbosity, quiet))
    root.propagate = False
