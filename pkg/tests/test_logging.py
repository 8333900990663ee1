"""Tests for CLI logging setup."""

import logging

import pytest
from rich.logging import RichHandler

from sievelab.utils.logging import configure_logging, log_level


@pytest.mark.parametrize(
    "verbosity, quiet, expected",
    [
        (0, False, logging.WARNING),
        (1, False, logging.INFO),
        (2, False, logging.DEBUG),
        (5, False, logging.DEBUG),
        (2, True, logging.ERROR),
    ],
)
def test_log_level(verbosity, quiet, expected):
    assert log_level(verbosity, quiet) == expected


def test_configure_logging_replaces_handlers():
    configure_logging(1)
    configure_logging(2)
    logger = logging.getLogger("sievelab")
    assert len(logger.handlers) == 1
    assert isinstance(logger.handlers[0], RichHandler)
    assert logger.level == logging.DEBUG
    assert not logger.propagate
    configure_logging(quiet=True)
    assert logger.level == logging.ERROR


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
