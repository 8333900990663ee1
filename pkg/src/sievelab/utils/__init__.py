"""Utility helpers."""

from sievelab.utils.logging import configure_logging, log_level

__all__ = ["configure_logging", "log_level"]
