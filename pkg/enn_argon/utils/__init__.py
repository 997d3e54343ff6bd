"""Shared utility helpers."""

from .logging import setup_logger
from .seeding import SeedStreams, split_seed

__all__ = ["setup_logger", "SeedStreams", "split_seed"]
