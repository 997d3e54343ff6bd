"""Logger setup for the command-line and server entrypoints."""

import logging
import sys

from ..config import DATE_FORMAT, LOG_FORMAT, LOG_LEVEL

_PACKAGE_LOGGER = "enn_argon"


def setup_logger(level: str | int | None = None) -> logging.Logger:
    """Attach a single stderr handler to the package logger and return it."""
    logger = logging.getLogger(_PACKAGE_LOGGER)
    logger.setLevel(level if level is not None else LOG_LEVEL)

    handler = next((h for h in logger.handlers if getattr(h, "_enn_argon", False)), None)
    if handler is None:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
        handler._enn_argon = True  # type: ignore[attr-defined]
        logger.addHandler(handler)
    else:
        # sys.stderr may have been swapped since the first call
        handler.setStream(sys.stderr)
    logger.propagate = False
    return logger
