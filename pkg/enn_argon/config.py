"""Configuration for enn-argon."""

import copy
import os
from pathlib import Path
from typing import Any

import yaml


# Default paths
PACKAGE_ROOT = Path(__file__).parent

# Curated defaults (architecture, FIRE, LJ, MD protocol, thresholds)
METADATA_DIR = PACKAGE_ROOT / "metadata"
DEFAULTS_FILE = Path(
    os.getenv("ENN_DEFAULTS_FILE", str(METADATA_DIR / "defaults.yaml"))
).resolve()

# Relative output paths of the CLI resolve against this directory
OUTPUT_DIR = Path(os.getenv("ENN_OUTPUT_DIR", ".")).resolve()

# Logging
LOG_LEVEL = os.getenv("ENN_LOG_LEVEL", "INFO")
LOG_FORMAT = os.getenv(
    "ENN_LOG_FORMAT", "[%(asctime)s] [%(levelname)s] [%(name)s] %(message)s"
)
DATE_FORMAT = os.getenv("ENN_DATE_FORMAT", "%Y-%m-%d %H:%M:%S")

CHECKPOINT_FORMAT = "enn-argon-checkpoint"
CHECKPOINT_VERSION = 1
DATASET_FORMAT = "enn-argon-dataset"
DATASET_VERSION = 1


def _deep_merge(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def load_defaults(path: str | Path | None = None) -> dict[str, Any]:
    """
    Load the curated defaults, deep-merging an optional override file on top.

    The override file is a YAML mapping with the same shape as
    ``metadata/defaults.yaml``; unknown keys are carried along untouched.
    """
    with open(DEFAULTS_FILE, "r", encoding="utf-8") as f:
        defaults = yaml.safe_load(f) or {}

    if path is None:
        return defaults

    with open(path, "r", encoding="utf-8") as f:
        override = yaml.safe_load(f) or {}
    if not isinstance(override, dict):
        from .core.errors import ContractViolation

        raise ContractViolation(
            f"config file {path} must hold a mapping, got {type(override).__name__}"
        )
    return _deep_merge(defaults, override)
