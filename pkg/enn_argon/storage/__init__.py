"""File formats: JSON-lines datasets, JSON checkpoints and CSV tables."""

from .checkpoints import Checkpoint, load_checkpoint, save_checkpoint
from .datasets import load_dataset, meta_path, save_dataset
from .paths import ensure_parent, resolve_path
from .tables import read_table, write_table

__all__ = [
    "Checkpoint",
    "load_checkpoint",
    "save_checkpoint",
    "load_dataset",
    "meta_path",
    "save_dataset",
    "ensure_parent",
    "resolve_path",
    "read_table",
    "write_table",
]
