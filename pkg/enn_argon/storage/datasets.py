"""JSON-lines dataset files with a metadata sidecar."""

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np

from ..config import DATASET_FORMAT, DATASET_VERSION
from ..core.errors import ContractViolation, StorageError
from ..physics.dataset import Dataset, DatasetProtocol
from ..physics.lj import LJParams
from .paths import ensure_parent, resolve_path

logger = logging.getLogger(__name__)

UNITS = {"positions": "Angstrom", "forces": "eV/Angstrom"}


def meta_path(path: str | Path) -> Path:
    """``data.jsonl`` -> ``data.meta.json``; other names get ``.meta.json`` appended."""
    path = Path(path)
    if path.suffix == ".jsonl":
        return path.with_suffix(".meta.json")
    return path.with_name(path.name + ".meta.json")


def _metadata(dataset: Dataset) -> dict[str, Any]:
    lj = dataset.lj or LJParams.argon()
    return {
        "format": DATASET_FORMAT,
        "version": DATASET_VERSION,
        "units": UNITS,
        "seed": dataset.seed,
        "sigma": dataset.protocol.sigma,
        "r_min": dataset.protocol.r_min,
        "split_fractions": list(dataset.protocol.split),
        "counts": dataset.counts(),
        "input_std": dataset.input_std,
        "output_std": dataset.output_std,
        "rejected": dataset.rejected,
        "lj": {"epsilon_eV": lj.epsilon, "r0_A": lj.r0},
    }


def save_dataset(dataset: Dataset, path: str | Path) -> Path:
    """
    One record per line: positions, forces and split tag.

    Output is byte-identical for identical datasets.
    """
    target = ensure_parent(resolve_path(path))
    sidecar = meta_path(target)
    try:
        with open(target, "w", encoding="utf-8") as f:
            for positions, forces, split in zip(
                dataset.positions.tolist(), dataset.forces.tolist(), dataset.splits.tolist()
            ):
                record = {"positions": positions, "forces": forces, "split": split}
                f.write(json.dumps(record) + "\n")
        with open(sidecar, "w", encoding="utf-8") as f:
            json.dump(_metadata(dataset), f, indent=2)
            f.write("\n")
    except OSError as exc:
        raise StorageError(f"cannot write dataset ({exc.strerror})", exc.filename or target) from exc

    logger.info("wrote %d records to %s", len(dataset), target)
    return target


def _read_json(path: Path, what: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as exc:
        raise StorageError(f"cannot read {what} ({exc.strerror})", path) from exc
    except json.JSONDecodeError as exc:
        raise StorageError(f"malformed {what} ({exc.msg})", path) from exc


def load_dataset(path: str | Path) -> Dataset:
    target = resolve_path(path)
    meta = _read_json(meta_path(target), "dataset metadata")
    if meta.get("format") != DATASET_FORMAT or meta.get("version") != DATASET_VERSION:
        raise StorageError(
            f"dataset format/version mismatch (got {meta.get('format')!r} v{meta.get('version')})",
            meta_path(target),
        )

    positions, forces, splits = [], [], []
    try:
        with open(target, "r", encoding="utf-8") as f:
            for line_no, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                    positions.append(record["positions"])
                    forces.append(record["forces"])
                    splits.append(record["split"])
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise StorageError(f"malformed record on line {line_no}", target) from exc
    except OSError as exc:
        if isinstance(exc, StorageError):
            raise
        raise StorageError(f"cannot read dataset ({exc.strerror})", target) from exc

    try:
        protocol = DatasetProtocol.build(
            sigma=meta["sigma"], r_min=meta["r_min"], split=tuple(meta["split_fractions"])
        )
        lj = LJParams.build(epsilon=meta["lj"]["epsilon_eV"], r0=meta["lj"]["r0_A"])
        return Dataset(
            positions=np.array(positions, dtype=np.float64).reshape(len(positions), -1, 3),
            forces=np.array(forces, dtype=np.float64).reshape(len(forces), -1, 3),
            splits=np.array(splits, dtype=str),
            input_std=float(meta["input_std"]),
            output_std=float(meta["output_std"]),
            seed=meta.get("seed"),
            protocol=protocol,
            lj=lj,
            rejected=int(meta.get("rejected", 0)),
        )
    except KeyError as exc:
        raise StorageError(f"dataset metadata lacks {exc.args[0]!r}", meta_path(target)) from exc
    except (ContractViolation, ValueError) as exc:
        raise StorageError(f"inconsistent dataset ({exc})", target) from exc
