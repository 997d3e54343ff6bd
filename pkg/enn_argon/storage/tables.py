"""CSV histories, metrics and traces; column names carry their units."""

import csv
from pathlib import Path
from typing import Iterable, Sequence

from ..core.errors import StorageError
from .paths import ensure_parent, resolve_path


def write_table(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """
    Write a header row and then one row per record.

    Floats go through ``str``, which is the shortest round-trip decimal.
    """
    target = ensure_parent(resolve_path(path))
    try:
        with open(target, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                if len(row) != len(header):
                    raise StorageError(
                        f"row of {len(row)} values for {len(header)} columns", target
                    )
                writer.writerow(row)
    except OSError as exc:
        if isinstance(exc, StorageError):
            raise
        raise StorageError(f"cannot write table ({exc.strerror})", target) from exc
    return target


def _cell(value: str) -> float | str:
    try:
        return float(value)
    except ValueError:
        return value


def read_table(path: str | Path) -> tuple[list[str], list[list[float | str]]]:
    """
    Header and rows of a table written by write_table.

    Numeric cells come back as floats; text cells such as a trace's
    ``provider`` column stay strings.
    """
    target = resolve_path(path)
    try:
        with open(target, "r", newline="", encoding="utf-8") as f:
            reader = csv.reader(f)
            header = next(reader)
            rows = [[_cell(value) for value in row] for row in reader]
    except OSError as exc:
        raise StorageError(f"cannot read table ({exc.strerror})", target) from exc
    except StopIteration as exc:
        raise StorageError("malformed table: no header", target) from exc
    for number, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise StorageError(
                f"malformed table: line {number} has {len(row)} values for {len(header)} columns",
                target,
            )
    return header, rows
