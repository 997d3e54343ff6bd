"""Output path resolution shared by the file writers."""

from pathlib import Path

from ..config import OUTPUT_DIR
from ..core.errors import StorageError


def resolve_path(path: str | Path) -> Path:
    """Absolute paths pass through; relative ones resolve against OUTPUT_DIR."""
    path = Path(path).expanduser()
    return path if path.is_absolute() else (OUTPUT_DIR / path)


def ensure_parent(path: Path) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise StorageError(f"cannot create directory ({exc.strerror})", path.parent) from exc
    return path
