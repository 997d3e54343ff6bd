"""Version tool implementation."""
import json

from .. import __version__
from ..config import CHECKPOINT_VERSION, DATASET_VERSION, DEFAULTS_FILE


async def get_version_tool(arguments: dict) -> str:
    """Package version and the file-format versions it reads and writes."""
    info = {
        "version": __version__,
        "checkpoint_version": CHECKPOINT_VERSION,
        "dataset_version": DATASET_VERSION,
        "defaults_file": str(DEFAULTS_FILE),
    }
    return json.dumps(info, indent=2)
