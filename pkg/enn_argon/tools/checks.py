"""Property-suite MCP tool."""

import json

from ..core.errors import EnnError, PropertySuiteFailure
from ..services import MODES, CheckService


async def check_tool(arguments: dict) -> str:
    """
    Run one property suite and return its report.

    A failed suite still returns the report, with ``passed`` false and the
    failure message under ``error``.
    """
    mode = arguments.get("mode") or "equivariance"
    if mode not in MODES:
        return json.dumps(
            {"error": f"mode must be one of {list(MODES)}, got {mode!r}", "type": "UsageError"},
            indent=2,
        )
    try:
        report = CheckService(arguments.get("config")).run(
            mode, seed=arguments.get("seed"), checkpoint=arguments.get("checkpoint")
        )
    except PropertySuiteFailure as exc:
        report = {**exc.report, "error": str(exc), "type": type(exc).__name__}
    except (EnnError, OSError, KeyError, TypeError, ValueError) as exc:
        return json.dumps({"error": str(exc), "type": type(exc).__name__}, indent=2)
    return json.dumps(report, indent=2)
