"""Service layer shared by the CLI and the MCP tools."""

from .checks import MODES, CheckService, random_config, random_network
from .pipeline import ANALYTIC, PipelineService, parse_arch

__all__ = [
    "MODES",
    "CheckService",
    "random_config",
    "random_network",
    "ANALYTIC",
    "PipelineService",
    "parse_arch",
]
