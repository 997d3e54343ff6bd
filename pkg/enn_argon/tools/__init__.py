"""MCP tool implementations."""
from .checks import check_tool
from .pipeline import evaluate_tool, gen_data_tool, simulate_tool, train_tool
from .version import get_version_tool

__all__ = [
    "check_tool",
    "evaluate_tool",
    "gen_data_tool",
    "simulate_tool",
    "train_tool",
    "get_version_tool",
]
