"""MCP stdio server exposing the enn-argon pipeline as local tools."""

import asyncio
from typing import Any, Awaitable, Callable

import mcp.server.stdio
from mcp import types
from mcp.server.lowlevel import NotificationOptions, Server
from mcp.server.models import InitializationOptions

from . import __version__
from .services import MODES
from .tools import (
    check_tool,
    evaluate_tool,
    gen_data_tool,
    get_version_tool,
    simulate_tool,
    train_tool,
)

server = Server("enn-argon")

_SEED = {"type": "integer", "description": "Global seed; data, init, velocity and check streams derive from it."}
_CONFIG = {"type": "string", "description": "Optional YAML file deep-merged over the curated defaults."}
_CHECKPOINT = {
    "type": "string",
    "description": "Checkpoint JSON path, or 'analytic' for the exact Lennard-Jones forces.",
}

HANDLERS: dict[str, Callable[[dict], Awaitable[str]]] = {
    "get_version": get_version_tool,
    "gen_data": gen_data_tool,
    "train": train_tool,
    "evaluate": evaluate_tool,
    "simulate": simulate_tool,
    "check": check_tool,
}


@server.list_tools()
async def handle_list_tools() -> list[types.Tool]:
    """List all enn-argon tools."""
    return [
        types.Tool(
            name="get_version",
            description="Get the enn-argon version and file-format versions",
            inputSchema={"type": "object", "properties": {}},
        ),
        types.Tool(
            name="gen_data",
            description="Generate a four-atom Lennard-Jones Argon force dataset (JSON lines + metadata).",
            inputSchema={
                "type": "object",
                "properties": {
                    "out": {"type": "string", "description": "Output .jsonl path."},
                    "count": {"type": "integer", "description": "Number of configurations."},
                    "seed": _SEED,
                    "config": _CONFIG,
                },
                "required": ["out"],
            },
        ),
        types.Tool(
            name="train",
            description="Train an equivariant network on a dataset with FIRE; writes checkpoint and loss history.",
            inputSchema={
                "type": "object",
                "properties": {
                    "dataset": {"type": "string", "description": "Dataset .jsonl path."},
                    "out": {"type": "string", "description": "Checkpoint .json path."},
                    "arch": {
                        "type": "string",
                        "description": "Layer widths such as '6-50-90-100-80-50-4'.",
                    },
                    "iterations": {"type": "integer", "description": "Maximum FIRE iterations."},
                    "dt": {"type": "number", "description": "Initial FIRE time step."},
                    "log_interval": {
                        "type": "integer",
                        "description": "Iterations between validation-loss samples.",
                        "default": 1000,
                    },
                    "fire": {
                        "type": "object",
                        "description": "FIRE hyperparameter overrides (n_min, f_inc, f_dec, alpha_start, f_alpha, dt_max, pseudo_mass).",
                    },
                    "seed": _SEED,
                    "config": _CONFIG,
                },
                "required": ["dataset", "out"],
            },
        ),
        types.Tool(
            name="evaluate",
            description="Force RMSD (eV/Angstrom) of a checkpoint on one dataset split.",
            inputSchema={
                "type": "object",
                "properties": {
                    "checkpoint": _CHECKPOINT,
                    "dataset": {"type": "string", "description": "Dataset .jsonl path."},
                    "split": {
                        "type": "string",
                        "enum": ["train", "val", "test"],
                        "default": "test",
                    },
                    "out": {"type": "string", "description": "Optional scatter CSV path."},
                    "config": _CONFIG,
                },
                "required": ["dataset"],
            },
        ),
        types.Tool(
            name="simulate",
            description="Velocity-Verlet MD of the four-atom system, analytic reference vs a checkpoint.",
            inputSchema={
                "type": "object",
                "properties": {
                    "out": {"type": "string", "description": "Prefix of the CSV outputs."},
                    "checkpoint": _CHECKPOINT,
                    "samples": {"type": "integer", "description": "Number of velocity samples."},
                    "steps": {"type": "integer", "description": "Integration steps per sample."},
                    "dt": {"type": "number", "description": "Time step in fs."},
                    "seed": _SEED,
                    "config": _CONFIG,
                },
                "required": ["out"],
            },
        ),
        types.Tool(
            name="check",
            description="Run a property suite and report the maximum deviation against its threshold.",
            inputSchema={
                "type": "object",
                "properties": {
                    "mode": {"type": "string", "enum": list(MODES), "default": "equivariance"},
                    "checkpoint": {
                        "type": "string",
                        "description": "Optional checkpoint; random networks are used otherwise.",
                    },
                    "seed": _SEED,
                    "config": _CONFIG,
                },
            },
        ),
    ]


@server.call_tool()
async def handle_call_tool(
    name: str, arguments: dict[str, Any]
) -> list[types.TextContent]:
    """Handle tool calls."""
    handler = HANDLERS.get(name)
    if handler is None:
        return [types.TextContent(type="text", text=f"Unknown tool: {name}")]
    try:
        result = await handler(arguments or {})
        return [types.TextContent(type="text", text=result)]
    except Exception as e:
        return [
            types.TextContent(
                type="text",
                text=f"Error executing {name}: {str(e)}",
            )
        ]


async def main():
    """Run the MCP server."""
    async with mcp.server.stdio.stdio_server() as (read_stream, write_stream):
        await server.run(
            read_stream,
            write_stream,
            InitializationOptions(
                server_name="enn-argon",
                server_version=__version__,
                capabilities=server.get_capabilities(
                    notification_options=NotificationOptions(),
                    experimental_capabilities={},
                ),
            ),
        )


def run() -> None:
    """Sync console entrypoint for the MCP server."""
    asyncio.run(main())


if __name__ == "__main__":
    run()
