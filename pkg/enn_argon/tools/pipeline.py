"""Pipeline MCP tools: gen_data, train, evaluate and simulate."""

import json
from typing import Any, Callable

from ..core.errors import EnnError
from ..services import ANALYTIC, PipelineService


def _error(exc: Exception) -> str:
    return json.dumps({"error": str(exc), "type": type(exc).__name__}, indent=2)


def _run(call: Callable[[PipelineService], dict[str, Any]], arguments: dict) -> str:
    try:
        service = PipelineService(arguments.get("config"))
        return json.dumps(call(service), indent=2)
    except (EnnError, OSError, KeyError, TypeError, ValueError) as exc:
        return _error(exc)


def _missing(arguments: dict, *names: str) -> str | None:
    absent = [name for name in names if not arguments.get(name)]
    if absent:
        return json.dumps(
            {"error": f"missing required argument(s): {', '.join(absent)}", "type": "UsageError"},
            indent=2,
        )
    return None


async def gen_data_tool(arguments: dict) -> str:
    """Generate a Lennard-Jones force dataset as JSON lines plus metadata."""
    if problem := _missing(arguments, "out"):
        return problem
    return _run(
        lambda s: s.gen_data(arguments["out"], count=arguments.get("count"), seed=arguments.get("seed")),
        arguments,
    )


async def train_tool(arguments: dict) -> str:
    """Train a network on a dataset and write checkpoint plus loss history."""
    if problem := _missing(arguments, "dataset", "out"):
        return problem
    return _run(
        lambda s: s.train(
            arguments["dataset"],
            arguments["out"],
            arch=arguments.get("arch"),
            iterations=arguments.get("iterations"),
            seed=arguments.get("seed"),
            log_interval=arguments.get("log_interval"),
            dt=arguments.get("dt"),
            fire=arguments.get("fire"),
        ),
        arguments,
    )


async def evaluate_tool(arguments: dict) -> str:
    """Force RMSD of a checkpoint (or the analytic forces) on one split."""
    if problem := _missing(arguments, "dataset"):
        return problem
    return _run(
        lambda s: s.evaluate(
            arguments.get("checkpoint") or ANALYTIC,
            arguments["dataset"],
            split=arguments.get("split") or "test",
            out=arguments.get("out"),
        ),
        arguments,
    )


async def simulate_tool(arguments: dict) -> str:
    """Analytic-reference MD against a checkpoint's forces, with RMSD tables."""
    if problem := _missing(arguments, "out"):
        return problem
    return _run(
        lambda s: s.simulate(
            arguments["out"],
            checkpoint=arguments.get("checkpoint") or ANALYTIC,
            samples=arguments.get("samples"),
            steps=arguments.get("steps"),
            dt=arguments.get("dt"),
            seed=arguments.get("seed"),
        ),
        arguments,
    )
