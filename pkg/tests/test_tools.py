import asyncio
import copy
import json

from conftest import SMALL_RUN, write_config
from enn_argon import __version__
from enn_argon.server import HANDLERS, handle_call_tool
from enn_argon.storage import load_checkpoint
from enn_argon.tools import (
    check_tool,
    evaluate_tool,
    gen_data_tool,
    get_version_tool,
    simulate_tool,
    train_tool,
)


def _call(tool, arguments):
    return json.loads(asyncio.run(tool(arguments)))


def test_get_version_tool_reports_formats():
    data = _call(get_version_tool, {})
    assert data["version"] == __version__
    assert data["checkpoint_version"] == 1
    assert data["dataset_version"] == 1


def test_pipeline_tools_end_to_end(small_config, tmp_path):
    data = _call(gen_data_tool, {"out": str(tmp_path / "d.jsonl"), "count": 10, "config": small_config})
    assert data["records"] == 10

    trained = _call(
        train_tool,
        {"dataset": data["dataset"], "out": str(tmp_path / "m.json"), "iterations": 5, "config": small_config},
    )
    assert trained["iterations"] == 5

    evaluated = _call(evaluate_tool, {"dataset": data["dataset"], "checkpoint": trained["checkpoint"], "split": "val"})
    assert evaluated["samples"] == 2

    simulated = _call(simulate_tool, {"out": str(tmp_path / "md"), "steps": 2, "samples": 1, "config": small_config})
    assert simulated["rmsd_positions_A"]["max"] == 0.0


def test_missing_arguments_are_reported():
    for tool, names in (
        (gen_data_tool, "out"),
        (train_tool, "dataset, out"),
        (evaluate_tool, "dataset"),
        (simulate_tool, "out"),
    ):
        data = _call(tool, {})
        assert data["type"] == "UsageError"
        assert names in data["error"]


def test_storage_errors_come_back_as_json(tmp_path):
    data = _call(evaluate_tool, {"dataset": str(tmp_path / "absent.jsonl")})
    assert data["type"] == "StorageError"


def test_check_tool_returns_the_report(small_config):
    data = _call(check_tool, {"mode": "descriptors", "config": small_config, "seed": 1})
    assert data["passed"] is True
    assert data["permutation_bit_identical"] is True
    assert data["gnn_reduction_bit_identical"] is True


def test_check_tool_keeps_the_report_of_a_failed_suite(tmp_path):
    overrides = copy.deepcopy(SMALL_RUN)
    overrides["checks"]["parity"]["threshold"] = 0.0
    data = _call(check_tool, {"mode": "parity", "config": write_config(tmp_path / "s.yaml", overrides)})
    assert data["passed"] is False
    assert data["type"] == "PropertySuiteFailure"


def test_check_tool_rejects_unknown_mode():
    data = _call(check_tool, {"mode": "symmetry"})
    assert data["type"] == "UsageError"


def test_server_exposes_every_tool():
    assert set(HANDLERS) == {"get_version", "gen_data", "train", "evaluate", "simulate", "check"}


def test_unknown_tool_name():
    content = asyncio.run(handle_call_tool("frobnicate", {}))
    assert content[0].text == "Unknown tool: frobnicate"


def test_train_tool_forwards_fire_overrides(small_config, tmp_path):
    data = _call(gen_data_tool, {"out": str(tmp_path / "d.jsonl"), "config": small_config})
    arguments = {
        "dataset": data["dataset"],
        "out": str(tmp_path / "m.json"),
        "iterations": 2,
        "fire": {"pseudo_mass": 0.5},
        "config": small_config,
    }
    trained = _call(train_tool, arguments)
    assert load_checkpoint(trained["checkpoint"]).fire.pseudo_mass == 0.5

    arguments["fire"] = {"momentum": 0.9}
    assert _call(train_tool, arguments)["type"] == "ContractViolation"
