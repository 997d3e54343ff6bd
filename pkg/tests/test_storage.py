import json

import numpy as np
import pytest

from enn_argon.core import StorageError
from enn_argon.optim import FireConfig
from enn_argon.physics import generate_dataset
from enn_argon.storage import (
    Checkpoint,
    load_checkpoint,
    load_dataset,
    meta_path,
    read_table,
    save_checkpoint,
    save_dataset,
    write_table,
)


@pytest.fixture(scope="module")
def dataset():
    return generate_dataset(10, seed=0)


def test_meta_path_naming(tmp_path):
    assert meta_path(tmp_path / "data.jsonl") == tmp_path / "data.meta.json"
    assert meta_path(tmp_path / "data") == tmp_path / "data.meta.json"


def test_dataset_round_trip_is_bit_exact(dataset, tmp_path):
    path = save_dataset(dataset, tmp_path / "data.jsonl")
    loaded = load_dataset(path)
    assert np.array_equal(loaded.positions, dataset.positions)
    assert np.array_equal(loaded.forces, dataset.forces)
    assert loaded.splits.tolist() == dataset.splits.tolist()
    assert (loaded.input_std, loaded.output_std) == (dataset.input_std, dataset.output_std)
    assert loaded.seed == 0
    assert loaded.protocol == dataset.protocol
    assert loaded.lj == dataset.lj


def test_dataset_files_are_byte_identical_across_writes(dataset, tmp_path):
    a = save_dataset(dataset, tmp_path / "a.jsonl")
    b = save_dataset(dataset, tmp_path / "b.jsonl")
    assert a.read_bytes() == b.read_bytes()
    assert meta_path(a).read_bytes() == meta_path(b).read_bytes()


def test_dataset_record_layout(dataset, tmp_path):
    path = save_dataset(dataset, tmp_path / "data.jsonl")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 10
    record = json.loads(lines[0])
    assert set(record) == {"positions", "forces", "split"}
    assert np.array(record["positions"]).shape == (4, 3)

    meta = json.loads(meta_path(path).read_text(encoding="utf-8"))
    assert meta["counts"] == {"train": 6, "val": 2, "test": 2}
    assert meta["units"] == {"positions": "Angstrom", "forces": "eV/Angstrom"}


def test_missing_metadata_is_a_storage_error(dataset, tmp_path):
    path = save_dataset(dataset, tmp_path / "data.jsonl")
    meta_path(path).unlink()
    with pytest.raises(StorageError) as excinfo:
        load_dataset(path)
    assert "data.meta.json" in str(excinfo.value)


def test_malformed_record_names_the_file(dataset, tmp_path):
    path = save_dataset(dataset, tmp_path / "data.jsonl")
    with open(path, "a", encoding="utf-8") as f:
        f.write("{not json}\n")
    with pytest.raises(StorageError) as excinfo:
        load_dataset(path)
    assert str(path) in str(excinfo.value)


def test_unwritable_path_is_a_storage_error(dataset, tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("", encoding="utf-8")
    with pytest.raises(StorageError):
        save_dataset(dataset, blocker / "data.jsonl")


def test_checkpoint_round_trip_is_bit_exact(small_complex_net, tmp_path):
    checkpoint = Checkpoint(
        network=small_complex_net,
        input_std=2.5,
        output_std=0.125,
        dataset_seed=3,
        loss_normalizer=48,
        training={"iterations": 10, "stop_reason": "max_iterations"},
        fire=FireConfig(i_max=10),
    )
    path = save_checkpoint(checkpoint, tmp_path / "model.json")
    loaded = load_checkpoint(path)
    assert loaded.network.config == small_complex_net.config
    for a, b in zip(loaded.network.layers, small_complex_net.layers):
        assert np.array_equal(a.W, b.W) and np.array_equal(a.b, b.b)
    assert (loaded.input_std, loaded.output_std) == (2.5, 0.125)
    assert loaded.dataset_seed == 3 and loaded.loss_normalizer == 48
    assert loaded.training["stop_reason"] == "max_iterations"
    assert loaded.fire == FireConfig(i_max=10)


def test_checkpoint_records_format_and_version(small_real_net, tmp_path):
    path = save_checkpoint(Checkpoint(network=small_real_net), tmp_path / "model.json")
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["format"] == "enn-argon-checkpoint"
    assert data["version"] == 1
    assert data["network"]["widths"] == [4, 5, 3, 2]


def test_foreign_json_is_not_a_checkpoint(tmp_path):
    path = tmp_path / "other.json"
    path.write_text(json.dumps({"format": "something-else"}), encoding="utf-8")
    with pytest.raises(StorageError):
        load_checkpoint(path)


def test_missing_checkpoint_is_a_storage_error(tmp_path):
    with pytest.raises(StorageError):
        load_checkpoint(tmp_path / "absent.json")


def test_table_round_trip(tmp_path):
    rows = [[0, 0.1, 1e-300], [1, 2.0 / 3.0, float("inf")]]
    path = write_table(tmp_path / "t.csv", ["step", "value_eV", "tiny"], rows)
    header, values = read_table(path)
    assert header == ["step", "value_eV", "tiny"]
    assert values == [[0.0, 0.1, 1e-300], [1.0, 2.0 / 3.0, float("inf")]]


def test_table_rejects_ragged_rows(tmp_path):
    with pytest.raises(StorageError):
        write_table(tmp_path / "t.csv", ["a", "b"], [[1.0]])


def test_table_keeps_text_cells(tmp_path):
    path = write_table(tmp_path / "t.csv", ["provider", "step", "energy_eV"], [["model", 0, -0.5]])
    _, rows = read_table(path)
    assert rows == [["model", 0.0, -0.5]]


def test_table_with_a_short_line_is_malformed(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("a,b\n1,2\n3\n", encoding="utf-8")
    with pytest.raises(StorageError, match="line 3"):
        read_table(path)
