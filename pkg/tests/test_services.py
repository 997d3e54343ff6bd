import copy

import numpy as np
import pytest

from conftest import SMALL_RUN, write_config
from enn_argon.core import ContractViolation, PropertySuiteFailure, StorageError
from enn_argon.services import CheckService, PipelineService, parse_arch
from enn_argon.storage import load_checkpoint, load_dataset, read_table


@pytest.fixture
def service(small_config):
    return PipelineService(small_config)


@pytest.fixture
def dataset_path(service, tmp_path):
    return service.gen_data(tmp_path / "data.jsonl", seed=0)["dataset"]


@pytest.mark.parametrize(
    "text,widths",
    [
        ("6-50-90-100-80-50-4", (6, 50, 90, 100, 80, 50, 4)),
        ("6,8,4", (6, 8, 4)),
        ("6x4", (6, 4)),
    ],
)
def test_parse_arch(text, widths):
    assert parse_arch(text) == widths


@pytest.mark.parametrize("text", ["", "6", "6-a-4", "5-8-4", "6-8-3", "6-0-4"])
def test_parse_arch_rejects(text):
    with pytest.raises(ContractViolation):
        parse_arch(text)


def test_default_network_config():
    config = PipelineService().network_config()
    assert config.widths == (6, 50, 90, 100, 80, 50, 4)
    assert config.activations[-1] == "identity"
    assert set(config.activations[:-1]) == {"softsign_residue"}


def test_gen_data_report_and_split(service, tmp_path):
    report = service.gen_data(tmp_path / "data.jsonl", seed=0)
    assert report["records"] == 10
    assert report["counts"] == {"train": 6, "val": 2, "test": 2}
    assert load_dataset(report["dataset"]).seed == 0


def test_gen_data_is_reproducible_per_seed(service, tmp_path):
    a = service.gen_data(tmp_path / "a.jsonl", seed=7)["dataset"]
    b = service.gen_data(tmp_path / "b.jsonl", seed=7)["dataset"]
    c = service.gen_data(tmp_path / "c.jsonl", seed=8)["dataset"]
    assert open(a, "rb").read() == open(b, "rb").read()
    assert open(a, "rb").read() != open(c, "rb").read()


def test_train_writes_checkpoint_and_history(service, dataset_path, tmp_path):
    report = service.train(dataset_path, tmp_path / "model.json", seed=0)
    assert report["iterations"] == 20
    assert report["stop_reason"] == "max_iterations"

    header, rows = read_table(report["history"])
    assert header == ["iteration", "train_loss", "val_loss"]
    assert [row[0] for row in rows] == [0.0, 5.0, 10.0, 15.0, 20.0]

    checkpoint = load_checkpoint(report["checkpoint"])
    assert checkpoint.network.config.widths == (6, 5, 4)
    assert checkpoint.dataset_seed == 0
    assert checkpoint.loss_normalizer == 6 * 3 * 4
    assert checkpoint.fire.i_max == 20


def test_train_is_reproducible(service, dataset_path, tmp_path):
    a = service.train(dataset_path, tmp_path / "a.json", seed=3)
    b = service.train(dataset_path, tmp_path / "b.json", seed=3)
    assert a["final_train_loss"] == b["final_train_loss"]
    assert np.array_equal(
        load_checkpoint(a["checkpoint"]).network.layers[0].W,
        load_checkpoint(b["checkpoint"]).network.layers[0].W,
    )


def test_train_overrides(service, dataset_path, tmp_path):
    report = service.train(
        dataset_path, tmp_path / "m.json", arch="6-3-3-4", iterations=4, log_interval=2, dt=0.02
    )
    checkpoint = load_checkpoint(report["checkpoint"])
    assert checkpoint.network.config.widths == (6, 3, 3, 4)
    assert checkpoint.fire.dt_init == 0.02 and checkpoint.fire.dt_max == 0.02
    _, rows = read_table(report["history"])
    assert [row[0] for row in rows] == [0.0, 2.0, 4.0]


def test_train_fire_overrides_reach_the_checkpoint(service, dataset_path, tmp_path):
    report = service.train(
        dataset_path,
        tmp_path / "m.json",
        iterations=3,
        fire={"n_min": 2, "f_alpha": 0.9, "pseudo_mass": 0.5, "f_inc": None},
    )
    fire = load_checkpoint(report["checkpoint"]).fire
    assert (fire.n_min, fire.f_alpha, fire.pseudo_mass) == (2, 0.9, 0.5)
    assert fire.f_inc == 1.1
    assert fire.i_max == 3


def test_unknown_fire_override_is_rejected(service, dataset_path, tmp_path):
    with pytest.raises(ContractViolation, match="momentum"):
        service.train(dataset_path, tmp_path / "m.json", fire={"momentum": 0.9})


def test_evaluate_reproduces_the_validation_loss(service, dataset_path, tmp_path):
    trained = service.train(dataset_path, tmp_path / "model.json", seed=0)
    report = service.evaluate(trained["checkpoint"], dataset_path, split="val")
    assert report["samples"] == 2
    assert report["loss"] == pytest.approx(trained["final_val_loss"], rel=1e-12)
    assert report["force_rmsd_eV_A"] > 0


def test_analytic_evaluation_is_exact(service, dataset_path, tmp_path):
    report = service.evaluate("analytic", dataset_path, out=tmp_path / "scatter.csv")
    assert report["force_rmsd_eV_A"] == 0.0
    assert "loss" not in report
    header, rows = read_table(report["scatter"])
    assert header == ["analytic_eV_A", "predicted_eV_A"]
    assert len(rows) == 2 * 4 * 3
    assert all(a == p for a, p in rows)


def test_evaluate_missing_checkpoint(service, dataset_path, tmp_path):
    with pytest.raises(StorageError):
        service.evaluate(tmp_path / "absent.json", dataset_path)


def test_analytic_against_itself_has_zero_rmsd(service, tmp_path):
    report = service.simulate(tmp_path / "run", seed=0)
    assert report["samples"] == 2 and report["steps"] == 20
    assert report["rmsd_positions_A"]["max"] == 0.0
    assert report["rmsd_energy_eV"]["max"] == 0.0

    header, rows = read_table(report["files"]["rmsd"])
    assert header == ["step", "time_fs", "rmsd_positions_A", "rmsd_energy_eV"]
    assert len(rows) == 21
    assert rows[-1][:2] == [20.0, 20.0]

    traces = open(report["files"]["traces"], encoding="utf-8").read().splitlines()
    # header + 2 providers x 2 samples x 21 frames x 4 atoms
    assert len(traces) == 1 + 2 * 2 * 21 * 4
    assert traces[0] == "provider,sample,step,atom,x_A,y_A,z_A"

    header, rows = read_table(report["files"]["traces"])
    assert header[0] == "provider"
    assert {row[0] for row in rows} == {"analytic", "model"}

    header, rows = read_table(report["files"]["energy"])
    assert header == ["provider", "sample", "step", "energy_eV"]
    assert len(rows) == 2 * 2 * 21
    assert rows[0][:3] == ["analytic", 0.0, 0.0]


def test_simulate_with_a_checkpoint(service, dataset_path, tmp_path):
    trained = service.train(dataset_path, tmp_path / "model.json", seed=0)
    report = service.simulate(tmp_path / "run", checkpoint=trained["checkpoint"], steps=5, seed=1)
    assert report["rmsd_positions_A"]["initial"] == 0.0
    assert report["rmsd_positions_A"]["final"] > 0.0
    assert report["rmsd_energy_eV"]["finite"]


def test_simulate_without_samples_writes_nothing(service, tmp_path):
    report = service.simulate(tmp_path / "run", samples=0)
    assert "files" not in report
    assert not (tmp_path / "run_rmsd.csv").exists()


@pytest.mark.parametrize("mode", ["equivariance", "gradient", "parity", "descriptors"])
def test_check_suites_pass(small_config, mode):
    report = CheckService(small_config).run(mode, seed=0)
    assert report["passed"] is True
    assert report["mode"] == mode
    assert report["max_deviation"] < report["threshold"]


def test_check_suite_failure_carries_the_report(tmp_path):
    overrides = copy.deepcopy(SMALL_RUN)
    overrides["checks"]["parity"]["threshold"] = 0.0
    config = write_config(tmp_path / "strict.yaml", overrides)
    with pytest.raises(PropertySuiteFailure) as excinfo:
        CheckService(config).run("parity", seed=0)
    assert excinfo.value.report["passed"] is False
    assert excinfo.value.report["cases"] == 3


def test_check_on_a_trained_checkpoint(service, small_config, dataset_path, tmp_path):
    trained = service.train(dataset_path, tmp_path / "model.json", seed=0)
    report = CheckService(small_config).run("equivariance", seed=0, checkpoint=trained["checkpoint"])
    assert report["passed"] is True
    assert report["checkpoint"] == trained["checkpoint"]


def test_check_rejects_unknown_mode(small_config):
    with pytest.raises(ContractViolation):
        CheckService(small_config).run("symmetry")


def test_descriptor_suite_refuses_a_checkpoint(service, small_config, dataset_path, tmp_path):
    trained = service.train(dataset_path, tmp_path / "model.json", seed=0)
    with pytest.raises(ContractViolation):
        CheckService(small_config).run("descriptors", checkpoint=trained["checkpoint"])
