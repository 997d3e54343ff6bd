"""Pipeline service: dataset generation, training, evaluation and MD runs."""

import logging
import re
from pathlib import Path
from typing import Any

import numpy as np

from ..config import load_defaults
from ..core.errors import ContractViolation
from ..core.models import NetworkConfig
from ..optim.fire import FireConfig
from ..optim.training import TrainConfig, TrainingData, evaluate_loss, train, xavier_init
from ..physics.dataset import generate_dataset
from ..physics.lj import LJParams
from ..physics.md import (
    AnalyticForces,
    AtomSystem,
    MDProtocol,
    NetworkForces,
    init_velocities,
    simulate,
)
from ..physics.metrics import energy_rmsd, force_rmsd, position_rmsd, windowed_means
from ..physics.units import K_B
from ..storage import (
    Checkpoint,
    load_checkpoint,
    load_dataset,
    resolve_path,
    save_checkpoint,
    save_dataset,
    write_table,
)
from ..utils.seeding import SeedStreams, split_seed

logger = logging.getLogger(__name__)

ANALYTIC = "analytic"
_ARCH_PATTERN = re.compile(r"^\s*\d+(\s*[-,x]\s*\d+)+\s*$")


def parse_arch(text: str) -> tuple[int, ...]:
    """``"6-50-90-100-80-50-4"`` (also ``,`` or ``x`` separated) -> widths."""
    if not isinstance(text, str) or not _ARCH_PATTERN.match(text):
        raise ContractViolation(
            f"architecture must look like '6-50-90-100-80-50-4', got {text!r}"
        )
    widths = tuple(int(w) for w in re.split(r"\s*[-,x]\s*", text.strip()))
    if widths[0] != 6 or widths[-1] != 4:
        raise ContractViolation(
            f"force models map 6 relative positions to 4 forces; got widths {list(widths)}"
        )
    if any(w < 1 for w in widths):
        raise ContractViolation(f"every width must be >= 1, got {list(widths)}")
    return widths


def _predict(provider, positions: np.ndarray) -> np.ndarray:
    if isinstance(provider, NetworkForces):
        return provider.predict(positions)
    predicted = np.empty_like(positions)
    for k, pos in enumerate(positions):
        predicted[k] = provider(pos)
    return predicted


def _sibling(path: Path, suffix: str) -> Path:
    """``model.json`` -> ``model<suffix>``."""
    return path.with_name(path.stem + suffix)


class PipelineService:
    """Run the Argon pipeline end to end from the curated defaults."""

    def __init__(self, config_path: str | Path | None = None) -> None:
        self.defaults = load_defaults(config_path)

    def _seed(self, seed: int | None) -> int:
        return int(self.defaults.get("seed", 0) if seed is None else seed)

    def _lj(self) -> LJParams:
        lj = self.defaults.get("lj", {})
        return LJParams.build(
            epsilon=float(lj.get("epsilon_kelvin", 120.0)) * K_B,
            r0=float(lj.get("r0", 3.4)),
        )

    def network_config(self, arch: str | None = None) -> NetworkConfig:
        section = self.defaults["network"]
        widths = parse_arch(arch) if arch else tuple(section["widths"])
        depth = len(widths) - 1
        activations = [section["hidden_activation"]] * (depth - 1) + [section["output_activation"]]
        return NetworkConfig.build(
            n=section["n"],
            m=section.get("m", 0),
            widths=widths,
            activations=activations,
            residue_a=section["residue_a"],
            field=section.get("field", "real"),
        )

    def gen_data(
        self,
        out: str | Path,
        count: int | None = None,
        seed: int | None = None,
    ) -> dict[str, Any]:
        section = self.defaults["dataset"]
        seed = self._seed(seed)
        dataset = generate_dataset(
            int(section["count"] if count is None else count),
            split_seed(seed)["data"],
            sigma=section["sigma"],
            r_min=section["r_min"],
            p=self._lj(),
            split=tuple(section["split"]),
        )
        dataset.seed = seed
        target = save_dataset(dataset, out)
        return {
            "dataset": str(target),
            "records": len(dataset),
            "counts": dataset.counts(),
            "rejected": dataset.rejected,
            "input_std": dataset.input_std,
            "output_std": dataset.output_std,
            "seed": seed,
        }

    def train(
        self,
        dataset: str | Path,
        out: str | Path,
        arch: str | None = None,
        iterations: int | None = None,
        seed: int | None = None,
        log_interval: int | None = None,
        dt: float | None = None,
        fire: dict[str, Any] | None = None,
    ) -> dict[str, Any]:
        """
        Train a fresh Xavier-initialized network with FIRE.

        ``fire`` overrides individual FIRE hyperparameters on top of the
        configured ones; ``iterations`` and ``dt`` win over it. Writes the
        checkpoint to ``out`` and the loss history next to it as
        ``<stem>.history.csv``.
        """
        seed = self._seed(seed)
        data = load_dataset(dataset)
        config = self.network_config(arch)

        fire_values = dict(self.defaults["fire"])
        overrides = {key: value for key, value in (fire or {}).items() if value is not None}
        unknown = sorted(set(overrides) - set(FireConfig.model_fields))
        if unknown:
            raise ContractViolation(f"unknown FIRE hyperparameters: {unknown}")
        fire_values.update(overrides)
        if iterations is not None:
            fire_values["i_max"] = int(iterations)
        if dt is not None:
            fire_values["dt_init"] = float(dt)
            fire_values["dt_max"] = max(float(dt), fire_values["dt_max"])
        fire_cfg = FireConfig.build(**fire_values)
        train_values = dict(self.defaults.get("training", {}))
        if log_interval is not None:
            train_values["log_interval"] = int(log_interval)
        train_cfg = TrainConfig.build(**train_values)

        net = xavier_init(config, SeedStreams(seed).rng("init"))
        batches = TrainingData(
            x_train=data.inputs("train"),
            t_train=data.targets("train"),
            x_val=data.inputs("val"),
            t_val=data.targets("val"),
        )
        logger.info(
            "training widths %s on %d samples for at most %d iterations",
            list(config.widths),
            len(batches.x_train),
            fire_cfg.i_max,
        )
        result = train(net, batches, fire_cfg, train_cfg)

        checkpoint_path = resolve_path(out)
        history_path = write_table(
            _sibling(checkpoint_path, ".history.csv"),
            ["iteration", "train_loss", "val_loss"],
            ([row.iteration, row.train_loss, row.val_loss] for row in result.history),
        )
        training = {
            "iterations": result.fire.state.iteration,
            "stop_reason": result.fire.reason,
            "fire_resets": result.fire.resets,
            "final_train_loss": result.final_train_loss,
            "final_val_loss": result.final_val_loss,
            "seed": seed,
            "dataset": str(resolve_path(dataset)),
        }
        save_checkpoint(
            Checkpoint(
                network=result.network,
                input_std=data.input_std,
                output_std=data.output_std,
                dataset_seed=data.seed,
                loss_normalizer=result.normalizer,
                training=training,
                fire=fire_cfg,
            ),
            checkpoint_path,
        )
        return {"checkpoint": str(checkpoint_path), "history": str(history_path), **training}

    def _force_provider(self, checkpoint: str | Path):
        if str(checkpoint) == ANALYTIC:
            return AnalyticForces(self._lj()), None
        loaded = load_checkpoint(checkpoint)
        return NetworkForces(loaded.network, loaded.input_std, loaded.output_std), loaded

    def evaluate(
        self,
        checkpoint: str | Path,
        dataset: str | Path,
        split: str = "test",
        out: str | Path | None = None,
    ) -> dict[str, Any]:
        """
        Force RMSD (eV/Angstrom) over every component of one split.

        ``checkpoint="analytic"`` evaluates the exact forces themselves. With
        ``out`` a scatter table of (analytic, predicted) components is written.
        """
        data = load_dataset(dataset)
        provider, loaded = self._force_provider(checkpoint)
        idx = data.indices(split)
        reference = data.forces[idx]
        predicted = _predict(provider, data.positions[idx])
        report: dict[str, Any] = {
            "checkpoint": str(checkpoint),
            "split": split,
            "samples": int(len(idx)),
            "force_rmsd_eV_A": force_rmsd(reference, predicted),
            "force_std_eV_A": float(np.std(reference)) if len(idx) else 0.0,
        }
        if loaded is not None and len(idx):
            x = data.inputs(split)
            t = data.targets(split)
            report["loss"] = evaluate_loss(loaded.network, x, t)
        if out is not None:
            report["scatter"] = str(
                write_table(
                    out,
                    ["analytic_eV_A", "predicted_eV_A"],
                    zip(reference.ravel().tolist(), predicted.ravel().tolist()),
                )
            )
        logger.info(
            "%s split: force RMSD %.6g eV/A over %d samples",
            split,
            report["force_rmsd_eV_A"],
            report["samples"],
        )
        return report

    def md_protocol(self, **overrides: Any) -> MDProtocol:
        values = dict(self.defaults.get("md", {}))
        values.update({k: v for k, v in overrides.items() if v is not None})
        values["initial_positions"] = tuple(tuple(p) for p in values["initial_positions"])
        return MDProtocol.build(**values)

    def simulate(
        self,
        out_prefix: str | Path,
        checkpoint: str | Path = ANALYTIC,
        samples: int | None = None,
        steps: int | None = None,
        dt: float | None = None,
        seed: int | None = None,
        window: int = 500,
    ) -> dict[str, Any]:
        """
        Run every sample under the analytic reference and under ``checkpoint``.

        All samples start from the same positions with their own seeded
        velocities. Writes ``<prefix>_rmsd.csv``, ``<prefix>_traces.csv`` and
        ``<prefix>_energy.csv``.
        """
        seed = self._seed(seed)
        protocol = self.md_protocol(samples=samples, steps=steps, dt=dt)
        lj = self._lj()
        reference_forces = AnalyticForces(lj)
        model_forces, _ = self._force_provider(checkpoint)

        positions = np.array(protocol.initial_positions, dtype=np.float64)
        masses = np.full(len(positions), protocol.mass)
        rng = SeedStreams(seed).rng("velocities")

        runs = {"analytic": [], "model": []}
        for sample in range(protocol.samples):
            momenta = init_velocities(protocol.temperature, masses, rng)
            start = AtomSystem(positions.copy(), momenta, masses)
            runs["analytic"].append(simulate(start, reference_forces, protocol.steps, protocol.dt, lj))
            runs["model"].append(simulate(start, model_forces, protocol.steps, protocol.dt, lj))
            logger.info("sample %d/%d done", sample + 1, protocol.samples)

        prefix = resolve_path(out_prefix)
        report: dict[str, Any] = {
            "checkpoint": str(checkpoint),
            "samples": protocol.samples,
            "steps": protocol.steps,
            "dt_fs": protocol.dt,
            "seed": seed,
        }
        if protocol.samples == 0:
            return report

        ref_pos = np.stack([t.positions for t in runs["analytic"]])
        model_pos = np.stack([t.positions for t in runs["model"]])
        ref_energy = np.stack([t.energy for t in runs["analytic"]])
        model_energy = np.stack([t.energy for t in runs["model"]])
        rmsd_pos = position_rmsd(ref_pos, model_pos)
        rmsd_energy = energy_rmsd(ref_energy, model_energy)
        frames = np.arange(protocol.steps + 1)

        rmsd_path = write_table(
            f"{prefix}_rmsd.csv",
            ["step", "time_fs", "rmsd_positions_A", "rmsd_energy_eV"],
            (
                [int(k), float(k * protocol.dt), float(p), float(e)]
                for k, p, e in zip(frames, rmsd_pos, rmsd_energy)
            ),
        )
        traces_path = write_table(
            f"{prefix}_traces.csv",
            ["provider", "sample", "step", "atom", "x_A", "y_A", "z_A"],
            (
                [name, s, int(k), a, *map(float, traj.positions[k, a])]
                for name in ("analytic", "model")
                for s, traj in enumerate(runs[name])
                for k in frames
                for a in range(len(positions))
            ),
        )
        energy_path = write_table(
            f"{prefix}_energy.csv",
            ["provider", "sample", "step", "energy_eV"],
            (
                [name, s, int(k), float(traj.energy[k])]
                for name in ("analytic", "model")
                for s, traj in enumerate(runs[name])
                for k in frames
            ),
        )

        drift = np.abs(ref_energy - ref_energy[:, :1])
        report.update(
            {
                "rmsd_positions_A": {
                    "initial": float(rmsd_pos[0]),
                    "final": float(rmsd_pos[-1]),
                    "max": float(np.max(rmsd_pos)),
                    "window": window,
                    "window_means": windowed_means(rmsd_pos[1:], window).tolist() if window > 0 else [],
                },
                "rmsd_energy_eV": {
                    "final": float(rmsd_energy[-1]),
                    "max": float(np.max(rmsd_energy)),
                    "finite": bool(np.all(np.isfinite(rmsd_energy))),
                },
                "analytic_energy_drift_eV": float(np.max(drift)),
                "files": {
                    "rmsd": str(rmsd_path),
                    "traces": str(traces_path),
                    "energy": str(energy_path),
                },
            }
        )
        return report

