"""JSON checkpoints of trained networks."""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..config import CHECKPOINT_FORMAT, CHECKPOINT_VERSION
from ..core.errors import ContractViolation, StorageError
from ..core.models import Network, NetworkConfig
from ..optim.fire import FireConfig
from ..optim.params import flatten_params, unflatten_params
from .paths import ensure_parent, resolve_path

logger = logging.getLogger(__name__)


@dataclass
class Checkpoint:
    """A network together with what is needed to use and audit it."""

    network: Network
    input_std: float = 1.0
    output_std: float = 1.0
    dataset_seed: int | None = None
    loss_normalizer: int | None = None
    training: dict[str, Any] = field(default_factory=dict)
    fire: FireConfig | None = None

    def to_dict(self) -> dict[str, Any]:
        cfg = self.network.config
        return {
            "format": CHECKPOINT_FORMAT,
            "version": CHECKPOINT_VERSION,
            "network": {
                "n": cfg.n,
                "m": cfg.m,
                "widths": list(cfg.widths),
                "activations": list(cfg.activations),
                "residue_a": cfg.residue_a,
                "field": cfg.field,
            },
            "parameters": flatten_params(self.network).tolist(),
            "standardization": {"input_std": self.input_std, "output_std": self.output_std},
            "dataset_seed": self.dataset_seed,
            "loss_normalizer": self.loss_normalizer,
            "training": self.training,
            "fire": self.fire.model_dump() if self.fire is not None else None,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Checkpoint":
        if data.get("format") != CHECKPOINT_FORMAT:
            raise ContractViolation(f"not a checkpoint (format {data.get('format')!r})")
        if data.get("version") != CHECKPOINT_VERSION:
            raise ContractViolation(
                f"checkpoint version {data.get('version')} unsupported, expected {CHECKPOINT_VERSION}"
            )
        net_cfg = data["network"]
        config = NetworkConfig.build(
            n=net_cfg["n"],
            m=net_cfg.get("m", 0),
            widths=net_cfg["widths"],
            activations=net_cfg["activations"],
            residue_a=net_cfg["residue_a"],
            field=net_cfg.get("field", "real"),
        )
        network = unflatten_params(np.array(data["parameters"], dtype=np.float64), config)
        scales = data.get("standardization") or {}
        fire = data.get("fire")
        return cls(
            network=network,
            input_std=float(scales.get("input_std", 1.0)),
            output_std=float(scales.get("output_std", 1.0)),
            dataset_seed=data.get("dataset_seed"),
            loss_normalizer=data.get("loss_normalizer"),
            training=data.get("training") or {},
            fire=FireConfig.build(**fire) if fire else None,
        )


def save_checkpoint(checkpoint: Checkpoint, path: str | Path) -> Path:
    target = ensure_parent(resolve_path(path))
    try:
        with open(target, "w", encoding="utf-8") as f:
            json.dump(checkpoint.to_dict(), f, indent=2)
            f.write("\n")
    except OSError as exc:
        raise StorageError(f"cannot write checkpoint ({exc.strerror})", target) from exc
    logger.info("wrote checkpoint to %s", target)
    return target


def load_checkpoint(path: str | Path) -> Checkpoint:
    """Parameters come back bit-exact; a format or shape problem is a StorageError."""
    target = resolve_path(path)
    try:
        with open(target, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as exc:
        raise StorageError(f"cannot read checkpoint ({exc.strerror})", target) from exc
    except json.JSONDecodeError as exc:
        raise StorageError(f"malformed checkpoint ({exc.msg})", target) from exc

    try:
        return Checkpoint.from_dict(data)
    except KeyError as exc:
        raise StorageError(f"checkpoint lacks {exc.args[0]!r}", target) from exc
    except (ContractViolation, TypeError, AttributeError) as exc:
        raise StorageError(f"invalid checkpoint ({exc})", target) from exc
