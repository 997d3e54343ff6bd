"""Lennard-Jones four-atom force dataset and its standardization."""

import logging
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from ..core.errors import ContractViolation
from .lj import LJParams, lj_forces

logger = logging.getLogger(__name__)

ATOMS = 4
PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
SPLITS = ("train", "val", "test")


class DatasetProtocol(BaseModel):
    """How random configurations are drawn and split."""

    model_config = ConfigDict(frozen=True)

    sigma: float = 3.0
    r_min: float = 2.8
    split: tuple[float, float, float] = (0.6, 0.2, 0.2)

    @model_validator(mode="after")
    def _check(self) -> "DatasetProtocol":
        if self.sigma <= 0 or self.r_min < 0:
            raise ValueError(f"need sigma > 0 and r_min >= 0, got {self.sigma}, {self.r_min}")
        if any(f < 0 for f in self.split) or abs(sum(self.split) - 1.0) > 1e-9:
            raise ValueError(f"split fractions must be non-negative and sum to 1, got {self.split}")
        return self

    @classmethod
    def build(cls, **values) -> "DatasetProtocol":
        try:
            return cls(**values)
        except ValidationError as exc:
            raise ContractViolation(f"invalid dataset protocol: {exc}") from exc


def relative_positions(positions: np.ndarray) -> np.ndarray:
    """
    Pair vectors r_ij = r_j - r_i as columns (r12, r13, r14, r23, r24, r34).

    Accepts (4, 3) or (..., 4, 3) and returns (3, 6) or (..., 3, 6).
    """
    positions = np.asarray(positions, dtype=np.float64)
    if positions.ndim < 2 or positions.shape[-2:] != (ATOMS, 3):
        raise ContractViolation(
            f"relative positions need {ATOMS} atoms in 3-D, got shape {positions.shape}"
        )
    return np.stack([positions[..., j, :] - positions[..., i, :] for i, j in PAIRS], axis=-1)


def min_pair_distance(positions: np.ndarray) -> float:
    positions = np.asarray(positions, dtype=np.float64)
    i, j = np.triu_indices(positions.shape[-2], k=1)
    return float(np.min(np.linalg.norm(positions[..., j, :] - positions[..., i, :], axis=-1)))


@dataclass
class Dataset:
    """Positions (K, 4, 3) Angstrom, forces (K, 4, 3) eV/Angstrom and split tags."""

    positions: np.ndarray
    forces: np.ndarray
    splits: np.ndarray
    input_std: float
    output_std: float
    seed: int | None = None
    protocol: DatasetProtocol = field(default_factory=DatasetProtocol)
    lj: LJParams | None = None
    rejected: int = 0

    def __post_init__(self) -> None:
        if self.positions.shape != self.forces.shape or self.positions.shape[1:] != (ATOMS, 3):
            raise ContractViolation(
                f"positions {self.positions.shape} and forces {self.forces.shape} "
                f"must both be (K, {ATOMS}, 3)"
            )
        if len(self.splits) != len(self.positions):
            raise ContractViolation(
                f"{len(self.splits)} split tags for {len(self.positions)} records"
            )
        unknown = set(np.unique(self.splits).tolist()) - set(SPLITS)
        if unknown:
            raise ContractViolation(f"unknown split tags {sorted(unknown)}; expected {SPLITS}")
        if not (self.input_std > 0 and self.output_std > 0):
            raise ContractViolation(
                f"standardization scalars must be > 0, got {self.input_std}, {self.output_std}"
            )

    def __len__(self) -> int:
        return len(self.positions)

    def counts(self) -> dict[str, int]:
        return {name: int(np.sum(self.splits == name)) for name in SPLITS}

    def indices(self, split: str) -> np.ndarray:
        if split not in SPLITS:
            raise ContractViolation(f"unknown split {split!r}; expected one of {SPLITS}")
        return np.flatnonzero(self.splits == split)

    def inputs(self, split: str) -> np.ndarray:
        """Standardized relative positions, shape (B, 3, 6)."""
        return relative_positions(self.positions[self.indices(split)]) / self.input_std

    def targets(self, split: str) -> np.ndarray:
        """Standardized forces with one column per atom, shape (B, 3, 4)."""
        return np.swapaxes(self.forces[self.indices(split)], -1, -2) / self.output_std


def standardization_scalars(positions: np.ndarray, forces: np.ndarray) -> tuple[float, float]:
    """
    One standard deviation over all input components and one over all outputs.

    A single scalar per side keeps the rescaled map rotation-equivariant.
    """
    if len(positions) == 0:
        return 1.0, 1.0
    input_std = float(np.std(relative_positions(positions)))
    output_std = float(np.std(forces))
    return (input_std if input_std > 0 else 1.0), (output_std if output_std > 0 else 1.0)


def assign_splits(count: int, rng: np.random.Generator, fractions=(0.6, 0.2, 0.2)) -> np.ndarray:
    """Tag records train/val/test by a seeded shuffle followed by contiguous slicing."""
    n_train = int(round(fractions[0] * count))
    n_val = min(int(round(fractions[1] * count)), count - n_train)
    order = rng.permutation(count)
    splits = np.empty(count, dtype=object)
    splits[order[:n_train]] = "train"
    splits[order[n_train : n_train + n_val]] = "val"
    splits[order[n_train + n_val :]] = "test"
    return splits.astype(str)


def generate_dataset(
    count: int,
    seed: int | np.random.SeedSequence,
    sigma: float = 3.0,
    r_min: float = 2.8,
    p: LJParams | None = None,
    split: tuple[float, float, float] = (0.6, 0.2, 0.2),
) -> Dataset:
    """
    Draw ``count`` four-atom configurations with i.i.d. Gaussian coordinates.

    A whole configuration is redrawn while any pair is closer than r_min.
    Forces are analytic; standardization scalars come from the training split.
    """
    if count < 1:
        raise ContractViolation(f"dataset count must be >= 1, got {count}")
    protocol = DatasetProtocol.build(sigma=sigma, r_min=r_min, split=split)
    p = p or LJParams.argon()
    rng = np.random.default_rng(seed)

    positions = np.empty((count, ATOMS, 3))
    rejected = 0
    for k in range(count):
        while True:
            candidate = rng.normal(0.0, protocol.sigma, size=(ATOMS, 3))
            if min_pair_distance(candidate) >= protocol.r_min:
                break
            rejected += 1
        positions[k] = candidate

    forces = np.stack([lj_forces(pos, p) for pos in positions])
    splits = assign_splits(count, rng, protocol.split)
    train = splits == "train"
    input_std, output_std = standardization_scalars(positions[train], forces[train])

    if rejected > count:
        logger.warning("rejected %d draws for %d records (r_min=%g)", rejected, count, protocol.r_min)
    logger.info(
        "generated %d records (%s), input_std %.6g, output_std %.6g",
        count,
        ", ".join(f"{name}={int(np.sum(splits == name))}" for name in SPLITS),
        input_std,
        output_std,
    )
    return Dataset(
        positions=positions,
        forces=forces,
        splits=splits,
        input_std=input_std,
        output_std=output_std,
        seed=int(seed) if isinstance(seed, (int, np.integer)) else None,
        protocol=protocol,
        lj=p,
        rejected=rejected,
    )
