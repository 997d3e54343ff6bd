"""Pair-wise Lennard-Jones energy and analytic forces."""

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from ..core.errors import ContractViolation
from .units import ARGON_EPSILON_KELVIN, ARGON_R0, K_B


class LJParams(BaseModel):
    """Well depth epsilon (eV) and zero-crossing distance r0 (Angstrom)."""

    model_config = ConfigDict(frozen=True)

    epsilon: float
    r0: float

    @field_validator("epsilon", "r0")
    @classmethod
    def _positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f"must be > 0, got {value}")
        return value

    @classmethod
    def build(cls, epsilon: float, r0: float) -> "LJParams":
        try:
            return cls(epsilon=epsilon, r0=r0)
        except ValidationError as exc:
            raise ContractViolation(f"invalid Lennard-Jones parameters: {exc}") from exc

    @classmethod
    def argon(
        cls, epsilon_kelvin: float = ARGON_EPSILON_KELVIN, r0: float = ARGON_R0
    ) -> "LJParams":
        return cls.build(epsilon=epsilon_kelvin * K_B, r0=r0)

    @property
    def r_min_energy(self) -> float:
        """Separation of the energy minimum, 2^(1/6) r0."""
        return 2.0 ** (1.0 / 6.0) * self.r0


def lj_pair_energy(r, p: LJParams):
    """4 eps ((r0/r)^12 - (r0/r)^6) for scalar or array separations."""
    r = np.asarray(r, dtype=np.float64)
    if np.any(r <= 0):
        raise ContractViolation(f"pair separation must be > 0, got min {float(np.min(r))}")
    s6 = (p.r0 / r) ** 6
    energy = 4.0 * p.epsilon * (s6 * s6 - s6)
    return float(energy) if energy.ndim == 0 else energy


def _pair_geometry(positions: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    positions = np.asarray(positions, dtype=np.float64)
    if positions.ndim != 2 or positions.shape[1] != 3 or positions.shape[0] < 2:
        raise ContractViolation(f"positions must be (N >= 2, 3), got {positions.shape}")
    i, j = np.triu_indices(positions.shape[0], k=1)
    diffs = positions[j] - positions[i]
    dist = np.sqrt(np.sum(diffs * diffs, axis=1))
    if np.any(dist <= 0):
        k = int(np.argmin(dist))
        raise ContractViolation(f"atoms {i[k]} and {j[k]} coincide")
    return np.stack([i, j]), diffs, dist


def lj_total_energy(positions: np.ndarray, p: LJParams) -> float:
    """Sum of pair energies over i > j, eV."""
    _, _, dist = _pair_geometry(positions)
    return float(np.sum(lj_pair_energy(dist, p)))


def lj_forces(positions: np.ndarray, p: LJParams) -> np.ndarray:
    """F_i = -dU/dr_i, shape (N, 3), eV/Angstrom."""
    pairs, diffs, dist = _pair_geometry(positions)
    s6 = (p.r0 / dist) ** 6
    # magnitude of the repulsive pair force, (24 eps / r)(2 s^12 - s^6)
    magnitude = 24.0 * p.epsilon / dist * (2.0 * s6 * s6 - s6)
    along = (magnitude / dist)[:, np.newaxis] * diffs

    forces = np.zeros((np.asarray(positions).shape[0], 3))
    np.add.at(forces, pairs[0], -along)
    np.add.at(forces, pairs[1], along)
    return forces
