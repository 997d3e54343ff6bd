"""Velocity-Verlet molecular dynamics driven by analytic or learned forces."""

import logging
from dataclasses import dataclass
from typing import Callable, Protocol

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from ..core.errors import ContractViolation, NonFiniteError
from ..core.layers import network_forward
from ..core.models import Network
from .dataset import relative_positions
from .lj import LJParams, lj_forces, lj_total_energy
from .units import ACCEL, ARGON_MASS, K_B

logger = logging.getLogger(__name__)

REFERENCE_INITIAL_POSITIONS = (
    (3.0, 0.0, 0.1),
    (-3.0, -0.1, 0.0),
    (0.1, 2.5, 0.0),
    (0.0, -2.5, -0.1),
)


class ForceProvider(Protocol):
    """Maps positions (N, 3) Angstrom to forces (N, 3) eV/Angstrom."""

    def __call__(self, positions: np.ndarray) -> np.ndarray: ...


class MDProtocol(BaseModel):
    """Initial state and integration settings of a simulation run."""

    model_config = ConfigDict(frozen=True)

    initial_positions: tuple[tuple[float, float, float], ...] = REFERENCE_INITIAL_POSITIONS
    mass: float = ARGON_MASS
    temperature: float = 10.0
    dt: float = 1.0
    steps: int = 4000
    samples: int = 10

    @field_validator("mass", "dt")
    @classmethod
    def _positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f"must be > 0, got {value}")
        return value

    @field_validator("temperature")
    @classmethod
    def _non_negative_temperature(cls, value: float) -> float:
        if value < 0:
            raise ValueError(f"temperature must be >= 0, got {value}")
        return value

    @field_validator("steps", "samples")
    @classmethod
    def _non_negative_count(cls, value: int) -> int:
        if value < 0:
            raise ValueError(f"must be >= 0, got {value}")
        return value

    @classmethod
    def build(cls, **values) -> "MDProtocol":
        try:
            return cls(**values)
        except ValidationError as exc:
            raise ContractViolation(f"invalid MD protocol: {exc}") from exc


@dataclass(frozen=True)
class AtomSystem:
    """Positions (N, 3) Angstrom, momenta (N, 3) u Angstrom/fs, masses (N,) u."""

    positions: np.ndarray
    momenta: np.ndarray
    masses: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.masses)
        if self.positions.shape != (n, 3) or self.momenta.shape != (n, 3):
            raise ContractViolation(
                f"positions {self.positions.shape} and momenta {self.momenta.shape} "
                f"must be ({n}, 3) for {n} masses"
            )
        if not (
            np.all(np.isfinite(self.positions))
            and np.all(np.isfinite(self.momenta))
            and np.all(np.isfinite(self.masses))
        ):
            raise ContractViolation("atom system holds non-finite entries")

    @classmethod
    def at_rest(cls, positions, masses) -> "AtomSystem":
        positions = np.array(positions, dtype=np.float64)
        return cls(positions, np.zeros_like(positions), np.array(masses, dtype=np.float64))


@dataclass(frozen=True)
class Trajectory:
    """steps + 1 frames, the initial state included."""

    positions: np.ndarray
    momenta: np.ndarray
    energy: np.ndarray

    def __len__(self) -> int:
        return len(self.positions)


class AnalyticForces:
    """Exact Lennard-Jones forces."""

    def __init__(self, p: LJParams | None = None) -> None:
        self.p = p or LJParams.argon()

    def __call__(self, positions: np.ndarray) -> np.ndarray:
        return lj_forces(positions, self.p)


class NetworkForces:
    """
    Forces predicted by a trained network on a four-atom system.

    Relative positions are divided by ``input_std`` before the forward pass
    and the (3, 4) output is multiplied by ``output_std`` and transposed.
    """

    def __init__(self, net: Network, input_std: float, output_std: float) -> None:
        cfg = net.config
        if cfg.dim != 3 or cfg.widths[0] != 6 or cfg.widths[-1] != 4:
            raise ContractViolation(
                f"force model must map 3x6 relative positions to 3x4 forces, "
                f"got dim {cfg.dim}, widths {list(cfg.widths)}"
            )
        self.net = net
        self.input_std = input_std
        self.output_std = output_std

    def predict(self, positions: np.ndarray) -> np.ndarray:
        """Batched prediction for positions of shape (..., 4, 3)."""
        x0 = relative_positions(positions) / self.input_std
        out, _ = network_forward(x0, self.net)
        return np.real(np.swapaxes(out, -1, -2)) * self.output_std

    def __call__(self, positions: np.ndarray) -> np.ndarray:
        return self.predict(positions)


def kinetic_energy(momenta: np.ndarray, masses: np.ndarray) -> float:
    """Sum of p^2 / 2m converted to eV."""
    return float(np.sum(np.sum(momenta**2, axis=1) / (2.0 * masses)) / ACCEL)


def init_velocities(
    temperature: float,
    masses: np.ndarray,
    seed: int | np.random.SeedSequence | np.random.Generator,
) -> np.ndarray:
    """
    Gaussian momenta rescaled so the kinetic energy is exactly 3/2 N k_B T.

    Centre-of-mass momentum is left in place.
    """
    if temperature < 0:
        raise ContractViolation(f"temperature must be >= 0, got {temperature}")
    masses = np.asarray(masses, dtype=np.float64)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    momenta = rng.standard_normal((len(masses), 3)) * np.sqrt(masses)[:, np.newaxis]
    if temperature == 0:
        return np.zeros_like(momenta)

    target = 1.5 * len(masses) * K_B * temperature
    current = kinetic_energy(momenta, masses)
    return momenta * np.sqrt(target / current)


def velocity_verlet_step(
    state: AtomSystem,
    force_fn: ForceProvider | Callable[[np.ndarray], np.ndarray],
    dt: float,
    forces: np.ndarray | None = None,
    step: int = 0,
) -> tuple[AtomSystem, np.ndarray]:
    """
    Advance one step of length dt (fs); returns the new state and its forces.

    ``forces`` are the forces at the current positions; pass the value
    returned by the previous step so force_fn runs once per step.
    """
    if dt <= 0:
        raise ContractViolation(f"time step must be > 0, got {dt}")
    if forces is None:
        forces = np.asarray(force_fn(state.positions), dtype=np.float64)

    inv_m = (1.0 / state.masses)[:, np.newaxis]
    positions = (
        state.positions
        + state.momenta * inv_m * dt
        + 0.5 * forces * inv_m * ACCEL * dt * dt
    )
    new_forces = np.asarray(force_fn(positions), dtype=np.float64)
    if not np.all(np.isfinite(new_forces)):
        raise NonFiniteError(f"non-finite forces at MD step {step}", iteration=step)
    momenta = state.momenta + 0.5 * (forces + new_forces) * ACCEL * dt
    return AtomSystem(positions, momenta, state.masses), new_forces


def hamiltonian(state: AtomSystem, p: LJParams) -> float:
    """Kinetic plus Lennard-Jones potential energy, eV."""
    return kinetic_energy(state.momenta, state.masses) + lj_total_energy(state.positions, p)


def simulate(
    initial: AtomSystem,
    force_provider: ForceProvider | Callable[[np.ndarray], np.ndarray],
    steps: int,
    dt: float,
    p: LJParams | None = None,
) -> Trajectory:
    """
    Integrate ``steps`` velocity-Verlet steps.

    The energy of every frame is the analytic Hamiltonian, whichever
    provider drives the motion.
    """
    if steps < 0:
        raise ContractViolation(f"steps must be >= 0, got {steps}")
    p = p or LJParams.argon()
    n = len(initial.masses)
    positions = np.empty((steps + 1, n, 3))
    momenta = np.empty((steps + 1, n, 3))
    energy = np.empty(steps + 1)

    state = initial
    positions[0], momenta[0], energy[0] = state.positions, state.momenta, hamiltonian(state, p)
    forces = np.asarray(force_provider(state.positions), dtype=np.float64)
    for step in range(1, steps + 1):
        state, forces = velocity_verlet_step(state, force_provider, dt, forces, step=step)
        positions[step], momenta[step] = state.positions, state.momenta
        energy[step] = hamiltonian(state, p)

    return Trajectory(positions=positions, momenta=momenta, energy=energy)
