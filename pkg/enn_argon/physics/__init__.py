"""Lennard-Jones Argon model, dataset generation and molecular dynamics."""

from .dataset import (
    PAIRS,
    SPLITS,
    Dataset,
    DatasetProtocol,
    assign_splits,
    generate_dataset,
    min_pair_distance,
    relative_positions,
    standardization_scalars,
)
from .lj import LJParams, lj_forces, lj_pair_energy, lj_total_energy
from .md import (
    REFERENCE_INITIAL_POSITIONS,
    AnalyticForces,
    AtomSystem,
    ForceProvider,
    MDProtocol,
    NetworkForces,
    Trajectory,
    hamiltonian,
    init_velocities,
    kinetic_energy,
    simulate,
    velocity_verlet_step,
)
from .metrics import energy_rmsd, force_rmsd, position_rmsd, windowed_means
from .units import ACCEL, ARGON_MASS, K_B

__all__ = [
    "PAIRS",
    "SPLITS",
    "Dataset",
    "DatasetProtocol",
    "assign_splits",
    "generate_dataset",
    "min_pair_distance",
    "relative_positions",
    "standardization_scalars",
    "LJParams",
    "lj_forces",
    "lj_pair_energy",
    "lj_total_energy",
    "REFERENCE_INITIAL_POSITIONS",
    "AnalyticForces",
    "AtomSystem",
    "ForceProvider",
    "MDProtocol",
    "NetworkForces",
    "Trajectory",
    "hamiltonian",
    "init_velocities",
    "kinetic_energy",
    "simulate",
    "velocity_verlet_step",
    "energy_rmsd",
    "force_rmsd",
    "position_rmsd",
    "windowed_means",
    "ACCEL",
    "ARGON_MASS",
    "K_B",
]
