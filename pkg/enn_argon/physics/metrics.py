"""Root-mean-square deviations between reference and predicted quantities."""

import numpy as np

from ..core.errors import ContractViolation


def force_rmsd(reference: np.ndarray, predicted: np.ndarray) -> float:
    """RMSD over every force component, eV/Angstrom."""
    reference = np.asarray(reference, dtype=np.float64)
    predicted = np.asarray(predicted, dtype=np.float64)
    if reference.shape != predicted.shape:
        raise ContractViolation(f"force shapes differ: {reference.shape} vs {predicted.shape}")
    if reference.size == 0:
        return 0.0
    return float(np.sqrt(np.mean((reference - predicted) ** 2)))


def position_rmsd(reference: np.ndarray, predicted: np.ndarray) -> np.ndarray:
    """
    Per-step sqrt(sum |r^a - r^p|^2 / (N_s N_at)).

    Inputs have shape (N_s, steps + 1, N_at, 3); the result has steps + 1 entries.
    """
    reference = np.asarray(reference, dtype=np.float64)
    predicted = np.asarray(predicted, dtype=np.float64)
    if reference.shape != predicted.shape or reference.ndim != 4:
        raise ContractViolation(
            f"trajectories must share shape (samples, frames, atoms, 3), got "
            f"{reference.shape} vs {predicted.shape}"
        )
    samples, _, atoms, _ = reference.shape
    squared = np.sum((reference - predicted) ** 2, axis=(0, 2, 3))
    return np.sqrt(squared / (samples * atoms))


def energy_rmsd(reference: np.ndarray, predicted: np.ndarray) -> np.ndarray:
    """Per-step sqrt(sum (E^a - E^p)^2 / N_s) for energies of shape (N_s, steps + 1)."""
    reference = np.asarray(reference, dtype=np.float64)
    predicted = np.asarray(predicted, dtype=np.float64)
    if reference.shape != predicted.shape or reference.ndim != 2:
        raise ContractViolation(
            f"energy traces must share shape (samples, frames), got {reference.shape} vs {predicted.shape}"
        )
    return np.sqrt(np.mean((reference - predicted) ** 2, axis=0))


def windowed_means(values: np.ndarray, window: int) -> np.ndarray:
    """Means over consecutive non-overlapping windows; a short tail is dropped."""
    values = np.asarray(values, dtype=np.float64)
    full = len(values) // window
    return values[: full * window].reshape(full, window).mean(axis=1)
