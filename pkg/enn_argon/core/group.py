"""Random group elements and their action on vector batches."""

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import ContractViolation


def random_unitary(n: int, rng: np.random.Generator, field: str = "complex") -> np.ndarray:
    """
    Haar-distributed unitary (complex) or orthogonal (real) n x n matrix.

    QR-orthonormalises a Gaussian matrix and fixes the phases of R's diagonal
    so the result is not biased toward any column phase.
    """
    if field == "complex":
        z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    elif field == "real":
        z = rng.standard_normal((n, n))
    else:
        raise ContractViolation(f"field must be 'real' or 'complex', got {field!r}")
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    phases = d / np.where(np.abs(d) == 0, 1.0, np.abs(d))
    return q * phases[np.newaxis, :]


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniformly random proper 3-D rotation matrix."""
    return Rotation.random(None, rng).as_matrix()


def block_operator(U: np.ndarray, m: int) -> np.ndarray:
    """diag(U, I_m): acts as U on the vector part and leaves features fixed."""
    n = U.shape[0]
    out = np.eye(n + m, dtype=np.result_type(U, np.float64))
    out[:n, :n] = U
    return out


def act(U: np.ndarray, x: np.ndarray, n: int | None = None) -> np.ndarray:
    """Apply U to the first n coordinates of every column of a vector batch."""
    n = U.shape[0] if n is None else n
    if U.shape != (n, n):
        raise ContractViolation(f"operator must be {n}x{n}, got {U.shape}")
    head = U @ x[..., :n, :]
    if n == x.shape[-2]:
        return head
    return np.concatenate([head, x[..., n:, :].astype(head.dtype, copy=False)], axis=-2)
