"""
Permutation-symmetric atom-centred descriptors and GNN layers.

Every neighbour sum goes through ``math.fsum``: the result is the correctly
rounded sum of its terms, so reordering neighbours never changes a bit.
"""

import itertools
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from ..core.errors import ContractViolation
from ..core.layers import apply_activation


GRID_ETA = (0.5, 1.0, 2.0, 4.0)
GRID_R_S = (0.0, 1.0, 2.0, 3.0)
_GRID = tuple(itertools.product(GRID_ETA, GRID_R_S))


class DescriptorHyper(BaseModel):
    """
    Per-function pairs (eta, r_s) in 1/Angstrom^2 and Angstrom, plus the cutoff r_c.

    The default is the full eta x r_s grid, 16 functions.
    """

    model_config = ConfigDict(frozen=True)

    eta: tuple[float, ...] = tuple(e for e, _ in _GRID)
    r_s: tuple[float, ...] = tuple(r for _, r in _GRID)
    r_c: float = 6.0

    @model_validator(mode="after")
    def _check(self) -> "DescriptorHyper":
        if len(self.eta) != len(self.r_s) or not self.eta:
            raise ValueError(
                f"eta and r_s must be non-empty and of equal length, got {len(self.eta)} and {len(self.r_s)}"
            )
        if self.r_c <= 0:
            raise ValueError(f"r_c must be > 0, got {self.r_c}")
        if any(e <= 0 for e in self.eta):
            raise ValueError(f"every eta must be > 0, got {self.eta}")
        if any(not 0 <= r < self.r_c for r in self.r_s):
            raise ValueError(f"every r_s must lie in [0, r_c), got {self.r_s}")
        return self

    @classmethod
    def build(cls, **values) -> "DescriptorHyper":
        try:
            return cls(**values)
        except ValidationError as exc:
            raise ContractViolation(f"invalid descriptor hyperparameters: {exc}") from exc

    @classmethod
    def grid(cls, eta, r_s, r_c: float = 6.0) -> "DescriptorHyper":
        """Every (eta, r_s) combination, eta-major."""
        pairs = list(itertools.product(eta, r_s))
        return cls.build(eta=tuple(e for e, _ in pairs), r_s=tuple(r for _, r in pairs), r_c=r_c)

    @property
    def size(self) -> int:
        return len(self.eta)


def cutoff(r, r_c: float):
    """(1 - (r/r_c)^2)^3 inside the cutoff, 0 beyond; C2 at r_c."""
    r = np.asarray(r, dtype=np.float64)
    if np.any(r < 0):
        raise ContractViolation(f"distance must be >= 0, got min {float(np.min(r))}")
    q = 1.0 - (r / r_c) ** 2
    value = np.where(r < r_c, q * q * q, 0.0)
    return float(value) if value.ndim == 0 else value


def _geometry(positions: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    positions = np.asarray(positions, dtype=np.float64)
    if positions.ndim != 2 or positions.shape[1] != 3:
        raise ContractViolation(f"positions must be (N, 3), got {positions.shape}")
    diffs = positions[np.newaxis, :, :] - positions[:, np.newaxis, :]  # r_j - r_i
    dist = np.sqrt(np.sum(diffs * diffs, axis=-1))
    off_diagonal = ~np.eye(len(positions), dtype=bool)
    if np.any(dist[off_diagonal] <= 0):
        i, j = np.argwhere(off_diagonal & (dist <= 0))[0]
        raise ContractViolation(f"atoms {i} and {j} coincide")
    return diffs, dist


def gaussian_edge_features(positions: np.ndarray, hyper: DescriptorHyper) -> np.ndarray:
    """e_ij^b = exp(-eta_b (r_ij - r_s,b)^2) f_c(r_ij), zero on the diagonal; (N, N, M_0)."""
    _, dist = _geometry(positions)
    eta = np.asarray(hyper.eta)
    r_s = np.asarray(hyper.r_s)
    gauss = np.exp(-eta * (dist[..., np.newaxis] - r_s) ** 2)
    edges = gauss * cutoff(dist, hyper.r_c)[..., np.newaxis]
    edges[np.arange(len(dist)), np.arange(len(dist))] = 0.0
    return edges


def edge_directions(positions: np.ndarray) -> np.ndarray:
    """Unit vectors u_ij / |u_ij| with u_ij = r_j - r_i, zero on the diagonal; (N, N, 3)."""
    diffs, dist = _geometry(positions)
    safe = np.where(dist > 0, dist, 1.0)
    return diffs / safe[..., np.newaxis]


def _check_atom(i: int, positions: np.ndarray) -> None:
    if not 0 <= i < len(positions):
        raise ContractViolation(f"atom index {i} outside 0..{len(positions) - 1}")


def scalar_symmetry(i: int, positions: np.ndarray, hyper: DescriptorHyper) -> np.ndarray:
    """D_i^(a) = sum over j != i of exp(-eta_a (r_ij - r_s,a)^2) f_c(r_ij); shape (M_0,)."""
    positions = np.asarray(positions, dtype=np.float64)
    _check_atom(i, positions)
    edges = gaussian_edge_features(positions, hyper)
    neighbours = [j for j in range(len(positions)) if j != i]
    return np.array(
        [math.fsum(edges[i, j, a] for j in neighbours) for a in range(hyper.size)]
    )


def vector_symmetry(i: int, positions: np.ndarray, hyper: DescriptorHyper) -> np.ndarray:
    """Direction-weighted symmetry functions as M_0 column vectors; shape (3, M_0)."""
    positions = np.asarray(positions, dtype=np.float64)
    _check_atom(i, positions)
    edges = gaussian_edge_features(positions, hyper)
    units = edge_directions(positions)
    neighbours = [j for j in range(len(positions)) if j != i]
    out = np.empty((3, hyper.size))
    for a in range(hyper.size):
        for c in range(3):
            out[c, a] = math.fsum(units[i, j, c] * edges[i, j, a] for j in neighbours)
    return out


def _check_gnn_shapes(edges: np.ndarray, nodes: np.ndarray, weights: np.ndarray) -> None:
    if edges.ndim != 3 or edges.shape[0] != edges.shape[1]:
        raise ContractViolation(f"edge features must be (N, N, B), got {edges.shape}")
    if nodes.ndim != 2 or nodes.shape[0] != edges.shape[0]:
        raise ContractViolation(
            f"node features must be ({edges.shape[0]}, D), got {nodes.shape}"
        )
    if weights.ndim != 3 or weights.shape[:2] != (edges.shape[2], nodes.shape[1]):
        raise ContractViolation(
            f"weights must be ({edges.shape[2]}, {nodes.shape[1]}, A), got {weights.shape}"
        )


def _edge_coefficients(e_ij: np.ndarray, v_j: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """sum over b, d of e_ij^b v_jd w_bda for every output feature a."""
    terms = e_ij[:, np.newaxis, np.newaxis] * v_j[np.newaxis, :, np.newaxis] * weights
    flat = terms.reshape(-1, weights.shape[2])
    return np.array([math.fsum(flat[:, a]) for a in range(weights.shape[2])])


def gnn_scalar_layer(
    edges: np.ndarray,
    nodes: np.ndarray,
    weights: np.ndarray,
    activation: str = "identity",
    residue_a: float = 0.0,
) -> np.ndarray:
    """
    v'_ia = sigma(sum over j, b, d of e_ij^b v_jd w_bda); shape (N, A).

    Rotation-invariant when the edge features are; the activation acts on
    each scalar as a one-dimensional vector.
    """
    edges, nodes, weights = (np.asarray(a, dtype=np.float64) for a in (edges, nodes, weights))
    _check_gnn_shapes(edges, nodes, weights)
    count, out_features = edges.shape[0], weights.shape[2]
    out = np.empty((count, out_features))
    for i in range(count):
        terms = (
            edges[i, :, :, np.newaxis, np.newaxis]
            * nodes[:, np.newaxis, :, np.newaxis]
            * weights[np.newaxis, :, :, :]
        ).reshape(-1, out_features)
        out[i] = [math.fsum(terms[:, a]) for a in range(out_features)]
    return apply_activation(out[:, np.newaxis, :], activation, residue_a)[:, 0, :]


def gnn_vector_layer(
    positions: np.ndarray,
    edges: np.ndarray,
    nodes: np.ndarray,
    weights: np.ndarray,
    activation: str = "identity",
    residue_a: float = 0.0,
) -> np.ndarray:
    """
    v'_ia = sigma(sum over j, b, d of (u_ij/|u_ij|) e_ij^b v_jd w_bda); shape (N, 3, A).

    Equivariant when the edge features are invariant and sigma is an
    equivariant vector activation.
    """
    positions = np.asarray(positions, dtype=np.float64)
    edges, nodes, weights = (np.asarray(a, dtype=np.float64) for a in (edges, nodes, weights))
    _check_gnn_shapes(edges, nodes, weights)
    if edges.shape[0] != len(positions):
        raise ContractViolation(
            f"edge features cover {edges.shape[0]} atoms, positions hold {len(positions)}"
        )
    units = edge_directions(positions)
    count, out_features = len(positions), weights.shape[2]
    out = np.empty((count, 3, out_features))
    for i in range(count):
        neighbours = [j for j in range(count) if j != i]
        coefs = {j: _edge_coefficients(edges[i, j], nodes[j], weights) for j in neighbours}
        for a in range(out_features):
            for c in range(3):
                out[i, c, a] = math.fsum(units[i, j, c] * coefs[j][a] for j in neighbours)
    return apply_activation(out, activation, residue_a)


def one_hot_species(species) -> np.ndarray:
    """Node features v_jd = 1 when atom j has the d-th species (sorted labels)."""
    labels = sorted(set(species))
    index = {label: d for d, label in enumerate(labels)}
    nodes = np.zeros((len(species), len(labels)))
    for j, label in enumerate(species):
        nodes[j, index[label]] = 1.0
    return nodes


def kronecker_weights(size: int) -> np.ndarray:
    """w_b1a = delta_ba for a single node feature; shape (size, 1, size)."""
    return np.eye(size)[:, np.newaxis, :]
