"""Permutation-symmetric symmetry functions and vector-form GNN layers."""

from .symmetry import (
    DescriptorHyper,
    cutoff,
    edge_directions,
    gaussian_edge_features,
    gnn_scalar_layer,
    gnn_vector_layer,
    kronecker_weights,
    one_hot_species,
    scalar_symmetry,
    vector_symmetry,
)

__all__ = [
    "DescriptorHyper",
    "cutoff",
    "edge_directions",
    "gaussian_edge_features",
    "gnn_scalar_layer",
    "gnn_vector_layer",
    "kronecker_weights",
    "one_hot_species",
    "scalar_symmetry",
    "vector_symmetry",
]
