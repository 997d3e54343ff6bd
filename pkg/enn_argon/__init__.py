"""enn-argon - Unitary-equivariant feedforward networks for learned interatomic forces."""

__version__ = "1.0.0"
