"""Curated default run configuration."""
