"""Splitting of the single global ``--seed`` into independent streams."""

from dataclasses import dataclass

import numpy as np

# Child index of each stream in SeedSequence(seed).spawn(); order is fixed.
_STREAMS = ("data", "init", "velocities", "checks")


def split_seed(seed: int) -> dict[str, np.random.SeedSequence]:
    """Spawn one child SeedSequence per stream name, in the documented order."""
    children = np.random.SeedSequence(int(seed)).spawn(len(_STREAMS))
    return dict(zip(_STREAMS, children))


@dataclass(frozen=True)
class SeedStreams:
    """Independent generators derived from one global seed."""

    seed: int

    def rng(self, stream: str) -> np.random.Generator:
        if stream not in _STREAMS:
            raise KeyError(f"unknown seed stream {stream!r}; expected one of {_STREAMS}")
        return np.random.default_rng(split_seed(self.seed)[stream])

