"""Splittable random seeds.

One 64-bit config seed feeds every random draw of a command. Each
sub-task gets its own child SeedSequence keyed by its name, so adding or
reordering sub-tasks never shifts the numbers another sub-task sees.
"""

from typing import Dict, Sequence

import numpy as np


def child_seed(seed: int, name: str) -> np.random.SeedSequence:
    """Child of the config seed reserved for one named sub-task."""
    return np.random.SeedSequence(seed, spawn_key=tuple(name.encode()))


def spawn_seeds(seed: int, names: Sequence[str]) -> Dict[str, np.random.SeedSequence]:
    """Independent child seeds keyed by sub-task name."""
    return {name: child_seed(seed, name) for name in names}
