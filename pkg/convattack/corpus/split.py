from __future__ import annotations

import math

import numpy as np

from convattack.abstractions.example import Dataset, Split
from convattack.utils.errors import ConfigError


def split_sizes(n: int, fractions: tuple[float, float, float]) -> tuple[int, int, int]:
    if len(fractions) != 3 or any(not f > 0 for f in fractions):
        raise ConfigError(f"split fractions must be three positive ratios, got {fractions}")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ConfigError(f"split fractions must sum to 1, got {sum(fractions)!r}")
    n_dev = math.floor(fractions[1] * n + 0.5)
    n_test = math.floor(fractions[2] * n + 0.5)
    # remainder goes to train
    n_train = n - n_dev - n_test
    if n_train < 0:
        raise ConfigError(f"fractions {fractions} leave no room for train with N={n}")
    return n_train, n_dev, n_test


def split_dataset(
    ds: Dataset, fractions: tuple[float, float, float], seed: int
) -> tuple[Dataset, Dataset, Dataset]:
    """Random partition into (train, dev, test); file order is kept inside each part."""
    n_train, n_dev, _ = split_sizes(len(ds), tuple(fractions))
    order = np.random.default_rng(seed).permutation(len(ds))
    parts = (
        np.sort(order[:n_train]),
        np.sort(order[n_train : n_train + n_dev]),
        np.sort(order[n_train + n_dev :]),
    )
    return tuple(
        Dataset(name=ds.name, examples=[ds.examples[i] for i in part], split=split)
        for part, split in zip(parts, (Split.train, Split.dev, Split.test))
    )
