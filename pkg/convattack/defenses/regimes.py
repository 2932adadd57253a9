"""The defenses compared in the benchmark, each a recipe over `train`."""
from __future__ import annotations

import logging

from convattack.abstractions.example import Dataset
from convattack.defenses.config import TrainConfig
from convattack.defenses.training import train
from convattack.embedding.centroid import synonym_centroid_table
from convattack.embedding.table import EmbeddingTable
from convattack.utils import consts
from convattack.utils.errors import DataError
from convattack.victims.losses import LossMode, NoiseSpec
from convattack.victims.mlp import MlpVictim

_logger = logging.getLogger(__name__)


def train_standard(
    table: EmbeddingTable,
    train_ds: Dataset,
    dev_ds: Dataset,
    config: TrainConfig,
    hidden_dim: int = consts.DEFAULT_HIDDEN_DIM,
) -> MlpVictim:
    """Fresh initialization seeded from the config, cross-entropy loss."""
    model = MlpVictim.initialize(table, hidden_dim, seed=config.seed)
    return train(model, table, train_ds, dev_ds, config.evolve(loss_mode=LossMode.ce()))[0]


def finetune_on_attacked(
    baseline: MlpVictim,
    attacked_train: Dataset,
    dev_ds: Dataset,
    config: TrainConfig,
    epochs: int | None = None,
    table: EmbeddingTable | None = None,
) -> MlpVictim:
    """Continues training the baseline's parameters on attacked data."""
    table = table or baseline.table
    if table is None:
        raise DataError("fine-tuning needs the baseline's embedding table")
    epochs = consts.DEFAULT_FINETUNE_EPOCHS if epochs is None else epochs
    if epochs == 0:
        return baseline.copy()
    _logger.info("fine-tuning for %d epochs on %s", epochs, attacked_train.name)
    return train(baseline, table, attacked_train, dev_ds, config.evolve(epochs=epochs))[0]


def train_augmented_only(
    table: EmbeddingTable,
    attacked_train: Dataset,
    dev_ds: Dataset,
    config: TrainConfig,
    hidden_dim: int = consts.DEFAULT_HIDDEN_DIM,
) -> MlpVictim:
    return train_standard(table, attacked_train, dev_ds, config, hidden_dim)


def train_with_ep_loss(
    table: EmbeddingTable,
    train_ds: Dataset,
    dev_ds: Dataset,
    config: TrainConfig,
    alpha: float = consts.DEFAULT_ALPHA,
    noise: NoiseSpec | None = None,
    hidden_dim: int = consts.DEFAULT_HIDDEN_DIM,
) -> MlpVictim:
    model = MlpVictim.initialize(table, hidden_dim, seed=config.seed)
    mode = LossMode.ep(alpha, noise)
    return train(model, table, train_ds, dev_ds, config.evolve(loss_mode=mode))[0]


def train_centroid(
    table: EmbeddingTable,
    train_ds: Dataset,
    dev_ds: Dataset,
    config: TrainConfig,
    min_cos_sim: float = 0.5,
    max_candidates: int = 10,
    hidden_dim: int = consts.DEFAULT_HIDDEN_DIM,
) -> MlpVictim:
    """Standard training on a table whose vectors are synonym-family centroids.

    The returned model is bound to the centroid table, so it featurizes swapped
    synonyms almost as it does the originals.
    """
    centroids = synonym_centroid_table(table, min_cos_sim, max_candidates)
    return train_standard(centroids, train_ds, dev_ds, config, hidden_dim)
