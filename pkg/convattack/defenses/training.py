from __future__ import annotations

import logging
import time
from pathlib import Path

import numpy as np
from tqdm import tqdm

from convattack.abstractions.example import Dataset
from convattack.abstractions.victim import predict_labels
from convattack.defenses.config import TrainConfig, TrainReport
from convattack.embedding.table import EmbeddingTable
from convattack.utils.errors import DataError, TrainingDiverged
from convattack.victims.features import featurize_dataset
from convattack.victims.losses import batch_grad
from convattack.victims.mlp import PARAM_NAMES, MlpVictim

_logger = logging.getLogger(__name__)


def accuracy(model: MlpVictim, ds: Dataset) -> float:
    predictions = predict_labels(model, ((e.premise, e.hypothesis) for e in ds))
    return float(np.mean(predictions == np.array(ds.labels)))


def train(
    model: MlpVictim,
    table: EmbeddingTable,
    train_ds: Dataset,
    dev_ds: Dataset,
    config: TrainConfig,
    checkpoint_every: int | None = None,
    checkpoint_dir: str | Path | None = None,
    progress: bool = False,
) -> tuple[MlpVictim, TrainReport]:
    """Mini-batch SGD on the configured loss; the input model is not modified.

    Shuffling and EP noise draw from separate streams spawned from `config.seed`,
    so switching the loss never changes the batch order.
    """
    if len(train_ds) == 0 or len(dev_ds) == 0:
        raise DataError("training needs non-empty train and dev sets")
    if model.input_dim != 4 * table.dim:
        raise DataError(
            f"model expects {model.input_dim} features but the table gives {4 * table.dim}"
        )
    model = model.copy().bind(table)
    X, Y = featurize_dataset(table, train_ds)
    ids = train_ds.ids
    n = len(Y)
    shuffle_seq, noise_seq = np.random.SeedSequence(config.seed).spawn(2)
    shuffle_rng = np.random.default_rng(shuffle_seq)
    noise_rng = np.random.default_rng(noise_seq)
    mode = config.loss_mode
    noise_dim = mode.noise.dim(model)

    epoch_losses, dev_curve = [], []
    best_epoch, best_params = 0, None
    started = time.perf_counter()
    for epoch in tqdm(range(1, config.epochs + 1), desc="train", disable=not progress):
        order = shuffle_rng.permutation(n) if config.shuffle else np.arange(n)
        total = 0.0
        for b, start in enumerate(range(0, n, config.batch_size)):
            batch = order[start : start + config.batch_size]
            deltas = None
            if mode.is_ep:
                deltas = mode.noise.draw((len(batch), noise_dim), noise_rng)
            loss, grads = batch_grad(model, X[batch], Y[batch], mode, deltas)
            if not np.isfinite(loss):
                offending = ", ".join(ids[i] for i in batch)
                raise TrainingDiverged(
                    f"non-finite loss at epoch {epoch}, batch {b} (examples: {offending})"
                )
            for name in PARAM_NAMES:
                model.params[name] -= config.learning_rate * grads[name]
            total += loss * len(batch)
        epoch_losses.append(total / n)
        _logger.info("epoch %d/%d: train loss %.6f", epoch, config.epochs, epoch_losses[-1])
        if checkpoint_every and checkpoint_dir is not None and epoch % checkpoint_every == 0:
            model.save(Path(checkpoint_dir) / f"epoch-{epoch:03d}.ckpt")
        if config.patience is not None:
            dev_curve.append(accuracy(model, dev_ds))
            if best_params is None or dev_curve[-1] > dev_curve[best_epoch - 1]:
                best_epoch, best_params = epoch, model.copy().params
            elif epoch - best_epoch >= config.patience:
                _logger.info("dev accuracy flat since epoch %d, stopping", best_epoch)
                break

    if best_params is not None:
        model.params.update(best_params)

    wall_time = time.perf_counter() - started
    dev_accuracy = accuracy(model, dev_ds)
    _logger.info("trained in %.2fs, dev accuracy %.4f", wall_time, dev_accuracy)
    return model, TrainReport(epoch_losses, dev_accuracy, config, dev_curve, wall_time)
