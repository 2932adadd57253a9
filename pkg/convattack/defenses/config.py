from __future__ import annotations

import attr

from convattack.utils import consts
from convattack.utils.errors import ConfigError, config_errors, is_whole, whole
from convattack.victims.losses import LossMode


def _count(minimum: int):
    def check(instance, attribute, value):
        if not is_whole(value) or value < minimum:
            raise ConfigError(
                f"{attribute.name} must be an integer >= {minimum}, got {value}"
            )

    return check


def _non_negative(instance, attribute, value):
    if value < 0:
        raise ConfigError(f"{attribute.name} must be non-negative, got {value}")


@attr.s(frozen=True, slots=True)
class TrainConfig:
    batch_size: int = attr.ib(
        default=consts.DEFAULT_BATCH_SIZE, converter=whole, validator=_count(1)
    )
    learning_rate: float = attr.ib(
        default=consts.DEFAULT_LEARNING_RATE, converter=float, validator=_non_negative
    )
    epochs: int = attr.ib(
        default=consts.DEFAULT_EPOCHS, converter=whole, validator=_count(1)
    )
    loss_mode: LossMode = attr.ib(factory=LossMode.ce)
    seed: int = attr.ib(default=0, converter=int)
    shuffle: bool = attr.ib(default=True, converter=bool)
    # stop after this many epochs without a dev improvement and keep the best epoch
    patience: int | None = attr.ib(default=None, converter=attr.converters.optional(whole))

    @patience.validator
    def _check_patience(self, attribute, value):
        if value is not None:
            _count(1)(self, attribute, value)

    def evolve(self, **changes) -> TrainConfig:
        return attr.evolve(self, **changes)

    def to_dict(self) -> dict:
        return {
            "batch_size": int(self.batch_size),
            "learning_rate": self.learning_rate,
            "epochs": int(self.epochs),
            "loss_mode": self.loss_mode.to_dict(),
            "seed": self.seed,
            "shuffle": self.shuffle,
            "patience": self.patience,
        }

    @classmethod
    def from_dict(cls, data: dict) -> TrainConfig:
        unknown = set(data) - {f.name for f in attr.fields(cls)}
        if unknown:
            raise ConfigError(f"unknown train config keys: {sorted(unknown)}")
        with config_errors("train config"):
            data = dict(data)
            if "loss_mode" in data:
                data["loss_mode"] = LossMode.from_dict(data["loss_mode"])
            return cls(**data)


@attr.s(frozen=True, slots=True)
class TrainReport:
    epoch_losses: tuple[float, ...] = attr.ib(converter=tuple)
    dev_accuracy: float = attr.ib()
    config: TrainConfig = attr.ib()
    # per-epoch dev accuracy, only tracked under early stopping
    dev_curve: tuple[float, ...] = attr.ib(default=(), converter=tuple)
    # logged, never serialized
    wall_time: float = attr.ib(default=0.0, eq=False)

    def to_dict(self) -> dict:
        return {
            "epoch_losses": list(self.epoch_losses),
            "dev_accuracy": self.dev_accuracy,
            "config": self.config.to_dict(),
            **({"dev_curve": list(self.dev_curve)} if self.dev_curve else {}),
        }
