from __future__ import annotations

import csv
import io
import itertools
import logging
from pathlib import Path
from typing import Iterable, Sequence

import attr
import numpy as np

from convattack.abstractions.example import Dataset
from convattack.abstractions.victim import VictimInterface
from convattack.attacks.greedy import attack_dataset
from convattack.attacks.results import AttackConfig, Target
from convattack.embedding.table import EmbeddingTable
from convattack.harness.metrics import attack_success_rate, evaluate
from convattack.utils.consts import CSV_COLUMNS
from convattack.utils.errors import ConfigError, DataError, config_errors, is_whole, whole
from convattack.utils.seeding import derive_seed

_logger = logging.getLogger(__name__)

AXES = ("pct_words_to_swap", "min_cos_sim", "max_candidates")


def _axis(value) -> tuple:
    if isinstance(value, (int, float)):
        value = (value,)
    value = tuple(value)
    if not value:
        raise ConfigError("grid axes must be non-empty")
    return value


@attr.s(frozen=True, slots=True)
class GridSpec:
    """Axis values to sweep; a one-value axis is a fixed binding."""

    pct_words_to_swap: tuple[float, ...] = attr.ib(converter=_axis)
    min_cos_sim: tuple[float, ...] = attr.ib(converter=_axis)
    max_candidates: tuple[int, ...] = attr.ib(converter=_axis)
    repeats: int = attr.ib(default=1, converter=whole)
    target: Target = attr.ib(default=Target.hypothesis_only, converter=Target)
    seed: int = attr.ib(default=0, converter=int)

    @repeats.validator
    def _check_repeats(self, attribute, value):
        if not is_whole(value) or value < 1:
            raise ConfigError(f"repeats must be a positive integer, got {value}")

    def __attrs_post_init__(self):
        # range errors surface here rather than mid-grid
        self.configs(0)

    def seeds(self) -> list[int]:
        """One seed per repeat, shared by every cell."""
        return [derive_seed(self.seed, "repeat", r) for r in range(self.repeats)]

    def configs(self, seed: int) -> list[AttackConfig]:
        return [
            AttackConfig(pct, cos, k, self.target, seed=seed)
            for pct, cos, k in itertools.product(*(getattr(self, a) for a in AXES))
        ]

    def __len__(self) -> int:
        return self.repeats * int(np.prod([len(getattr(self, a)) for a in AXES]))

    def to_dict(self) -> dict:
        return {
            "pct_words_to_swap": list(self.pct_words_to_swap),
            "min_cos_sim": list(self.min_cos_sim),
            "max_candidates": [int(k) for k in self.max_candidates],
            "repeats": int(self.repeats),
            "target": self.target.value,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> GridSpec:
        unknown = set(data) - {f.name for f in attr.fields(cls)}
        if unknown:
            raise ConfigError(f"unknown grid keys: {sorted(unknown)}")
        with config_errors("grid"):
            return cls(**data)


@attr.s(frozen=True, slots=True)
class GridRow:
    pct_words_to_swap: float = attr.ib()
    min_cos_sim: float = attr.ib()
    max_candidates: int = attr.ib()
    seed: int = attr.ib()
    clean_acc: float = attr.ib()
    attacked_acc: float = attr.ib()
    success_rate: float = attr.ib()
    mean_queries: float = attr.ib()
    repeats: int = attr.ib(default=1)

    @property
    def config_key(self) -> tuple:
        return (self.pct_words_to_swap, self.min_cos_sim, self.max_candidates)


def run_grid(
    victim: VictimInterface,
    table: EmbeddingTable,
    test_ds: Dataset,
    spec: GridSpec,
    stopwords: frozenset[str] | None = None,
    out: str | Path | None = None,
    workers: int = 1,
    progress: bool = False,
) -> list[GridRow]:
    """One attack per (cell, repeat), rows ordered by cell then repeat."""
    clean_acc, _ = evaluate(victim, test_ds)
    by_cell: dict[int, list[GridRow]] = {}
    for seed in spec.seeds():
        for cell, config in enumerate(spec.configs(seed)):
            results, attacked = attack_dataset(
                victim, table, test_ds, config, stopwords, workers=workers, progress=progress
            )
            attacked_acc, _ = evaluate(victim, attacked)
            row = GridRow(
                config.pct_words_to_swap,
                config.min_cos_sim,
                config.max_candidates,
                seed,
                clean_acc,
                attacked_acc,
                attack_success_rate(results),
                float(np.mean([r.queries for r in results])),
            )
            _logger.info(
                "cell pct=%s cos=%s k=%s seed=%d: attacked accuracy %.4f",
                *row.config_key, seed, attacked_acc,
            )
            if attacked_acc > clean_acc:
                _logger.info("the attack raised accuracy above clean %.4f", clean_acc)
            by_cell.setdefault(cell, []).append(row)
    rows = [row for cell in sorted(by_cell) for row in by_cell[cell]]
    if out is not None:
        write_rows(rows, out)
    return rows


def dumps_rows(rows: Iterable[GridRow], aggregated: bool = False) -> str:
    columns = CSV_COLUMNS + ("repeats",) if aggregated else CSV_COLUMNS
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([getattr(row, c) for c in columns])
    return buffer.getvalue()


def write_rows(rows: Iterable[GridRow], path: str | Path, aggregated: bool = False) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_rows(rows, aggregated), encoding="utf-8")
    return path


def read_rows(path: str | Path) -> list[GridRow]:
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ())[: len(CSV_COLUMNS)] != CSV_COLUMNS:
            raise DataError(f"{path}: unexpected grid header {reader.fieldnames}")
        return [
            GridRow(
                float(r["pct_words_to_swap"]),
                float(r["min_cos_sim"]),
                int(r["max_candidates"]),
                int(r["seed"]),
                float(r["clean_acc"]),
                float(r["attacked_acc"]),
                float(r["success_rate"]),
                float(r["mean_queries"]),
                int(r.get("repeats") or 1),
            )
            for r in reader
        ]


def mean_over_seeds(rows: Sequence[GridRow]) -> GridRow:
    if not rows:
        raise DataError("nothing to aggregate")
    keys = {row.config_key for row in rows}
    if len(keys) > 1:
        raise DataError(f"cannot average rows from different configs: {sorted(keys)}")
    if len(rows) == 1:
        return rows[0]

    def mean(name):
        return float(np.mean([getattr(row, name) for row in rows]))

    return attr.evolve(
        rows[0],
        clean_acc=mean("clean_acc"),
        attacked_acc=mean("attacked_acc"),
        success_rate=mean("success_rate"),
        mean_queries=mean("mean_queries"),
        repeats=sum(row.repeats for row in rows),
    )


def aggregate_grid(rows: Iterable[GridRow]) -> list[GridRow]:
    groups: dict[tuple, list[GridRow]] = {}
    for row in rows:
        groups.setdefault(row.config_key, []).append(row)
    return [mean_over_seeds(group) for group in groups.values()]
