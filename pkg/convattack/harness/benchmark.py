"""Side-by-side comparison of the defenses on clean and attacked test data."""
from __future__ import annotations

import json
import logging
from pathlib import Path

import attr

from convattack.abstractions.example import Dataset
from convattack.attacks.greedy import attack_dataset
from convattack.attacks.results import AttackConfig
from convattack.defenses.config import TrainConfig
from convattack.defenses.regimes import (
    finetune_on_attacked,
    train_augmented_only,
    train_centroid,
    train_standard,
    train_with_ep_loss,
)
from convattack.embedding.table import EmbeddingTable
from convattack.harness.metrics import ConfusionMatrix, evaluate
from convattack.utils import consts
from convattack.utils.errors import ConfigError, DataError, config_errors
from convattack.utils.seeding import derive_seed

_logger = logging.getLogger(__name__)


@attr.s(frozen=True, slots=True)
class BenchmarkSpec:
    train: TrainConfig = attr.ib(factory=TrainConfig)
    attack: AttackConfig = attr.ib(
        factory=lambda: AttackConfig(
            pct_words_to_swap=0.9, min_cos_sim=0.3, max_candidates=100
        )
    )
    alphas: tuple[float, ...] = attr.ib(default=(0.25, 0.5, 0.75), converter=tuple)
    finetune_epochs: int = attr.ib(default=consts.DEFAULT_FINETUNE_EPOCHS)
    hidden_dim: int = attr.ib(default=consts.DEFAULT_HIDDEN_DIM)
    centroid_min_cos_sim: float = attr.ib(default=0.5)
    centroid_max_candidates: int = attr.ib(default=10)
    # also attack each model directly, not only through the baseline's attacked set
    adaptive: bool = attr.ib(default=False)
    workers: int = attr.ib(default=1)

    def to_dict(self) -> dict:
        data = attr.asdict(self, recurse=False)
        data["train"] = self.train.to_dict()
        data["attack"] = self.attack.to_dict()
        data["alphas"] = list(self.alphas)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> BenchmarkSpec:
        unknown = set(data) - {f.name for f in attr.fields(cls)}
        if unknown:
            raise ConfigError(f"unknown benchmark keys: {sorted(unknown)}")
        with config_errors("benchmark spec"):
            data = dict(data)
            if "train" in data:
                data["train"] = TrainConfig.from_dict(data["train"])
            if "attack" in data:
                data["attack"] = AttackConfig.from_dict(data["attack"])
            return cls(**data)


@attr.s(frozen=True, slots=True)
class BenchmarkRow:
    model: str = attr.ib()
    clean_acc: float = attr.ib()
    attacked_acc: float = attr.ib()
    clean_matrix: ConfusionMatrix = attr.ib()
    attacked_matrix: ConfusionMatrix = attr.ib()
    adaptive_acc: float | None = attr.ib(default=None)

    @property
    def gap(self) -> float:
        return self.clean_acc - self.attacked_acc

    def to_dict(self) -> dict:
        data = {
            "model": self.model,
            "clean_acc": self.clean_acc,
            "attacked_acc": self.attacked_acc,
            "gap": self.gap,
            "clean_matrix": self.clean_matrix.to_dict(),
            "attacked_matrix": self.attacked_matrix.to_dict(),
        }
        if self.adaptive_acc is not None:
            data["adaptive_acc"] = self.adaptive_acc
        return data


def run_benchmark(
    table: EmbeddingTable, splits: dict[str, Dataset], spec: BenchmarkSpec
) -> list[BenchmarkRow]:
    """Trains every defense and scores it on the clean test set and on the test set
    attacked against the baseline."""
    missing = {"train", "dev", "test"} - set(splits)
    if missing:
        raise DataError(f"benchmark needs the splits {sorted(missing)}")
    train_ds, dev_ds, test_ds = splits["train"], splits["dev"], splits["test"]
    config = spec.train
    hidden = spec.hidden_dim
    retrain_config = config.evolve(seed=derive_seed(config.seed, "retrained"))

    baseline = train_standard(table, train_ds, dev_ds, config, hidden)
    _, attacked_train = attack_dataset(
        baseline, table, train_ds, spec.attack, workers=spec.workers
    )
    models = {
        "baseline": baseline,
        "retrained": train_standard(table, train_ds, dev_ds, retrain_config, hidden),
        "finetuned": finetune_on_attacked(
            baseline, attacked_train, dev_ds, config,
            epochs=spec.finetune_epochs, table=table,
        ),
        "augmented": train_augmented_only(table, attacked_train, dev_ds, config, hidden),
    }
    for alpha in spec.alphas:
        models[f"ep_{alpha:g}"] = train_with_ep_loss(
            table, train_ds, dev_ds, config, alpha, hidden_dim=hidden
        )
    models["centroid"] = train_centroid(
        table, train_ds, dev_ds, config,
        spec.centroid_min_cos_sim, spec.centroid_max_candidates, hidden,
    )

    _, attacked_test = attack_dataset(
        baseline, table, test_ds, spec.attack, workers=spec.workers
    )
    rows = []
    for name, model in models.items():
        clean_acc, clean_matrix = evaluate(model, test_ds)
        attacked_acc, attacked_matrix = evaluate(model, attacked_test)
        adaptive_acc = None
        if spec.adaptive:
            _, own = attack_dataset(model, table, test_ds, spec.attack, workers=spec.workers)
            adaptive_acc = evaluate(model, own)[0]
        row = BenchmarkRow(
            name, clean_acc, attacked_acc, clean_matrix, attacked_matrix, adaptive_acc
        )
        rows.append(row)
        _logger.info("%s: clean %.4f, attacked %.4f", name, clean_acc, attacked_acc)
        if attacked_acc > clean_acc:
            _logger.info("%s: the attacked test set scores above the clean one", name)
    return rows


def render_table(rows: list[BenchmarkRow]) -> str:
    header = ["model", "clean", "attacked", "gap", "tp", "fp", "tn", "fn"]
    adaptive = any(r.adaptive_acc is not None for r in rows)
    if adaptive:
        header.insert(4, "adaptive")
    lines = [header]
    for r in rows:
        m = r.attacked_matrix
        cells = [r.model, f"{r.clean_acc:.4f}", f"{r.attacked_acc:.4f}", f"{r.gap:+.4f}"]
        if adaptive:
            cells.append("-" if r.adaptive_acc is None else f"{r.adaptive_acc:.4f}")
        lines.append(cells + [str(m.tp), str(m.fp), str(m.tn), str(m.fn)])
    widths = [max(len(line[i]) for line in lines) for i in range(len(header))]

    def fmt(line):
        return "  ".join(
            cell.ljust(w) if i == 0 else cell.rjust(w)
            for i, (cell, w) in enumerate(zip(line, widths))
        )

    return "\n".join(fmt(line) for line in lines) + "\n"


def save_benchmark(rows: list[BenchmarkRow], spec: BenchmarkSpec, out: str | Path) -> Path:
    """Writes `<out>` as JSON and the same rows as a text table next to it."""
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    payload = {"spec": spec.to_dict(), "rows": [r.to_dict() for r in rows]}
    out.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    out.with_suffix(".txt").write_text(render_table(rows), encoding="utf-8")
    return out
