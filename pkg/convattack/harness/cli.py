"""Command-line entry point: `convattack <subcommand> ...`.

Exit codes: 0 on success, 1 on usage or configuration errors, 2 on data or IO errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import attr

from convattack.attacks.constraints import dump_stopwords, load_lexicon, load_stopwords
from convattack.attacks.greedy import attack_dataset
from convattack.attacks.results import AttackConfig, save_results
from convattack.corpus.io import load_dataset, load_splits, save_dataset, write_splits
from convattack.corpus.split import split_dataset
from convattack.corpus.synthetic import generate_synthetic
from convattack.defenses.config import TrainConfig
from convattack.defenses.regimes import (
    finetune_on_attacked,
    train_augmented_only,
    train_centroid,
    train_with_ep_loss,
)
from convattack.defenses.training import train
from convattack.embedding.table import EmbeddingTable, load_embeddings, save_embeddings
from convattack.embedding.toy import build_toy_table
from convattack.harness.benchmark import (
    BenchmarkSpec,
    render_table,
    run_benchmark,
    save_benchmark,
)
from convattack.harness.grid import AXES, GridSpec, aggregate_grid, run_grid, write_rows
from convattack.harness.metrics import attack_success_rate, evaluate
from convattack.utils import consts, registry
from convattack.utils.errors import ConfigError, DataError, config_errors
from convattack.utils.logging import make_logger
from convattack.victims.losses import LossMode
from convattack.victims.mlp import MlpVictim

PROG = "convattack"
_logger = logging.getLogger(__name__)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _read_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: not valid JSON ({e})") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: a config file must hold a JSON object")
    return data


def _merge(config: dict, **flags) -> dict:
    """Config-file values overridden by the flags that were actually given."""
    return {**config, **{k: v for k, v in flags.items() if v is not None}}


def _table(args) -> EmbeddingTable:
    if args.embeddings is not None:
        return load_embeddings(args.embeddings)
    return build_toy_table(args.table_seed)


def _model(path, table: EmbeddingTable) -> MlpVictim:
    return MlpVictim.load(path, table)


def _write_json(data, out: str | Path | None):
    text = json.dumps(data, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")


def _loss_mode(args, current: LossMode) -> LossMode:
    """The configured loss mode with the loss flags applied on top."""
    if args.loss == "ce":
        return LossMode.ce()
    noise_flags = args.noise_site is not None or args.noise_std is not None
    if args.loss != "ep" and args.alpha is None and not noise_flags:
        return current
    base = current if current.is_ep else LossMode.ep()
    noise = base.noise
    if args.noise_site is not None:
        noise = attr.evolve(noise, site=args.noise_site)
    if args.noise_std is not None:
        noise = attr.evolve(noise, std_dev=args.noise_std)
    return LossMode.ep(base.alpha if args.alpha is None else args.alpha, noise)


def _train_settings(args, config: dict) -> dict:
    """Recipe values, then the config file, then explicit flags."""
    base = registry.lookup("train", args.recipe).to_dict() if args.recipe else {}
    return _merge(
        {**base, **config},
        batch_size=args.batch_size,
        learning_rate=args.lr,
        epochs=args.epochs,
        patience=args.patience,
        seed=args.seed,
    )


def _train_config(args, settings: dict) -> TrainConfig:
    config = TrainConfig.from_dict(settings)
    return config.evolve(loss_mode=_loss_mode(args, config.loss_mode))


def _attack_config(args, config: dict) -> AttackConfig:
    base = registry.lookup("attack", args.preset).to_dict() if args.preset else {}
    lexicon = None
    if args.pos_lexicon is not None:
        lexicon = sorted(load_lexicon(args.pos_lexicon))
    return AttackConfig.from_dict(
        _merge(
            {**base, **config},
            pct_words_to_swap=args.pct,
            min_cos_sim=args.min_cos_sim,
            max_candidates=args.max_candidates,
            target=args.target,
            pos_lexicon=lexicon,
            seed=args.seed,
        )
    )


def cmd_gen_embeddings(args) -> int:
    config = _merge(_read_config(args.config), seed=args.seed, dim=args.dim)
    with config_errors("embedding settings"):
        dim = config.get("dim", consts.DEFAULT_EMBEDDING_DIM)
        table = build_toy_table(config.get("seed", 0), dim)
    save_embeddings(table, args.out)
    _logger.info("wrote %d vectors of dim %d to %s", len(table), table.dim, args.out)
    return 0


def cmd_gen_data(args) -> int:
    config = _merge(
        _read_config(args.config),
        seed=args.seed,
        n_per_class=args.n_per_class,
        fractions=args.fractions,
        name=args.name,
    )
    table = _table(args)
    seed = config.get("seed", 0)
    with config_errors("data settings"):
        ds = generate_synthetic(
            config.get("n_per_class", 200), seed, table, name=config.get("name", "synthetic")
        )
        fractions = tuple(config.get("fractions", consts.DEFAULT_SPLIT_FRACTIONS))
        train_ds, dev_ds, test_ds = split_dataset(ds, fractions, seed)
    splits = {"train": train_ds, "dev": dev_ds, "test": test_ds}
    write_splits(args.out, splits, ds.name, seed)
    print(f"{len(train_ds)} train, {len(dev_ds)} dev, {len(test_ds)} test -> {args.out}")
    return 0


def _load_train_dev(args) -> tuple:
    splits = load_splits(args.data)
    if "train" not in splits or "dev" not in splits:
        raise DataError(f"{args.data}: needs train and dev splits")
    return splits["train"], splits["dev"]


def cmd_train(args) -> int:
    table = _table(args)
    train_ds, dev_ds = _load_train_dev(args)
    config = _train_config(args, _train_settings(args, _read_config(args.config)))
    model = MlpVictim.initialize(table, args.hidden_dim, seed=config.seed)
    out = Path(args.out)
    model, report = train(
        model,
        table,
        train_ds,
        dev_ds,
        config,
        checkpoint_every=args.checkpoint_every,
        checkpoint_dir=out.parent / f"{out.stem}-epochs",
        progress=args.progress,
    )
    model.save(out)
    _write_json(report.to_dict(), out.with_suffix(".report.json"))
    print(f"dev accuracy {report.dev_accuracy:.4f} -> {out}")
    return 0


def cmd_attack(args) -> int:
    table = _table(args)
    model = _model(args.model, table)
    ds = load_dataset(args.data)
    config = _attack_config(args, _read_config(args.config))
    results, attacked = attack_dataset(
        model,
        table,
        ds,
        config,
        load_stopwords(args.stopwords),
        workers=args.workers,
        progress=args.progress,
    )
    out = Path(args.out)
    save_results(results, out)
    save_dataset(attacked, args.attacked_out or out.with_suffix(".dataset.json"))
    if results:
        rate = attack_success_rate(results)
        print(f"success rate {rate:.4f} over {len(results)} examples")
    return 0


def cmd_defend(args) -> int:
    table = _table(args)
    train_ds, dev_ds = _load_train_dev(args)
    settings = _train_settings(args, _read_config(args.config))
    # fine-tuning takes its epoch count separately, and 0 is allowed there
    finetune_epochs = settings.pop("epochs", None) if args.mode == "finetune" else None
    config = _train_config(args, settings)
    if args.mode in ("finetune", "augment-only"):
        if args.attacked is None:
            raise ConfigError(f"--mode {args.mode} needs --attacked")
        attacked = load_dataset(args.attacked)
    if args.mode == "finetune":
        if args.model is None:
            raise ConfigError("--mode finetune needs --model")
        baseline = _model(args.model, table)
        model = finetune_on_attacked(baseline, attacked, dev_ds, config, epochs=finetune_epochs)
    elif args.mode == "augment-only":
        model = train_augmented_only(table, attacked, dev_ds, config, args.hidden_dim)
    elif args.mode == "ep-loss":
        mode = config.loss_mode if config.loss_mode.is_ep else LossMode.ep()
        model = train_with_ep_loss(
            table, train_ds, dev_ds, config, mode.alpha, mode.noise, args.hidden_dim
        )
    else:
        model = train_centroid(table, train_ds, dev_ds, config, hidden_dim=args.hidden_dim)
        # the model only works through the table it was trained on
        save_embeddings(model.table, Path(args.out).with_suffix(".table.txt"))
    model.save(args.out)
    print(f"{args.mode} model -> {args.out}")
    return 0


def cmd_eval(args) -> int:
    table = _table(args)
    model = _model(args.model, table)
    ds = load_dataset(args.data)
    accuracy, matrix = evaluate(model, ds)
    print(f"accuracy {accuracy:.4f} ({len(ds)} examples)")
    print(matrix.render())
    if args.out is not None:
        _write_json({"accuracy": accuracy, "confusion_matrix": matrix.to_dict()}, args.out)
    return 0


def cmd_grid(args) -> int:
    table = _table(args)
    model = _model(args.model, table)
    ds = load_dataset(args.data)
    base = registry.lookup("sweep", args.sweep).to_dict() if args.sweep else {}
    settings = _merge(
        {**base, **_read_config(args.config)},
        pct_words_to_swap=args.pct,
        min_cos_sim=args.min_cos_sim,
        max_candidates=args.max_candidates,
        repeats=args.repeats,
        seed=args.seed,
    )
    missing = [axis for axis in AXES if axis not in settings]
    if missing:
        raise ConfigError(
            f"no values for {', '.join(missing)}; use --sweep, axis flags or --config"
        )
    spec = GridSpec.from_dict(settings)
    rows = run_grid(
        model,
        table,
        ds,
        spec,
        load_stopwords(args.stopwords),
        out=args.out,
        workers=args.workers,
        progress=args.progress,
    )
    if args.aggregate_out is not None:
        write_rows(aggregate_grid(rows), args.aggregate_out, aggregated=True)
    print(f"{len(rows)} grid rows -> {args.out}")
    return 0


def cmd_dump_stopwords(args) -> int:
    text = dump_stopwords(load_stopwords(args.stopwords))
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return 0


def cmd_benchmark(args) -> int:
    table = _table(args)
    splits = load_splits(args.data)
    spec = BenchmarkSpec.from_dict(_read_config(args.config))
    if args.seed is not None:
        spec = attr.evolve(spec, train=spec.train.evolve(seed=args.seed))
    if args.adaptive:
        spec = attr.evolve(spec, adaptive=True)
    rows = run_benchmark(table, splits, spec)
    save_benchmark(rows, spec, args.out)
    sys.stdout.write(render_table(rows))
    return 0


def _common(parser: argparse.ArgumentParser, out_required: bool = True):
    parser.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    parser.add_argument("--config", default=None, help="JSON config file")
    parser.add_argument("--out", required=out_required, default=None, help="output path")


def _table_args(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--embeddings", default=None, help="embedding file; defaults to the toy table"
    )
    parser.add_argument("--table-seed", type=int, default=0, help="seed of the toy table")


def _train_args(parser: argparse.ArgumentParser):
    parser.add_argument("--recipe", choices=sorted(registry.RECIPES), default=None)
    parser.add_argument("--epochs", type=int, default=None)
    parser.add_argument("--lr", type=float, default=None)
    parser.add_argument("--batch-size", type=int, default=None)
    parser.add_argument(
        "--patience", type=int, default=None, help="early stopping on dev accuracy"
    )
    parser.add_argument("--hidden-dim", type=int, default=consts.DEFAULT_HIDDEN_DIM)
    parser.add_argument("--alpha", type=float, default=None, help="weight of the noisy loss")
    parser.add_argument("--noise-site", choices=["representation", "logits"], default=None)
    parser.add_argument("--noise-std", type=float, default=None)


def _attack_args(parser: argparse.ArgumentParser, sweep: bool = False):
    nargs = "+" if sweep else None
    parser.add_argument(
        "--pct", type=float, nargs=nargs, default=None, help="pct_words_to_swap"
    )
    parser.add_argument("--min-cos-sim", type=float, nargs=nargs, default=None)
    parser.add_argument("--max-candidates", type=int, nargs=nargs, default=None)
    parser.add_argument(
        "--stopwords", default=None, help="stopword file, one token per line"
    )
    parser.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Synonym-swap attacks on dialogue entailment.")
    parser.add_argument("--log-file", default=None, help="log here instead of stderr")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("--progress", action="store_true", help="show progress bars")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-embeddings", help="write the toy embedding table")
    _common(p)
    p.add_argument("--dim", type=int, default=None)
    p.set_defaults(func=cmd_gen_embeddings)

    p = sub.add_parser("gen-data", help="generate and split the synthetic corpus")
    _common(p)
    _table_args(p)
    p.add_argument("--n-per-class", type=int, default=None)
    p.add_argument(
        "--fractions", type=float, nargs=3, default=None, metavar=("TRAIN", "DEV", "TEST")
    )
    p.add_argument("--name", default=None)
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("train", help="train a victim with CE or EP loss")
    _common(p)
    _table_args(p)
    _train_args(p)
    p.add_argument("--data", required=True, help="directory written by gen-data")
    p.add_argument("--loss", choices=["ce", "ep"], default=None)
    p.add_argument("--checkpoint-every", type=int, default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("attack", help="attack every example of a dataset")
    _common(p)
    _table_args(p)
    _attack_args(p)
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--preset", choices=sorted(registry.ATTACKS), default=None)
    p.add_argument(
        "--target", choices=["hypothesis_only", "hypothesis_and_dialogue"], default=None
    )
    p.add_argument("--pos-lexicon", default=None, help="only swap the tokens in this file")
    p.add_argument("--attacked-out", default=None, help="attacked dataset path")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("defend", help="train a defended victim")
    _common(p)
    _table_args(p)
    _train_args(p)
    p.add_argument(
        "--mode", required=True, choices=["finetune", "augment-only", "ep-loss", "centroid"]
    )
    p.add_argument("--data", required=True, help="directory written by gen-data")
    p.add_argument("--attacked", default=None, help="attacked train set")
    p.add_argument("--model", default=None, help="baseline checkpoint to fine-tune")
    p.set_defaults(func=cmd_defend, loss=None)

    p = sub.add_parser("eval", help="accuracy and confusion matrix")
    _common(p, out_required=False)
    _table_args(p)
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grid", help="sweep attack parameters")
    _common(p)
    _table_args(p)
    _attack_args(p, sweep=True)
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--sweep", choices=sorted(registry.SWEEPS), default=None)
    p.add_argument("--repeats", type=int, default=None)
    p.add_argument("--aggregate-out", default=None, help="seed-averaged CSV")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("dump-stopwords", help="print the stopword list")
    _common(p, out_required=False)
    p.add_argument("--stopwords", default=None)
    p.set_defaults(func=cmd_dump_stopwords)

    p = sub.add_parser("benchmark", help="compare every defense")
    _common(p)
    _table_args(p)
    p.add_argument("--data", required=True, help="directory written by gen-data")
    p.add_argument("--adaptive", action="store_true", help="also attack each model directly")
    p.set_defaults(func=cmd_benchmark)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"{PROG}: error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    make_logger(PROG, args.log_file, logging.DEBUG if args.verbose else logging.INFO)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"{PROG}: error: {e}", file=sys.stderr)
        return 1
    except (DataError, OSError) as e:
        print(f"{PROG}: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
