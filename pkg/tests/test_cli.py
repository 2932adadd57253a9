import json

import numpy as np
import pytest

from convattack.attacks.results import load_results
from convattack.corpus.io import load_dataset, load_splits
from convattack.embedding.table import load_embeddings
from convattack.embedding.toy import build_toy_table
from convattack.harness import cli
from convattack.harness.cli import main
from convattack.utils.consts import CSV_COLUMNS
from convattack.victims.mlp import PARAM_NAMES, MlpVictim

TRAIN_FLAGS = ["--epochs", "3", "--lr", "0.1", "--batch-size", "8", "--hidden-dim", "8"]


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    log = str(root / "run.log")

    def run(*argv):
        return main(["--log-file", log, *map(str, argv)])

    assert run("gen-data", "--out", root / "data", "--n-per-class", 12, "--seed", 5) == 0
    assert run("train", "--data", root / "data", "--out", root / "m.ckpt", "--seed", 1,
               *TRAIN_FLAGS) == 0
    return root, run


class TestCli:
    def test_gen_embeddings(self, tmp_path):
        out = tmp_path / "emb.txt"
        assert main(["--log-file", str(tmp_path / "log"), "gen-embeddings", "--out", str(out),
                     "--seed", "0"]) == 0
        table = load_embeddings(out)
        assert table.tokens == build_toy_table(0).tokens

    def test_gen_data(self, workspace):
        root, _ = workspace
        splits = load_splits(root / "data")
        assert sorted(splits) == ["dev", "test", "train"]
        assert sum(len(ds) for ds in splits.values()) == 24

    def test_train_writes_checkpoint_and_report(self, workspace):
        root, _ = workspace
        model = MlpVictim.load(root / "m.ckpt", build_toy_table(0))
        assert model.hidden_dim == 8
        report = json.loads((root / "m.report.json").read_text(encoding="utf-8"))
        assert len(report["epoch_losses"]) == 3

    def test_eval(self, workspace, capsys):
        root, run = workspace
        out = root / "eval.json"
        assert run("eval", "--model", root / "m.ckpt", "--data", root / "data/test.json",
                   "--out", out) == 0
        assert "accuracy" in capsys.readouterr().out
        payload = json.loads(out.read_text(encoding="utf-8"))
        assert 0.0 <= payload["accuracy"] <= 1.0
        assert set(payload["confusion_matrix"]) == {"tp", "fp", "tn", "fn"}

    def test_attack(self, workspace):
        root, run = workspace
        out = root / "attack.jsonl"
        assert run("attack", "--model", root / "m.ckpt", "--data", root / "data/test.json",
                   "--out", out, "--preset", "strong") == 0
        results = load_results(out)
        attacked = load_dataset(root / "attack.dataset.json")
        assert [r.example_id for r in results] == attacked.ids

    def test_out_of_range_pct_is_a_config_error(self, workspace):
        root, run = workspace
        assert run("attack", "--model", root / "m.ckpt", "--data", root / "data/test.json",
                   "--out", root / "bad.jsonl", "--pct", 1.5) == 1

    def test_grid(self, workspace):
        root, run = workspace
        out = root / "grid.csv"
        code = run(
            "grid", "--model", root / "m.ckpt", "--data", root / "data/test.json",
            "--out", out, "--pct", 0.3, 0.9, "--min-cos-sim", 0.3, 0.9,
            "--max-candidates", 20, "--repeats", 2, "--aggregate-out", root / "agg.csv",
        )
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 9
        aggregated = (root / "agg.csv").read_text(encoding="utf-8").splitlines()
        assert len(aggregated) == 5
        assert aggregated[0].endswith(",repeats")

    def test_dump_stopwords(self, capsys, tmp_path):
        assert main(["--log-file", str(tmp_path / "log"), "dump-stopwords"]) == 0
        words = capsys.readouterr().out.split()
        assert "the" in words
        assert words == sorted(words)

    def test_unknown_flag(self, workspace):
        _, run = workspace
        assert run("eval", "--no-such-flag") == 1

    def test_missing_input(self, workspace):
        root, run = workspace
        assert run("eval", "--model", root / "m.ckpt", "--data", root / "missing.json") == 2

    def test_bad_config_file(self, workspace):
        root, run = workspace
        config = root / "bad-config.json"
        config.write_text('{"batch_size": 8, "momentum": 0.9}', encoding="utf-8")
        assert run("train", "--data", root / "data", "--out", root / "x.ckpt",
                   "--config", config) == 1

    def test_help(self, capsys):
        assert main(["--help"]) == 0
        assert "gen-data" in capsys.readouterr().out

    def test_same_seed_same_bytes(self, workspace):
        root, run = workspace
        for name in ("a", "b"):
            assert run("train", "--data", root / "data", "--out", root / f"{name}.ckpt",
                       "--seed", 9, *TRAIN_FLAGS) == 0
        assert (root / "a.ckpt").read_bytes() == (root / "b.ckpt").read_bytes()


def _write_config(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


@pytest.fixture(scope="module")
def attacked_train(workspace):
    root, run = workspace
    out = root / "train-attack.jsonl"
    assert run("attack", "--model", root / "m.ckpt", "--data", root / "data/train.json",
               "--out", out, "--preset", "strong") == 0
    return root / "train-attack.dataset.json"


class TestDefend:
    @pytest.mark.parametrize("mode", ["finetune", "augment-only", "ep-loss", "centroid"])
    def test_every_mode_writes_a_loadable_model(self, workspace, attacked_train, mode):
        root, run = workspace
        out = root / f"defended-{mode}.ckpt"
        extra = []
        if mode in ("finetune", "augment-only"):
            extra += ["--attacked", attacked_train]
        if mode == "finetune":
            extra += ["--model", root / "m.ckpt"]
        assert run("defend", "--mode", mode, "--data", root / "data", "--out", out,
                   "--seed", 3, *TRAIN_FLAGS, *extra) == 0
        table = build_toy_table(0)
        if mode == "centroid":
            table = load_embeddings(out.with_suffix(".table.txt"))
        model = MlpVictim.load(out, table)
        assert model.hidden_dim == 8
        assert sum(model.predict_proba("hi .", "they are happy .")) == pytest.approx(1.0)

    def test_missing_attacked_set(self, workspace):
        root, run = workspace
        assert run("defend", "--mode", "augment-only", "--data", root / "data",
                   "--out", root / "x.ckpt") == 1

    def test_ep_loss_reads_alpha_and_noise_from_the_config(self, workspace, monkeypatch):
        root, run = workspace
        seen = []

        def spy(table, train_ds, dev_ds, config, alpha, noise, hidden_dim):
            seen.append((alpha, noise.site.value))
            return real(table, train_ds, dev_ds, config, alpha, noise, hidden_dim)

        real = cli.train_with_ep_loss
        monkeypatch.setattr(cli, "train_with_ep_loss", spy)
        config = _write_config(root / "ep.json", {
            "epochs": 2,
            "loss_mode": {"kind": "ep", "alpha": 0.75, "noise": {"site": "logits"}},
        })
        assert run("defend", "--mode", "ep-loss", "--data", root / "data",
                   "--out", root / "ep.ckpt", "--config", config) == 0
        # a flag overrides the file but keeps the rest of its loss mode
        assert run("defend", "--mode", "ep-loss", "--data", root / "data",
                   "--out", root / "ep.ckpt", "--config", config, "--alpha", 0.25) == 0
        assert seen == [(0.75, "logits"), (0.25, "logits")]

    def test_noise_flags_alone_train_with_ep_loss(self, workspace):
        root, run = workspace
        out = root / "noisy.ckpt"
        assert run("train", "--data", root / "data", "--out", out, "--noise-std", 0.5,
                   *TRAIN_FLAGS) == 0
        report = json.loads(out.with_suffix(".report.json").read_text(encoding="utf-8"))
        assert report["config"]["loss_mode"]["kind"] == "ep"
        assert report["config"]["loss_mode"]["noise"]["std_dev"] == 0.5

    def test_finetune_takes_epochs_from_the_config(self, workspace, attacked_train,
                                                   monkeypatch):
        root, run = workspace
        seen = []
        real = cli.finetune_on_attacked

        def spy(*args, epochs=None, **kwargs):
            seen.append(epochs)
            return real(*args, epochs=epochs, **kwargs)

        monkeypatch.setattr(cli, "finetune_on_attacked", spy)
        config = _write_config(root / "ft.json", {"epochs": 2})
        common = ["defend", "--mode", "finetune", "--data", root / "data",
                  "--attacked", attacked_train, "--model", root / "m.ckpt"]
        assert run(*common, "--out", root / "ft.ckpt", "--config", config) == 0
        assert run(*common, "--out", root / "ft0.ckpt", "--epochs", 0) == 0
        assert seen == [2, 0]
        table = build_toy_table(0)
        baseline = MlpVictim.load(root / "m.ckpt", table)
        unchanged = MlpVictim.load(root / "ft0.ckpt", table)
        assert all(np.array_equal(baseline.params[n], unchanged.params[n])
                   for n in PARAM_NAMES)


class TestBenchmark:
    def test_small_benchmark(self, workspace, capsys):
        root, run = workspace
        spec = {
            "train": {"epochs": 2, "batch_size": 8, "learning_rate": 0.1},
            "attack": {"pct_words_to_swap": 0.9, "min_cos_sim": 0.3, "max_candidates": 20},
            "alphas": [0.5],
            "finetune_epochs": 1,
            "hidden_dim": 8,
        }
        config = _write_config(root / "bench.json", spec)
        out = root / "bench.json.out"
        assert run("benchmark", "--data", root / "data", "--out", out,
                   "--config", config) == 0
        payload = json.loads(out.read_text(encoding="utf-8"))
        names = [row["model"] for row in payload["rows"]]
        assert names == ["baseline", "retrained", "finetuned", "augmented", "ep_0.5",
                         "centroid"]
        assert payload["spec"]["alphas"] == [0.5]
        assert "baseline" in capsys.readouterr().out


class TestConfigErrors:
    def test_grid_without_axes(self, workspace):
        root, run = workspace
        assert run("grid", "--model", root / "m.ckpt", "--data", root / "data/test.json",
                   "--out", root / "empty-grid.csv") == 1

    @pytest.mark.parametrize(
        "command, payload",
        [
            ("train", {"epochs": "ten"}),
            ("train", {"learning_rate": "fast"}),
            ("train", {"loss_mode": {"kind": "ep", "alpha": "half"}}),
            ("train", {"loss_mode": "ep"}),
            ("gen-data", {"n_per_class": "many"}),
        ],
    )
    def test_wrongly_typed_values(self, workspace, command, payload):
        root, run = workspace
        config = _write_config(root / "typed.json", payload)
        argv = ["--data", root / "data"] if command == "train" else []
        assert run(command, *argv, "--out", root / "typed.out", "--config", config) == 1

    def test_wrongly_typed_attack_value(self, workspace):
        root, run = workspace
        config = _write_config(root / "attack-typed.json", {"max_candidates": "lots"})
        assert run("attack", "--model", root / "m.ckpt", "--data", root / "data/test.json",
                   "--out", root / "typed.jsonl", "--preset", "strong",
                   "--config", config) == 1
