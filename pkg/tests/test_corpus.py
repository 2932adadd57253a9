import json

import pytest

from conftest import make_example
from convattack.abstractions.example import Dataset, DialogueTurn, Split
from convattack.attacks.tokenizer import words
from convattack.corpus.io import (
    dataset_from_dict,
    dumps_dataset,
    load_dataset,
    load_splits,
    save_dataset,
    write_splits,
)
from convattack.corpus.split import split_dataset, split_sizes
from convattack.corpus.synthetic import generate_synthetic
from convattack.embedding.table import EmbeddingTable
from convattack.utils.errors import ConfigError, DataError


def _raw(*ids):
    return {
        "name": "ce",
        "split": "train",
        "examples": [
            {
                "id": i,
                "dialogue": [{"speaker": "A", "text": "i bought a car ."}],
                "hypothesis": "A bought a car .",
                "label": True,
            }
            for i in ids
        ],
    }


class TestRecords:
    def test_blank_turn_rejected(self):
        with pytest.raises(DataError):
            DialogueTurn("A", "   ")

    def test_premise_joins_turn_lines(self):
        example = make_example("x .", turns=("A: hello there .", "B: hi ."))
        assert example.premise == "A: hello there .\nB: hi ."

    def test_duplicate_ids_rejected(self):
        with pytest.raises(DataError, match="duplicate"):
            Dataset("d", [make_example("x ."), make_example("y .")])


class TestLoadDataset:
    def test_preserves_order_and_count(self, tmp_path):
        path = tmp_path / "d.json"
        path.write_text(json.dumps(_raw(*[f"ce_{i:03d}" for i in range(703)])), encoding="utf-8")
        ds = load_dataset(path)
        assert len(ds) == 703
        assert ds.ids[:3] == ["ce_000", "ce_001", "ce_002"]
        assert ds.split is Split.train

    def test_empty_examples_is_valid(self, tmp_path):
        path = tmp_path / "d.json"
        path.write_text(json.dumps(_raw()), encoding="utf-8")
        assert len(load_dataset(path)) == 0

    def test_duplicate_id(self, tmp_path):
        path = tmp_path / "d.json"
        path.write_text(json.dumps(_raw("ce_001", "ce_001")), encoding="utf-8")
        with pytest.raises(DataError, match="ce_001"):
            load_dataset(path)

    def test_schema_violation_names_the_field(self):
        raw = _raw("a", "b")
        raw["examples"][1]["dialogue"][0]["text"] = 3
        with pytest.raises(DataError, match=r"\$\.examples\[1\]\.dialogue\[0\]\.text"):
            dataset_from_dict(raw)

    def test_missing_label(self):
        raw = _raw("a")
        del raw["examples"][0]["label"]
        with pytest.raises(DataError, match=r"examples\[0\]\.label"):
            dataset_from_dict(raw)

    def test_byte_order_mark_rejected(self, tmp_path):
        path = tmp_path / "d.json"
        path.write_bytes(b"\xef\xbb\xbf" + json.dumps(_raw("a")).encode("utf-8"))
        with pytest.raises(DataError, match="byte order mark"):
            load_dataset(path)

    def test_missing_file_is_os_error(self, tmp_path):
        with pytest.raises(OSError):
            load_dataset(tmp_path / "absent.json")

    def test_round_trip_is_canonical(self, tmp_path, synthetic_ds):
        first = save_dataset(synthetic_ds, tmp_path / "a.json")
        second = save_dataset(load_dataset(first), tmp_path / "b.json")
        assert first.read_bytes() == second.read_bytes()
        assert first.read_text(encoding="utf-8").endswith("\n")


class TestSplit:
    def test_sizes(self):
        assert split_sizes(10, (0.8, 0.1, 0.1)) == (8, 1, 1)

    @pytest.mark.parametrize("fractions", [(0.5, 0.5, 0.1), (1.0, 0.0, 0.0), (0.5, 0.5)])
    def test_invalid_fractions(self, fractions):
        with pytest.raises(ConfigError):
            split_sizes(10, fractions)

    def test_partition(self, synthetic_ds):
        parts = split_dataset(synthetic_ds, (0.7, 0.1, 0.2), seed=4)
        ids = [set(p.ids) for p in parts]
        assert not ids[0] & ids[1] and not ids[0] & ids[2] and not ids[1] & ids[2]
        assert set().union(*ids) == set(synthetic_ds.ids)
        assert [p.split for p in parts] == [Split.train, Split.dev, Split.test]

    def test_deterministic(self, synthetic_ds):
        a = split_dataset(synthetic_ds, (0.7, 0.1, 0.2), seed=4)
        b = split_dataset(synthetic_ds, (0.7, 0.1, 0.2), seed=4)
        assert [p.ids for p in a] == [p.ids for p in b]

    def test_manifest_round_trip(self, tmp_path, splits):
        write_splits(tmp_path, splits, "synthetic", seed=1)
        loaded = load_splits(tmp_path)
        assert {k: len(v) for k, v in loaded.items()} == {k: len(v) for k, v in splits.items()}

    def test_manifest_count_mismatch(self, tmp_path, splits):
        write_splits(tmp_path, splits, "synthetic", seed=1)
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        manifest["splits"]["dev"] += 1
        (tmp_path / "manifest.json").write_text(json.dumps(manifest))
        with pytest.raises(DataError, match="manifest"):
            load_splits(tmp_path)


class TestSynthetic:
    def test_deterministic(self, toy_table):
        a = generate_synthetic(50, seed=7, vocab=toy_table)
        b = generate_synthetic(50, seed=7, vocab=toy_table)
        assert dumps_dataset(a) == dumps_dataset(b)

    def test_one_per_label(self, toy_table):
        ds = generate_synthetic(1, seed=0, vocab=toy_table)
        assert sorted(ds.labels) == [False, True]

    def test_balanced(self, synthetic_ds):
        assert sum(synthetic_ds.labels) == len(synthetic_ds) // 2

    def test_positives_overlap_their_dialogue(self, synthetic_ds):
        for example in synthetic_ds:
            if not example.label:
                continue
            dialogue = set(words(example.premise))
            hypothesis = words(example.hypothesis)
            overlap = sum(w in dialogue for w in hypothesis)
            assert overlap / len(hypothesis) > 0.5, example

    def test_vocabulary_too_small(self):
        table = EmbeddingTable(["john", "car"], [[1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(DataError, match="too small"):
            generate_synthetic(3, seed=0, vocab=table)

    def test_bad_count(self, toy_table):
        with pytest.raises(ConfigError):
            generate_synthetic(0, seed=0, vocab=toy_table)
