"""Dataset JSON ingestion and canonical serialization.

Schema::

    {"name": str, "split": "train"|"dev"|"test",
     "examples": [{"id": str, "dialogue": [{"speaker": str, "text": str}],
                   "hypothesis": str, "label": bool}]}
"""
from __future__ import annotations

import json
import logging
from pathlib import Path

from convattack.abstractions.example import Dataset, DialogueTurn, EntailmentExample, Split
from convattack.utils.errors import DataError

_logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def _expect(value, kind, path: str):
    if kind is str and isinstance(value, str):
        return value
    if kind is bool and isinstance(value, bool):
        return value
    if kind is list and isinstance(value, list):
        return value
    if kind is dict and isinstance(value, dict):
        return value
    raise DataError(f"schema violation at {path}: expected {kind.__name__}, got {value!r}")


def _field(obj: dict, key: str, kind, path: str):
    if key not in obj:
        raise DataError(f"schema violation at {path}.{key}: missing field")
    return _expect(obj[key], kind, f"{path}.{key}")


def _nonempty(text: str, path: str) -> str:
    if not text.strip():
        raise DataError(f"schema violation at {path}: empty string")
    return text


def dataset_from_dict(data, source: str = "$") -> Dataset:
    root = "$"
    _expect(data, dict, root)
    name = _field(data, "name", str, root)
    split = _field(data, "split", str, root)
    if split not in Split.__members__:
        raise DataError(f"schema violation at {root}.split: unknown split {split!r}")
    examples = []
    seen = set()
    for i, raw in enumerate(_field(data, "examples", list, root)):
        path = f"{root}.examples[{i}]"
        _expect(raw, dict, path)
        example_id = _nonempty(_field(raw, "id", str, path), f"{path}.id")
        turns = []
        dialogue = _field(raw, "dialogue", list, path)
        if not dialogue:
            raise DataError(f"schema violation at {path}.dialogue: no turns")
        for j, turn in enumerate(dialogue):
            turn_path = f"{path}.dialogue[{j}]"
            _expect(turn, dict, turn_path)
            turns.append(
                DialogueTurn(
                    speaker=_field(turn, "speaker", str, turn_path),
                    text=_nonempty(
                        _field(turn, "text", str, turn_path), f"{turn_path}.text"
                    ),
                )
            )
        hypothesis = _nonempty(_field(raw, "hypothesis", str, path), f"{path}.hypothesis")
        label = _field(raw, "label", bool, path)
        if example_id in seen:
            raise DataError(f"duplicate example id {example_id!r} at {path}.id in {source}")
        seen.add(example_id)
        examples.append(EntailmentExample(example_id, turns, hypothesis, label))
    return Dataset(name=name, examples=examples, split=Split(split))


def dataset_to_dict(ds: Dataset) -> dict:
    return {
        "name": ds.name,
        "split": ds.split.value,
        "examples": [
            {
                "id": example.id,
                "dialogue": [
                    {"speaker": t.speaker, "text": t.text} for t in example.dialogue
                ],
                "hypothesis": example.hypothesis,
                "label": example.label,
            }
            for example in ds.examples
        ],
    }


def load_dataset(path: str | Path) -> Dataset:
    path = Path(path)
    raw = path.read_bytes()
    if raw.startswith(b"\xef\xbb\xbf"):
        raise DataError(f"{path}: UTF-8 byte order mark is not allowed")
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise DataError(f"{path}: not valid UTF-8 JSON ({e})") from e
    ds = dataset_from_dict(data, source=str(path))
    _logger.debug("loaded %d examples from %s", len(ds), path)
    return ds


def dumps_dataset(ds: Dataset) -> str:
    return json.dumps(dataset_to_dict(ds), ensure_ascii=False, indent=2) + "\n"


def save_dataset(ds: Dataset, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_dataset(ds), encoding="utf-8")
    return path


def write_splits(
    directory: str | Path, splits: dict[str, Dataset], name: str, seed: int | None = None
) -> Path:
    """Writes `<split>.json` for every split plus a manifest of their sizes."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for split_name, ds in splits.items():
        save_dataset(ds, directory / f"{split_name}.json")
    manifest = {
        "name": name,
        "seed": seed,
        "splits": {split_name: len(ds) for split_name, ds in splits.items()},
    }
    manifest_path = directory / MANIFEST_NAME
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return manifest_path


def load_splits(directory: str | Path) -> dict[str, Dataset]:
    """Loads every split named in the manifest and checks the recorded sizes."""
    directory = Path(directory)
    try:
        manifest = json.loads((directory / MANIFEST_NAME).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DataError(f"{directory / MANIFEST_NAME}: not valid JSON ({e})") from e
    splits = {}
    for split_name, expected in _field(manifest, "splits", dict, "$").items():
        ds = load_dataset(directory / f"{split_name}.json")
        if len(ds) != expected:
            raise DataError(
                f"manifest records {expected} {split_name} examples, "
                f"{directory / (split_name + '.json')} holds {len(ds)}"
            )
        splits[split_name] = ds
    return splits
