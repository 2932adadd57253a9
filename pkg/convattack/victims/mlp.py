from __future__ import annotations

import json
import logging
from pathlib import Path

import attr
import numpy as np

from convattack.abstractions.types import Probabilities, Vector
from convattack.embedding.table import EmbeddingTable
from convattack.utils import consts
from convattack.utils.errors import DataError
from convattack.victims.features import Representation, featurize_texts

_logger = logging.getLogger(__name__)

PARAM_NAMES = ("W1", "b1", "W2", "b2")


def _shapes(input_dim: int, hidden_dim: int) -> dict[str, tuple[int, ...]]:
    return {
        "W1": (hidden_dim, input_dim),
        "b1": (hidden_dim,),
        "W2": (2, hidden_dim),
        "b2": (2,),
    }


@attr.s(eq=False)
class MlpVictim:
    """One-hidden-layer tanh classifier over pooled features.

    `table` is what turns raw text into features; it is needed for predict_proba but
    not for the numerical operations, and it is not part of the checkpoint.
    """

    params: dict[str, np.ndarray] = attr.ib()
    table: EmbeddingTable | None = attr.ib(default=None)

    def __attrs_post_init__(self):
        missing = [name for name in PARAM_NAMES if name not in self.params]
        if missing:
            raise DataError(f"missing parameters {missing}")
        self.params = {
            name: np.array(self.params[name], dtype=np.float64) for name in PARAM_NAMES
        }
        W1 = self.params["W1"]
        if W1.ndim != 2:
            raise DataError(f"W1 must be a matrix, got shape {W1.shape}")
        expected = _shapes(W1.shape[1], W1.shape[0])
        for name, shape in expected.items():
            if self.params[name].shape != shape:
                actual = self.params[name].shape
                raise DataError(f"{name} has shape {actual}, expected {shape}")
            if not np.all(np.isfinite(self.params[name])):
                raise DataError(f"{name} holds non-finite values")
        if self.table is not None and 4 * self.table.dim != self.input_dim:
            raise DataError(
                f"model expects {self.input_dim} features, table gives {4 * self.table.dim}"
            )

    @property
    def hidden_dim(self) -> int:
        return int(self.params["W1"].shape[0])

    @property
    def input_dim(self) -> int:
        return int(self.params["W1"].shape[1])

    @classmethod
    def zeros(cls, input_dim: int, hidden_dim: int = consts.DEFAULT_HIDDEN_DIM, table=None):
        shapes = _shapes(input_dim, hidden_dim)
        return cls({name: np.zeros(shape) for name, shape in shapes.items()}, table)

    @classmethod
    def initialize(
        cls,
        table: EmbeddingTable,
        hidden_dim: int = consts.DEFAULT_HIDDEN_DIM,
        seed: int = 0,
    ) -> MlpVictim:
        rng = np.random.default_rng(seed)
        params = {
            name: rng.uniform(-consts.INIT_SCALE, consts.INIT_SCALE, size=shape)
            for name, shape in _shapes(4 * table.dim, hidden_dim).items()
        }
        return cls(params, table)

    def copy(self) -> MlpVictim:
        return MlpVictim({k: v.copy() for k, v in self.params.items()}, self.table)

    def bind(self, table: EmbeddingTable) -> MlpVictim:
        return MlpVictim(self.params, table)

    def flat(self) -> Vector:
        return np.concatenate([self.params[name].ravel() for name in PARAM_NAMES])

    def predict_proba(self, dialogue: str, hypothesis: str) -> Probabilities:
        if self.table is None:
            raise DataError("this model has no embedding table bound; call bind(table)")
        p = softmax(forward(self, featurize_texts(self.table, dialogue, hypothesis)))
        return float(p[0]), float(p[1])

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = {
            "magic": consts.CHECKPOINT_MAGIC,
            "activation": consts.CHECKPOINT_ACTIVATION,
            "input_dim": self.input_dim,
            "hidden_dim": self.hidden_dim,
            "table_fingerprint": None if self.table is None else self.table.fingerprint(),
            "params": {
                name: {
                    "shape": list(self.params[name].shape),
                    "data": [float(v) for v in self.params[name].ravel(order="C")],
                }
                for name in PARAM_NAMES
            },
        }
        path.write_text(json.dumps(payload) + "\n", encoding="utf-8")
        return path

    @classmethod
    def load(cls, path: str | Path, table: EmbeddingTable | None = None) -> MlpVictim:
        path = Path(path)
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            raise DataError(f"{path}: not a checkpoint ({e})") from e
        if not isinstance(payload, dict) or payload.get("magic") != consts.CHECKPOINT_MAGIC:
            raise DataError(f"{path}: missing {consts.CHECKPOINT_MAGIC} header")
        if payload.get("activation") != consts.CHECKPOINT_ACTIVATION:
            raise DataError(f"{path}: unsupported activation {payload.get('activation')!r}")
        try:
            params = {
                name: np.array(entry["data"], dtype=np.float64).reshape(entry["shape"])
                for name, entry in payload["params"].items()
            }
        except (KeyError, TypeError, ValueError) as e:
            raise DataError(f"{path}: malformed parameter block ({e})") from e
        model = cls(params)
        recorded_dims = (payload.get("input_dim"), payload.get("hidden_dim"))
        if (model.input_dim, model.hidden_dim) != recorded_dims:
            raise DataError(f"{path}: recorded dims disagree with parameter shapes")
        if table is not None:
            recorded = payload.get("table_fingerprint")
            if recorded is not None and recorded != table.fingerprint():
                _logger.warning("%s was trained against a different embedding table", path)
            model = model.bind(table)
        return model


def softmax(logits) -> Vector:
    logits = np.asarray(logits, dtype=np.float64)
    shifted = np.exp(logits - logits.max(axis=-1, keepdims=True))
    return shifted / shifted.sum(axis=-1, keepdims=True)


def forward(model: MlpVictim, x: Representation) -> Vector:
    """logits = W2 tanh(W1 x + b1) + b2"""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.input_dim,):
        raise DataError(
            f"expected a feature vector of length {model.input_dim}, got {x.shape}"
        )
    p = model.params
    return p["W2"] @ np.tanh(p["W1"] @ x + p["b1"]) + p["b2"]
