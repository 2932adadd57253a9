"""Cross-entropy, noise and embedding-perturbation losses with analytic gradients.

    L_CE = CE(f(x; theta), y)
    L_N  = CE(f(x + delta; theta), y)      site = representation (default)
         = CE(f(x; theta) + delta, y)      site = logits
    L_EP = (1 - alpha) * L_CE + alpha * L_N

delta ~ N(mean, std_dev^2) elementwise and is a constant for differentiation.
"""
from __future__ import annotations

from enum import Enum

import attr
import numpy as np

from convattack.abstractions.types import Matrix, Vector
from convattack.utils.consts import DEFAULT_ALPHA
from convattack.utils.errors import ConfigError, config_errors
from convattack.victims.features import Representation
from convattack.victims.mlp import PARAM_NAMES, MlpVictim, forward

Gradients = dict[str, np.ndarray]


class NoiseSite(str, Enum):
    representation = "representation"
    logits = "logits"


@attr.s(frozen=True, slots=True)
class NoiseSpec:
    site: NoiseSite = attr.ib(default=NoiseSite.representation, converter=NoiseSite)
    mean: float = attr.ib(default=0.0, converter=float)
    std_dev: float = attr.ib(default=1.0, converter=float)
    seed: int = attr.ib(default=0)

    @std_dev.validator
    def _check_std(self, attribute, value):
        if value < 0:
            raise ConfigError(f"noise std_dev must be non-negative, got {value}")

    def dim(self, model: MlpVictim) -> int:
        return 2 if self.site is NoiseSite.logits else model.input_dim

    def draw(self, shape, rng: np.random.Generator | None = None) -> np.ndarray:
        """Samples delta; without an rng the draw is fixed by `seed`."""
        rng = rng if rng is not None else np.random.default_rng(self.seed)
        return self.mean + self.std_dev * rng.standard_normal(shape)

    def to_dict(self) -> dict:
        return {
            "site": self.site.value,
            "mean": self.mean,
            "std_dev": self.std_dev,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> NoiseSpec:
        with config_errors("noise spec"):
            return cls(**data)


def check_alpha(alpha: float) -> float:
    try:
        alpha = float(alpha)
    except (TypeError, ValueError):
        raise ConfigError(f"alpha must be a number, got {alpha!r}") from None
    if not 0.0 <= alpha <= 1.0:
        raise ConfigError(f"alpha must be in [0, 1], got {alpha}")
    return alpha


@attr.s(frozen=True, slots=True)
class LossMode:
    kind: str = attr.ib(default="ce", validator=attr.validators.in_(("ce", "ep")))
    alpha: float = attr.ib(default=DEFAULT_ALPHA, converter=check_alpha)
    noise: NoiseSpec = attr.ib(factory=NoiseSpec)

    @classmethod
    def ce(cls) -> LossMode:
        return cls("ce")

    @classmethod
    def ep(cls, alpha: float = DEFAULT_ALPHA, noise: NoiseSpec | None = None) -> LossMode:
        return cls("ep", alpha, noise or NoiseSpec())

    @property
    def is_ep(self) -> bool:
        return self.kind == "ep"

    def to_dict(self) -> dict:
        if not self.is_ep:
            return {"kind": "ce"}
        return {"kind": "ep", "alpha": self.alpha, "noise": self.noise.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> LossMode:
        with config_errors("loss mode"):
            data = dict(data)
            if "noise" in data:
                data["noise"] = NoiseSpec.from_dict(data["noise"])
            return cls(**data)


def ce_loss(logits, y: bool) -> float:
    """-log softmax(logits)[y], computed without overflow."""
    logits = np.asarray(logits, dtype=np.float64)
    return float(np.logaddexp(logits[0], logits[1]) - logits[int(y)])


def combine_ep(ce: float, noisy: float, alpha: float) -> float:
    alpha = check_alpha(alpha)
    return (1.0 - alpha) * ce + alpha * noisy


def noise_loss(
    model: MlpVictim,
    x: Representation,
    y: bool,
    noise: NoiseSpec,
    delta: Vector | None = None,
) -> float:
    if delta is None:
        delta = noise.draw(noise.dim(model))
    if noise.site is NoiseSite.logits:
        return ce_loss(forward(model, x) + delta, y)
    return ce_loss(forward(model, np.asarray(x) + delta), y)


def ep_loss(
    model: MlpVictim,
    x: Representation,
    y: bool,
    alpha: float,
    noise: NoiseSpec,
    delta: Vector | None = None,
) -> float:
    alpha = check_alpha(alpha)
    if delta is None:
        delta = noise.draw(noise.dim(model))
    clean = ce_loss(forward(model, x), y)
    return combine_ep(clean, noise_loss(model, x, y, noise, delta), alpha)


def _backprop(
    params: dict[str, np.ndarray],
    X: Matrix,
    Y: np.ndarray,
    logit_shift: Matrix | None = None,
) -> tuple[float, Gradients]:
    n = X.shape[0]
    rows = np.arange(n)
    A = np.tanh(X @ params["W1"].T + params["b1"])
    L = A @ params["W2"].T + params["b2"]
    if logit_shift is not None:
        L = L + logit_shift
    lse = np.logaddexp(L[:, 0], L[:, 1])
    loss = float(np.mean(lse - L[rows, Y]))
    dL = np.exp(L - lse[:, None])
    dL[rows, Y] -= 1.0
    dL /= n
    dA = dL @ params["W2"]
    dZ1 = dA * (1.0 - A**2)
    grads = {
        "W1": dZ1.T @ X,
        "b1": dZ1.sum(axis=0),
        "W2": dL.T @ A,
        "b2": dL.sum(axis=0),
    }
    return loss, grads


def batch_grad(
    model: MlpVictim,
    X: Matrix,
    Y,
    loss_mode: LossMode,
    deltas: Matrix | None = None,
) -> tuple[float, Gradients]:
    """Mean loss and mean gradient over the rows of X.

    In EP mode `deltas` holds one noise row per example; when omitted it is drawn
    from the noise seed.
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    Y = np.asarray(Y, dtype=np.int64).reshape(-1)
    ce, g_ce = _backprop(model.params, X, Y)
    if not loss_mode.is_ep:
        return ce, g_ce
    noise = loss_mode.noise
    if deltas is None:
        deltas = noise.draw((X.shape[0], noise.dim(model)))
    deltas = np.atleast_2d(deltas)
    if noise.site is NoiseSite.logits:
        noisy, g_n = _backprop(model.params, X, Y, logit_shift=deltas)
    else:
        noisy, g_n = _backprop(model.params, X + deltas, Y)
    alpha = loss_mode.alpha
    grads = {k: (1.0 - alpha) * g_ce[k] + alpha * g_n[k] for k in PARAM_NAMES}
    return combine_ep(ce, noisy, alpha), grads


def grad(
    model: MlpVictim,
    x: Representation,
    y: bool,
    loss_mode: LossMode,
    delta: Vector | None = None,
) -> Gradients:
    deltas = None if delta is None else np.asarray(delta)[None, :]
    return batch_grad(model, np.asarray(x)[None, :], [int(y)], loss_mode, deltas)[1]
