from __future__ import annotations

import attr
import numpy as np

from convattack.victims.losses import LossMode, batch_grad
from convattack.victims.mlp import PARAM_NAMES, MlpVictim


@attr.s(frozen=True, slots=True)
class GradCheck:
    passed: bool = attr.ib()
    max_rel_error: float = attr.ib()
    worst: tuple[str, int] = attr.ib()


def check_gradients(
    model: MlpVictim,
    x,
    y: bool,
    loss_mode: LossMode,
    delta=None,
    step: float = 1e-5,
    rtol: float = 1e-4,
    atol: float = 1e-8,
) -> GradCheck:
    """Compares analytic gradients with central finite differences, coordinate by coordinate.

    In EP mode the same delta is used for every evaluation.
    """
    X = np.asarray(x, dtype=np.float64)[None, :]
    Y = [int(y)]
    if loss_mode.is_ep and delta is None:
        delta = loss_mode.noise.draw(loss_mode.noise.dim(model))
    deltas = None if delta is None else np.asarray(delta)[None, :]
    _, analytic = batch_grad(model, X, Y, loss_mode, deltas)

    shifted = model.copy()
    worst, worst_at, passed = 0.0, (PARAM_NAMES[0], 0), True
    for name in PARAM_NAMES:
        values = shifted.params[name].reshape(-1)
        expected = analytic[name].reshape(-1)
        for i in range(values.size):
            original = values[i]
            values[i] = original + step
            plus = batch_grad(shifted, X, Y, loss_mode, deltas)[0]
            values[i] = original - step
            minus = batch_grad(shifted, X, Y, loss_mode, deltas)[0]
            values[i] = original
            numeric = (plus - minus) / (2 * step)
            diff = abs(numeric - expected[i])
            scale = max(abs(numeric), abs(expected[i]))
            passed &= diff <= rtol * scale + atol
            rel = diff / max(scale, atol / rtol)
            if rel > worst:
                worst, worst_at = rel, (name, i)
    return GradCheck(bool(passed), float(worst), worst_at)
