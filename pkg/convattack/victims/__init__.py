from convattack.victims.features import featurize, featurize_dataset, featurize_texts
from convattack.victims.gradcheck import check_gradients
from convattack.victims.losses import (
    LossMode,
    NoiseSite,
    NoiseSpec,
    batch_grad,
    ce_loss,
    ep_loss,
    grad,
    noise_loss,
)
from convattack.victims.mlp import MlpVictim, forward, softmax
