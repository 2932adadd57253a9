from convattack.defenses.config import TrainConfig, TrainReport
from convattack.defenses.regimes import (
    finetune_on_attacked,
    train_augmented_only,
    train_centroid,
    train_standard,
    train_with_ep_loss,
)
from convattack.defenses.training import accuracy, train
