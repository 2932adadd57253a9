"""Named attack presets, training recipes and the parameter sweeps of the grid search."""
from convattack.attacks.results import AttackConfig
from convattack.defenses.config import TrainConfig
from convattack.harness.grid import GridSpec
from convattack.utils import consts
from convattack.utils.errors import ConfigError

# the augmentation attack: most of the budget, loose similarity
strong_attack = AttackConfig(pct_words_to_swap=0.9, min_cos_sim=0.3, max_candidates=100)
# near-synonyms only; this setting can leave an overfit victim more accurate
mild_attack = AttackConfig(pct_words_to_swap=0.5, min_cos_sim=0.95, max_candidates=100)

max_candidates_sweep = GridSpec(
    pct_words_to_swap=0.5, min_cos_sim=0.95, max_candidates=(10, 25, 50, 100, 200, 300)
)
min_cos_sim_sweep = GridSpec(
    pct_words_to_swap=0.5, min_cos_sim=(0.6, 0.7, 0.8, 0.9), max_candidates=100
)
pct_words_to_swap_sweep = GridSpec(
    pct_words_to_swap=(0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9),
    min_cos_sim=0.95,
    max_candidates=100,
)
min_cos_sim_sweep_full_budget = GridSpec(
    pct_words_to_swap=0.9,
    min_cos_sim=(0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9),
    max_candidates=100,
)

roberta_recipe = TrainConfig(
    batch_size=consts.ROBERTA_BATCH_SIZE,
    learning_rate=consts.ROBERTA_LEARNING_RATE,
    epochs=consts.ROBERTA_EPOCHS,
)
roberta_finetune_recipe = TrainConfig(
    batch_size=consts.ROBERTA_FINETUNE_BATCH_SIZE,
    learning_rate=consts.ROBERTA_LEARNING_RATE,
    epochs=consts.ROBERTA_FINETUNE_EPOCHS,
)

ATTACKS = {"strong": strong_attack, "mild": mild_attack}
RECIPES = {"roberta": roberta_recipe, "roberta-finetune": roberta_finetune_recipe}
SWEEPS = {
    "max-candidates": max_candidates_sweep,
    "min-cos-sim": min_cos_sim_sweep,
    "pct-words-to-swap": pct_words_to_swap_sweep,
    "min-cos-sim-full-budget": min_cos_sim_sweep_full_budget,
}


def lookup(kind: str, name: str):
    presets = {"attack": ATTACKS, "sweep": SWEEPS, "train": RECIPES}[kind]
    try:
        return presets[name]
    except KeyError:
        raise ConfigError(
            f"unknown {kind} preset {name!r}; choose from {', '.join(presets)}"
        ) from None
