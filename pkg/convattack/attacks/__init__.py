from convattack.attacks.constraints import (
    default_stopwords,
    is_numeric,
    load_stopwords,
    modifiable_positions,
)
from convattack.attacks.greedy import (
    Position,
    attack_dataset,
    attack_example,
    word_importance,
)
from convattack.attacks.results import (
    AttackConfig,
    AttackResult,
    Swap,
    Target,
    load_results,
    save_results,
)
from convattack.attacks.tokenizer import Token, detokenize, tokenize
