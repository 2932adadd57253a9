from convattack.abstractions.example import Dataset, DialogueTurn, EntailmentExample, Split
from convattack.abstractions.victim import VictimInterface, predict_batch, predicted_label
