CHECKPOINT_MAGIC = "PBVICTIM1"
CHECKPOINT_ACTIVATION = "tanh"

DEFAULT_HIDDEN_DIM = 64
INIT_SCALE = 0.1
DEFAULT_EMBEDDING_DIM = 50

# Recipe used for RoBERTa-large (batch 32, lr 7.5e-6, 10 epochs; fine-tuning on
# attacked data used batch 16 and 3 epochs). Available as the "roberta" train
# presets; the MLP victim trains with the defaults below.
ROBERTA_BATCH_SIZE = 32
ROBERTA_LEARNING_RATE = 7.5e-6
ROBERTA_EPOCHS = 10
ROBERTA_FINETUNE_BATCH_SIZE = 16
ROBERTA_FINETUNE_EPOCHS = 3

DEFAULT_BATCH_SIZE = 16
DEFAULT_LEARNING_RATE = 0.05
DEFAULT_EPOCHS = 40
DEFAULT_FINETUNE_EPOCHS = 3
DEFAULT_ALPHA = 0.5

DEFAULT_SPLIT_FRACTIONS = (0.7, 0.1, 0.2)

CSV_COLUMNS = (
    "pct_words_to_swap",
    "min_cos_sim",
    "max_candidates",
    "seed",
    "clean_acc",
    "attacked_acc",
    "success_rate",
    "mean_queries",
)
