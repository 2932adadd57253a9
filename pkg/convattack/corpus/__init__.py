from convattack.corpus.io import (
    dataset_from_dict,
    dataset_to_dict,
    load_dataset,
    load_splits,
    save_dataset,
    write_splits,
)
from convattack.corpus.split import split_dataset
from convattack.corpus.synthetic import generate_synthetic
