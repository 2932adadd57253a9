from convattack.harness.benchmark import BenchmarkRow, BenchmarkSpec, run_benchmark
from convattack.harness.grid import (
    GridRow,
    GridSpec,
    aggregate_grid,
    mean_over_seeds,
    run_grid,
)
from convattack.harness.metrics import ConfusionMatrix, attack_success_rate, evaluate
