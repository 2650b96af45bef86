"""
Run every shipped sweep preset and render both metrics for each.

    python scripts/reproduce_figures.py --out-dir figures --workers 8
    python scripts/reproduce_figures.py --trials 100   # quicker, noisier curves

For each configs/<name>.conf this writes <name>.csv, <name>_recovery_prob.svg
and <name>_avg_mse.svg, plus channel.svg with one example realization.
"""
import argparse
import logging
import os
import sys
import time

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np  # noqa: E402

from config import Config  # noqa: E402
from modules.channel import TapDistribution, generate_sparse_channel  # noqa: E402
from modules.evaluation import run_sweep  # noqa: E402
from modules.experiment_config import load_experiment_config  # noqa: E402
from modules.plotting import METRICS, plot_channel, plot_results  # noqa: E402
from modules.results_io import rows_from_sweep, write_results_csv  # noqa: E402
from utils.logger import configure_logging  # noqa: E402

CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "configs")
PRESETS = ["uniform_taps", "gaussian_taps", "sparsity"]


def reproduce(out_dir: str, trials=None, workers: int = 1, seed=None) -> None:
    os.makedirs(out_dir, exist_ok=True)

    example = generate_sparse_channel(100, 5, TapDistribution.EQUAL_MAGNITUDE_UNIFORM,
                                      np.random.default_rng(Config.SWEEP_DEFAULT_SEED))
    plot_channel(example, os.path.join(out_dir, "channel.svg"))

    for name in PRESETS:
        start = time.time()
        config = load_experiment_config(os.path.join(CONFIG_DIR, f"{name}.conf"))
        config = config.with_overrides(trials=trials, master_seed=seed)

        result = run_sweep(config, workers=workers)
        write_results_csv(result, os.path.join(out_dir, f"{name}.csv"))
        rows = rows_from_sweep(result)
        for metric in METRICS:
            plot_results(rows, os.path.join(out_dir, f"{name}_{metric}.svg"), metric)
        logging.info(f"Preset {name} finished in {time.time() - start:.1f}s")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Reproduce the sweep figures.")
    parser.add_argument("--out-dir", default="figures")
    parser.add_argument("--trials", type=int, help="override trials per cell")
    parser.add_argument("--workers", type=int, default=Config.SWEEP_WORKERS)
    parser.add_argument("--seed", type=int, help="override master_seed")
    args = parser.parse_args()

    configure_logging(Config.SWEEP_LOG_LEVEL, Config.SWEEP_LOG_DIR, filename="reproduce.log")
    reproduce(args.out_dir, trials=args.trials, workers=args.workers, seed=args.seed)
