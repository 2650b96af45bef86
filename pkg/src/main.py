"""
Command-line front end for the sub-Nyquist sparse channel estimation simulator.

    python main.py run --config configs/uniform_taps.conf --out results.csv --workers 8
    python main.py plot --csv results.csv --out recovery.svg --metric recovery_prob
    python main.py channel --out channel.svg --n 100 --k 5 --seed 7
"""
import argparse
import logging
import os
import sys
from typing import List, Optional

from dotenv import load_dotenv

# Load environment variables before Config reads them
load_dotenv()

# Add the current directory to path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import numpy as np  # noqa: E402

from config import Config  # noqa: E402
from modules.channel import TapDistribution, generate_sparse_channel  # noqa: E402
from modules.errors import ChannelEstimationError, InvalidConfigError  # noqa: E402
from modules.evaluation import run_sweep  # noqa: E402
from modules.experiment_config import load_experiment_config  # noqa: E402
from modules.plotting import METRICS, plot_channel, plot_results  # noqa: E402
from modules.results_io import read_results_csv, write_results_csv  # noqa: E402
from utils.logger import configure_logging  # noqa: E402

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_BAD_INPUT = 2


def cmd_run(config_path: str, out_path: str, seed: Optional[int] = None,
            trials: Optional[int] = None, workers: Optional[int] = None) -> int:
    config = load_experiment_config(config_path).with_overrides(master_seed=seed, trials=trials)
    workers = workers if workers is not None else Config.SWEEP_WORKERS
    if workers < 1:
        raise InvalidConfigError("invalid config key 'workers': must be a positive integer",
                                 key="workers")

    result = run_sweep(config, workers=workers)
    cells = write_results_csv(result, out_path)
    print(f"wrote {out_path} ({cells} cells)")
    return EXIT_OK


def cmd_plot(csv_path: str, out_path: str, metric: str) -> int:
    rows = read_results_csv(csv_path)
    plot_results(rows, out_path, metric)
    print(f"wrote {out_path}")
    return EXIT_OK


def cmd_channel(out_path: str, n: int = 100, k: int = 5,
                dist: str = TapDistribution.EQUAL_MAGNITUDE_UNIFORM.value,
                seed: Optional[int] = None) -> int:
    seed = seed if seed is not None else Config.SWEEP_DEFAULT_SEED
    h = generate_sparse_channel(n, k, TapDistribution(dist), np.random.default_rng(seed))
    plot_channel(h, out_path)
    print(f"wrote {out_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="main.py",
        description="Sparse channel estimation from parallel low-speed ADC samples.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="run a Monte-Carlo sweep and write a CSV")
    run.add_argument("--config", required=True, help="key = value experiment config file")
    run.add_argument("--out", required=True, help="output CSV path")
    run.add_argument("--seed", type=int, help="override master_seed (unsigned 64-bit)")
    run.add_argument("--trials", type=int, help="override trials per cell")
    run.add_argument("--workers", type=int, help="worker processes (default SWEEP_WORKERS)")

    plot = subparsers.add_parser("plot", help="render a result CSV as SVG")
    plot.add_argument("--csv", required=True, help="result CSV written by 'run'")
    plot.add_argument("--out", required=True, help="output SVG path")
    plot.add_argument("--metric", required=True, choices=sorted(METRICS))

    channel = subparsers.add_parser("channel", help="plot one sparse channel realization")
    channel.add_argument("--out", required=True, help="output SVG path")
    channel.add_argument("--n", type=int, default=100, help="channel length")
    channel.add_argument("--k", type=int, default=5, help="number of dominant taps")
    channel.add_argument("--dist", default=TapDistribution.EQUAL_MAGNITUDE_UNIFORM.value,
                         choices=[d.value for d in TapDistribution])
    channel.add_argument("--seed", type=int, help="random seed")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(Config.SWEEP_LOG_LEVEL, Config.SWEEP_LOG_DIR)

    try:
        if args.command == "run":
            return cmd_run(args.config, args.out, seed=args.seed, trials=args.trials,
                           workers=args.workers)
        if args.command == "plot":
            return cmd_plot(args.csv, args.out, args.metric)
        return cmd_channel(args.out, n=args.n, k=args.k, dist=args.dist, seed=args.seed)
    except ChannelEstimationError as e:
        logging.debug(f"{args.command} failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except OSError as e:
        logging.debug(f"{args.command} failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
