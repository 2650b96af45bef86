"""
Metrics, the three-arm trial pipeline and the Monte-Carlo sweep.

Every trial is reproducible from (master_seed, trial_index) alone. Each random
concern gets its own stream

    numpy.random.SeedSequence(entropy=master_seed, spawn_key=(trial_index, stream_id))

with stream ids CHANNEL_STREAM, TRAINING_STREAM and one per arm. The same
trial index therefore sees the same channel, training sequence and arm noise
in every grid cell, which makes arm and M_e comparisons paired.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, List, Mapping, NamedTuple, Sequence, Tuple

import numpy as np

from modules.channel import SparseChannel, TapDistribution, generate_sparse_channel
from modules.errors import UndefinedStatisticError
from modules.experiment_config import Arm, ExperimentConfig
from modules.recovery import ChannelEstimate, RecoveryConfig, cosamp, largest_indices
from modules.sensing import (
    NoiseMode,
    acquire_full_rate_system,
    acquire_subsampled_system,
    build_sensing_matrix,
    extraction_pattern,
    generate_training,
)

logger = logging.getLogger(__name__)

CHANNEL_STREAM = 0
TRAINING_STREAM = 1
ARM_STREAMS = {Arm.TRADITIONAL_SHORT: 2, Arm.PROPOSED: 3, Arm.BOUND_LONG: 4}
ARM_ORDER = (Arm.TRADITIONAL_SHORT, Arm.PROPOSED, Arm.BOUND_LONG)


@dataclass(frozen=True)
class TrialOutcome:
    arm: Arm
    success: bool
    squared_error: float
    trial_index: int


@dataclass(frozen=True)
class AggregateStats:
    recovery_probability: float
    average_mse: float
    recovery_stderr: float
    mse_stderr: float
    trials: int


class CellKey(NamedTuple):
    arm: Arm
    dist: TapDistribution
    k: int
    m_e: int
    snr_db: float


@dataclass(frozen=True)
class TrialSlice:
    """One grid cell's fixed parameters, everything a trial needs."""
    n: int
    m: int
    p: int
    k: int
    m_e: int
    snr_db: float
    dist: TapDistribution
    noise_mode: NoiseMode
    arms: Tuple[Arm, ...]
    training_rows: int

    @property
    def noise_variance(self) -> float:
        return snr_to_noise_variance(self.snr_db)


@dataclass(frozen=True)
class SweepResult:
    config: ExperimentConfig
    cells: Mapping[CellKey, AggregateStats]


def snr_to_noise_variance(snr_db: float) -> float:
    """sigma_n^2 = 10^(-SNR/10) for unit received power; infinite SNR is noiseless."""
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    return 10.0 ** (-snr_db / 10.0)


def trial_stream(master_seed: int, trial_index: int, stream_id: int) -> np.random.Generator:
    seed = np.random.SeedSequence(entropy=master_seed, spawn_key=(trial_index, stream_id))
    return np.random.default_rng(seed)


def squared_error(h: SparseChannel, estimate: ChannelEstimate) -> float:
    diff = h.taps - estimate.coeffs
    return float(np.vdot(diff, diff).real)


def average_mse(h: SparseChannel, estimates: Sequence[ChannelEstimate], l: int) -> float:
    if not estimates:
        raise UndefinedStatisticError("average MSE of an empty estimate list is undefined")
    if l < 1:
        raise UndefinedStatisticError(f"MSE divisor must be at least 1, got {l}")
    return math.fsum(squared_error(h, est) for est in estimates) / len(estimates) / l


def support_success(h: SparseChannel, estimate: ChannelEstimate) -> bool:
    """Exact recovery of the dominant-tap positions."""
    magnitudes = np.abs(estimate.coeffs)
    chosen = largest_indices(magnitudes, h.k)
    if np.any(magnitudes[chosen] == 0):
        return False
    return set(chosen.tolist()) == set(h.support.tolist())


def run_trial(slice_: TrialSlice, trial_index: int, master_seed: int) -> List[TrialOutcome]:
    sigma2 = slice_.noise_variance
    h = generate_sparse_channel(slice_.n, slice_.k, slice_.dist,
                                trial_stream(master_seed, trial_index, CHANNEL_STREAM))
    training = generate_training(slice_.n, slice_.training_rows,
                                 trial_stream(master_seed, trial_index, TRAINING_STREAM))
    recovery_config = RecoveryConfig.create(k=slice_.k)

    outcomes = []
    for arm in ARM_ORDER:
        if arm not in slice_.arms:
            continue
        rng = trial_stream(master_seed, trial_index, ARM_STREAMS[arm])
        if arm is Arm.TRADITIONAL_SHORT:
            X = build_sensing_matrix(training, slice_.m, slice_.n)
            system = acquire_full_rate_system(X, h, sigma2, rng)
        elif arm is Arm.BOUND_LONG:
            X = build_sensing_matrix(training, slice_.m + slice_.m_e, slice_.n)
            system = acquire_full_rate_system(X, h, sigma2, rng)
        else:
            X = build_sensing_matrix(training, slice_.m, slice_.n)
            pattern = extraction_pattern(slice_.m, slice_.p, slice_.m_e)
            system = acquire_subsampled_system(X, h, slice_.p, slice_.m_e, sigma2,
                                               slice_.noise_mode, rng, pattern=pattern)

        estimate = cosamp(system, recovery_config)
        outcomes.append(TrialOutcome(arm=arm, success=support_success(h, estimate),
                                     squared_error=squared_error(h, estimate),
                                     trial_index=trial_index))
    return outcomes


def aggregate(outcomes: Sequence[TrialOutcome], n: int) -> AggregateStats:
    """Reduce one arm's outcomes, in trial-index order, with compensated sums."""
    if not outcomes:
        raise UndefinedStatisticError("cannot aggregate zero trials")
    ordered = sorted(outcomes, key=lambda outcome: outcome.trial_index)
    trials = len(ordered)

    successes = sum(1 for outcome in ordered if outcome.success)
    probability = successes / trials
    recovery_stderr = math.sqrt(probability * (1.0 - probability) / trials)

    per_trial = [outcome.squared_error / n for outcome in ordered]
    mean = math.fsum(per_trial) / trials
    if trials > 1:
        variance = math.fsum((value - mean) ** 2 for value in per_trial) / (trials - 1)
        mse_stderr = math.sqrt(variance / trials)
    else:
        mse_stderr = 0.0

    return AggregateStats(recovery_probability=probability, average_mse=mean,
                          recovery_stderr=recovery_stderr, mse_stderr=mse_stderr,
                          trials=trials)


def grid_slices(config: ExperimentConfig) -> List[TrialSlice]:
    arms = tuple(arm for arm in ARM_ORDER if arm in config.arms)
    return [
        TrialSlice(n=config.n, m=config.m, p=config.p, k=k, m_e=m_e, snr_db=snr_db,
                   dist=dist, noise_mode=config.noise_mode, arms=arms,
                   training_rows=config.training_rows)
        for dist in config.dist
        for k in config.k_list
        for snr_db in config.snr_db_list
        for m_e in config.me_list
    ]


def _run_trial_range(slice_: TrialSlice, start: int, stop: int,
                     master_seed: int) -> List[TrialOutcome]:
    outcomes = []
    for trial_index in range(start, stop):
        outcomes.extend(run_trial(slice_, trial_index, master_seed))
    return outcomes


def _work_units(slices: Sequence[TrialSlice], trials: int,
                workers: int) -> List[Tuple[int, int, int]]:
    """(slice position, start, stop) chunks; chunking never affects the result."""
    chunk = trials if workers <= 1 else max(1, math.ceil(trials / workers))
    return [(position, start, min(start + chunk, trials))
            for position in range(len(slices))
            for start in range(0, trials, chunk)]


def run_sweep(config: ExperimentConfig, workers: int = 1) -> SweepResult:
    slices = grid_slices(config)
    units = _work_units(slices, config.trials, workers)
    logger.info(f"Running sweep: {len(slices)} cells x {config.trials} trials "
                f"on {max(1, workers)} worker(s)")

    arguments = [(slices[position], start, stop, config.master_seed)
                 for position, start, stop in units]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            chunks = list(executor.map(_run_trial_range, *zip(*arguments)))
    else:
        chunks = [_run_trial_range(*args) for args in arguments]

    per_slice: Dict[int, List[TrialOutcome]] = {position: [] for position in range(len(slices))}
    for (position, _, _), chunk in zip(units, chunks):
        per_slice[position].extend(chunk)

    cells: Dict[CellKey, AggregateStats] = {}
    for position, slice_ in enumerate(slices):
        for arm in slice_.arms:
            stats = aggregate([o for o in per_slice[position] if o.arm is arm], config.n)
            cells[CellKey(arm, slice_.dist, slice_.k, slice_.m_e, slice_.snr_db)] = stats
        logger.info(f"Cell dist={slice_.dist.value} K={slice_.k} M_e={slice_.m_e} "
                    f"SNR={slice_.snr_db} dB done")

    return SweepResult(config=config, cells=MappingProxyType(cells))
