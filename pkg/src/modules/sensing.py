"""
Training sequences, partial Toeplitz sensing, and the parallel low-speed ADC model.

A full-rate receiver observes r = X h + z with X an M x N partial Toeplitz
matrix. P parallel low-speed ADCs each integrate one of P sub-periods, so row m
of X is split into P column blocks of length N/P and the receiver sees the
block partial inner products y[m, p] plus noise. Summing a row of the grid
gives back r[m]; summing sub-samples taken from different rows on a cyclic
diagonal gives an extra "virtual" measurement whose sensing row is stitched
together block by block from those rows.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np
import scipy.linalg

from modules.channel import SparseChannel, complex_gaussian
from modules.errors import BlockPartitionError, DimensionError, PatternCapacityError


class NoiseMode(str, Enum):
    SUBSAMPLE = "Subsample"
    INDEPENDENT = "Independent"


@dataclass(frozen=True)
class TrainingSequence:
    symbols: np.ndarray
    n: int
    m_max: int


@dataclass(frozen=True)
class SensingMatrix:
    """Dense M x N partial Toeplitz matrix over a training sequence.

    Entry (i, j), 0-based, is symbols[n - 1 + i - j]; row 0 is
    [x_{n-1}, ..., x_1, x_0].
    """
    training: TrainingSequence
    m: int
    n: int
    matrix: np.ndarray

    def entry(self, i: int, j: int) -> complex:
        return self.matrix[i, j]


@dataclass(frozen=True)
class SubsampleGrid:
    values: np.ndarray
    p: int
    block_len: int
    noise_variance_per_cell: float

    @property
    def m(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class ExtractionPattern:
    """Source rows for every virtual measurement: rows[e - 1, p - 1] = rho(e, p), 1-based."""
    rows: np.ndarray
    m: int
    p: int

    @property
    def m_e(self) -> int:
        return self.rows.shape[0]


@dataclass(frozen=True)
class AssembledSystem:
    phi: np.ndarray
    Phi: np.ndarray
    noise_variance: float
    noise_mode: NoiseMode

    @property
    def num_measurements(self) -> int:
        return len(self.phi)

    @property
    def n(self) -> int:
        return self.Phi.shape[1]


MatrixLike = Union[SensingMatrix, np.ndarray]


def _as_array(X: MatrixLike) -> np.ndarray:
    return X.matrix if isinstance(X, SensingMatrix) else np.asarray(X)


def generate_training(n: int, m_max: int, rng: np.random.Generator) -> TrainingSequence:
    if n < 1 or m_max < 1:
        raise DimensionError(f"training needs n >= 1 and m_max >= 1, got n={n}, m_max={m_max}")
    symbols = complex_gaussian(rng, n + m_max - 1, 1.0)
    return TrainingSequence(symbols=symbols, n=n, m_max=m_max)


def build_sensing_matrix(training: TrainingSequence, m: int, n: int) -> SensingMatrix:
    if m < 1 or n < 1:
        raise DimensionError(f"sensing matrix needs positive sizes, got {m}x{n}")
    if n + m - 1 > len(training.symbols):
        raise DimensionError(
            f"training of length {len(training.symbols)} cannot serve a {m}x{n} matrix"
        )
    x = training.symbols
    first_column = x[n - 1:n - 1 + m]
    first_row = x[n - 1::-1]
    matrix = scipy.linalg.toeplitz(first_column, first_row)
    return SensingMatrix(training=training, m=m, n=n, matrix=matrix)


def _block_products(X: np.ndarray, h: np.ndarray, p: int) -> np.ndarray:
    """M x P matrix of partial inner products of each row with h, one column per block."""
    block_len = X.shape[1] // p
    columns = [X[:, b * block_len:(b + 1) * block_len] @ h[b * block_len:(b + 1) * block_len]
               for b in range(p)]
    return np.stack(columns, axis=1)


def _check_channel(X: np.ndarray, h: SparseChannel) -> None:
    if X.shape[1] != h.n:
        raise DimensionError(f"sensing matrix has {X.shape[1]} columns but channel has {h.n} taps")


def measure_full_rate(X: MatrixLike, h: SparseChannel, sigma2: float,
                      rng: np.random.Generator) -> np.ndarray:
    A = _as_array(X)
    _check_channel(A, h)
    # same kernel as the sub-sampled path with one block, so P = 1 is bit-identical
    signal = _block_products(A, h.taps, 1)[:, 0]
    return signal + complex_gaussian(rng, A.shape[0], sigma2)


def measure_subsampled(X: MatrixLike, h: SparseChannel, p: int, sigma2: float,
                       rng: np.random.Generator) -> SubsampleGrid:
    A = _as_array(X)
    _check_channel(A, h)
    n = A.shape[1]
    if p < 1 or n % p != 0:
        raise BlockPartitionError(f"{p} ADC branches do not divide channel length {n}")

    cell_variance = sigma2 / p
    values = _block_products(A, h.taps, p) + complex_gaussian(rng, (A.shape[0], p), cell_variance)
    return SubsampleGrid(values=values, p=p, block_len=n // p,
                         noise_variance_per_cell=cell_variance)


def recombine(Y: SubsampleGrid) -> np.ndarray:
    return Y.values.sum(axis=1)


def pattern_capacity(m: int, p: int) -> int:
    """Distinct non-constant patterns the stride rule can produce."""
    if p < 2 or m < 2:
        return 0
    return m * (m - 1)


def extraction_pattern(m: int, p: int, m_e: int) -> ExtractionPattern:
    if m_e < 0:
        raise PatternCapacityError(f"virtual count must be non-negative, got {m_e}")
    if m_e == 0:
        return ExtractionPattern(rows=np.zeros((0, p), dtype=int), m=m, p=p)

    e = np.arange(1, m_e + 1)[:, None]
    stride = -(-e // m)
    offset = (e - 1) % m
    branch = np.arange(p)[None, :]
    rows = (offset + branch * stride) % m + 1

    # stride s and s + m describe the same diagonal, and s = m is constant
    distinct = len(np.unique(rows, axis=0)) == m_e
    non_constant = bool(np.all(rows.max(axis=1) != rows.min(axis=1)))
    if not (distinct and non_constant):
        raise PatternCapacityError(
            f"only {pattern_capacity(m, p)} distinct non-constant patterns exist for "
            f"M={m}, P={p}; requested {m_e}"
        )
    return ExtractionPattern(rows=rows, m=m, p=p)


def extract_virtual(Y: SubsampleGrid, X: MatrixLike, pattern: ExtractionPattern):
    """Return (r_e, X_e) for the given pattern."""
    A = _as_array(X)
    m, n = A.shape
    if Y.values.shape != (m, Y.p) or pattern.p != Y.p or pattern.m != m or n != Y.p * Y.block_len:
        raise DimensionError("extraction pattern, sub-sample grid and sensing matrix disagree")
    if pattern.m_e == 0:
        return np.zeros(0, dtype=complex), np.zeros((0, n), dtype=A.dtype)

    source = pattern.rows - 1
    r_e = Y.values[source, np.arange(Y.p)[None, :]].sum(axis=1)

    column_block = np.arange(n) // Y.block_len
    X_e = A[source[:, column_block], np.arange(n)[None, :]]
    return r_e, X_e


def assemble_system(r: np.ndarray, r_e: np.ndarray, X: MatrixLike, X_e: np.ndarray,
                    sigma2: float, noise_mode: NoiseMode) -> AssembledSystem:
    A = _as_array(X)
    X_e = np.asarray(X_e)
    if X_e.size == 0:
        X_e = np.zeros((0, A.shape[1]), dtype=A.dtype)
    if len(r) != A.shape[0] or len(r_e) != X_e.shape[0] or X_e.shape[1] != A.shape[1]:
        raise DimensionError(
            f"cannot stack r({len(r)}), X{A.shape}, r_e({len(r_e)}), X_e{X_e.shape}"
        )
    phi = np.concatenate([np.asarray(r, dtype=complex), np.asarray(r_e, dtype=complex)])
    Phi = np.vstack([A, X_e])
    return AssembledSystem(phi=phi, Phi=Phi, noise_variance=sigma2,
                           noise_mode=NoiseMode(noise_mode))


def acquire_full_rate_system(X: SensingMatrix, h: SparseChannel, sigma2: float,
                             rng: np.random.Generator) -> AssembledSystem:
    r = measure_full_rate(X, h, sigma2, rng)
    return assemble_system(r, np.zeros(0, dtype=complex), X, np.zeros((0, X.n)),
                           sigma2, NoiseMode.INDEPENDENT)


def acquire_subsampled_system(X: SensingMatrix, h: SparseChannel, p: int, m_e: int,
                              sigma2: float, noise_mode: NoiseMode,
                              rng: np.random.Generator,
                              pattern: Optional[ExtractionPattern] = None) -> AssembledSystem:
    noise_mode = NoiseMode(noise_mode)
    if pattern is None:
        pattern = extraction_pattern(X.m, p, m_e)

    grid_variance = sigma2 if noise_mode is NoiseMode.SUBSAMPLE else 0.0
    Y = measure_subsampled(X, h, p, grid_variance, rng)
    if noise_mode is NoiseMode.INDEPENDENT:
        # noiseless rows through the full-rate kernel, bit-identical to measure_full_rate
        r = measure_full_rate(X, h, 0.0, rng)
    else:
        r = recombine(Y)
    r_e, X_e = extract_virtual(Y, X, pattern)
    system = assemble_system(r, r_e, X, X_e, sigma2, noise_mode)

    if noise_mode is NoiseMode.INDEPENDENT:
        noisy = system.phi + complex_gaussian(rng, system.num_measurements, sigma2)
        system = AssembledSystem(phi=noisy, Phi=system.Phi, noise_variance=sigma2,
                                 noise_mode=noise_mode)
    return system
