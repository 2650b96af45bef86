"""
Random K-sparse multipath channel realizations.

Two tap laws are supported: equal-magnitude taps 1/sqrt(K) with uniform phase,
and circularly symmetric complex Gaussian taps with variance 1/K. Both give
E[||h||^2] = 1; only the equal-magnitude law gives ||h|| = 1 on every draw.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from modules.errors import InvalidSparsityError


class TapDistribution(str, Enum):
    EQUAL_MAGNITUDE_UNIFORM = "uniform"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class SparseChannel:
    """Length-N complex tap vector with a sorted K-element support."""
    taps: np.ndarray
    support: np.ndarray

    @property
    def n(self) -> int:
        return len(self.taps)

    @property
    def k(self) -> int:
        return len(self.support)

    @property
    def energy(self) -> float:
        return float(np.vdot(self.taps, self.taps).real)


def complex_gaussian(rng: np.random.Generator, shape, variance: float) -> np.ndarray:
    """Draw i.i.d. CN(0, variance) samples; real and imaginary parts each get variance/2.

    A zero variance returns zeros without consuming the stream. Each sample takes
    one (real, imag) pair from the stream, so a longer draw extends a shorter one.
    """
    if variance == 0:
        return np.zeros(shape, dtype=complex)
    scale = np.sqrt(variance / 2.0)
    pairs = rng.standard_normal(tuple(np.atleast_1d(shape)) + (2,))
    return scale * (pairs[..., 0] + 1j * pairs[..., 1])


def generate_sparse_channel(n: int, k: int, dist: TapDistribution,
                            rng: np.random.Generator) -> SparseChannel:
    if n < 1 or k < 1 or k > n:
        raise InvalidSparsityError(f"sparsity must satisfy 1 <= k <= n, got k={k}, n={n}")

    dist = TapDistribution(dist)
    support = np.sort(rng.choice(n, size=k, replace=False))

    if dist is TapDistribution.EQUAL_MAGNITUDE_UNIFORM:
        theta = rng.uniform(0.0, 2.0 * np.pi, size=k)
        values = np.exp(1j * theta) / np.sqrt(k)
    else:
        # no per-draw renormalization: the unit energy holds in expectation
        values = complex_gaussian(rng, k, 1.0 / k)

    taps = np.zeros(n, dtype=complex)
    taps[support] = values
    return SparseChannel(taps=taps, support=support)
