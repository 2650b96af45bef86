"""
Greedy sparse channel recovery.

`cosamp` is compressive sampling matching pursuit: identify the columns most
correlated with the residual, merge them with the current support, solve
least squares on the merged set, prune to the K largest taps and update the
residual. `exhaustive_oracle` and `oracle_ls` are reference estimators used to
check the greedy solver.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from modules.errors import DimensionError, InvalidConfigError, OracleBudgetError
from modules.sensing import AssembledSystem

logger = logging.getLogger(__name__)

RANK_RCOND = 1e-10
ORACLE_BUDGET = 10 ** 6
NON_IMPROVEMENT_LIMIT = 3


class RecoveryConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    max_iterations: int = 50
    residual_tolerance: float = 1e-6
    identification_width: Optional[int] = None

    @model_validator(mode="after")
    def _check(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.residual_tolerance < 0:
            raise ValueError("residual_tolerance must be non-negative")
        if self.identification_width is not None and self.identification_width < 1:
            raise ValueError("identification_width must be at least 1")
        return self

    @property
    def width(self) -> int:
        return self.identification_width if self.identification_width is not None else 2 * self.k

    @classmethod
    def create(cls, **fields) -> "RecoveryConfig":
        """Build a config, turning validation failures into InvalidConfigError."""
        try:
            return cls(**fields)
        except ValidationError as e:
            error = e.errors()[0]
            key = str(error["loc"][0]) if error.get("loc") else None
            raise InvalidConfigError(f"invalid recovery config: {error['msg']}", key=key) from e


@dataclass(frozen=True)
class ChannelEstimate:
    coeffs: np.ndarray
    support: np.ndarray
    iterations_used: int
    final_residual_norm: float


@dataclass(frozen=True)
class LeastSquaresResult:
    coeffs: np.ndarray
    residual: np.ndarray
    rank_deficient: bool


def _zero_estimate(system: AssembledSystem, iterations: int = 0) -> ChannelEstimate:
    return ChannelEstimate(coeffs=np.zeros(system.n, dtype=complex),
                           support=np.zeros(0, dtype=int),
                           iterations_used=iterations,
                           final_residual_norm=float(np.linalg.norm(system.phi)))


def largest_indices(values: np.ndarray, count: int) -> np.ndarray:
    """Indices of the `count` largest values; equal values favour the smaller index."""
    count = min(count, len(values))
    return np.argsort(-np.asarray(values), kind="stable")[:count]


def correlation_scores(Phi: np.ndarray, residual: np.ndarray) -> np.ndarray:
    if Phi.shape[0] != len(residual):
        raise DimensionError(f"matrix has {Phi.shape[0]} rows but residual has {len(residual)}")
    return np.abs(Phi.conj().T @ residual)


def least_squares_on_support(Phi: np.ndarray, phi: np.ndarray,
                             support: Iterable[int]) -> LeastSquaresResult:
    support = np.asarray(list(support), dtype=int)
    if Phi.shape[0] != len(phi):
        raise DimensionError(f"matrix has {Phi.shape[0]} rows but measurement has {len(phi)}")
    if support.size == 0:
        return LeastSquaresResult(coeffs=np.zeros(0, dtype=complex),
                                  residual=np.array(phi, dtype=complex), rank_deficient=False)

    A = Phi[:, support]
    singular_values = scipy.linalg.svdvals(A)
    rank_deficient = (A.shape[1] > A.shape[0]
                      or singular_values[-1] <= RANK_RCOND * singular_values[0])

    if rank_deficient:
        # SVD-based driver returns the minimum-norm minimizer
        coeffs = scipy.linalg.lstsq(A, phi, cond=RANK_RCOND, lapack_driver="gelsd")[0]
    else:
        Q, R = scipy.linalg.qr(A, mode="economic")
        coeffs = scipy.linalg.solve_triangular(R, Q.conj().T @ phi)

    coeffs = np.asarray(coeffs, dtype=complex)
    return LeastSquaresResult(coeffs=coeffs, residual=phi - A @ coeffs,
                              rank_deficient=bool(rank_deficient))


def _estimate_on_support(system: AssembledSystem, support: np.ndarray,
                         iterations: int = 0) -> ChannelEstimate:
    ls = least_squares_on_support(system.Phi, system.phi, support)
    coeffs = np.zeros(system.n, dtype=complex)
    coeffs[support] = ls.coeffs
    return ChannelEstimate(coeffs=coeffs, support=np.flatnonzero(coeffs),
                           iterations_used=iterations,
                           final_residual_norm=float(np.linalg.norm(ls.residual)))


def cosamp(system: AssembledSystem, config: RecoveryConfig) -> ChannelEstimate:
    Phi, phi = system.Phi, system.phi
    n = system.n
    k = config.k
    if k > n:
        raise InvalidConfigError(f"sparsity {k} exceeds channel length {n}", key="k")

    phi_norm = float(np.linalg.norm(phi))
    best = _zero_estimate(system)
    if phi_norm == 0.0:
        return best

    support = np.zeros(0, dtype=int)
    residual = phi
    previous_norm = phi_norm
    strikes = 0
    reason = "max_iterations"

    for iteration in range(1, config.max_iterations + 1):
        scores = correlation_scores(Phi, residual)
        candidates = largest_indices(scores, config.width)
        merged = np.union1d(candidates, support)

        ls = least_squares_on_support(Phi, phi, merged)
        keep = largest_indices(np.abs(ls.coeffs), k)

        coeffs = np.zeros(n, dtype=complex)
        coeffs[merged[keep]] = ls.coeffs[keep]
        support = np.flatnonzero(coeffs)

        residual = phi - Phi[:, support] @ coeffs[support]
        residual_norm = float(np.linalg.norm(residual))

        if residual_norm < best.final_residual_norm:
            best = ChannelEstimate(coeffs=coeffs, support=support,
                                   iterations_used=iteration,
                                   final_residual_norm=residual_norm)

        if residual_norm <= config.residual_tolerance * phi_norm:
            reason = "tolerance"
            break
        if residual_norm >= previous_norm:
            strikes += 1
            if strikes >= NON_IMPROVEMENT_LIMIT:
                reason = "stalled"
                break
        else:
            strikes = 0
        previous_norm = residual_norm

    logger.debug(f"CoSaMP halted ({reason}) after {iteration} iterations, "
                 f"best residual {best.final_residual_norm:.3e} of {phi_norm:.3e}")
    return ChannelEstimate(coeffs=best.coeffs, support=best.support,
                           iterations_used=iteration,
                           final_residual_norm=best.final_residual_norm)


def exhaustive_oracle(system: AssembledSystem, k: int) -> ChannelEstimate:
    """Best k-term least-squares fit over every k-subset of columns."""
    if k <= 0:
        return _zero_estimate(system)
    n = system.n
    if k > n:
        raise InvalidConfigError(f"sparsity {k} exceeds channel length {n}", key="k")
    subsets = math.comb(n, k)
    if subsets > ORACLE_BUDGET:
        raise OracleBudgetError(f"C({n}, {k}) = {subsets} supports exceeds budget {ORACLE_BUDGET}")

    best_support = None
    best_norm = math.inf
    # combinations come in lexicographic order, so strict < keeps the smallest on ties
    for subset in itertools.combinations(range(n), k):
        ls = least_squares_on_support(system.Phi, system.phi, subset)
        norm = float(np.linalg.norm(ls.residual))
        if norm < best_norm:
            best_norm = norm
            best_support = subset

    # iterations_used counts the supports examined
    return _estimate_on_support(system, np.array(best_support, dtype=int), iterations=subsets)


def oracle_ls(system: AssembledSystem, true_support: Iterable[int]) -> ChannelEstimate:
    """Genie-aided least squares restricted to the true support."""
    support = np.sort(np.asarray(list(true_support), dtype=int))
    if support.size == 0:
        return _zero_estimate(system)
    return _estimate_on_support(system, support)
