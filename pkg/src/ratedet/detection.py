"""Fusion-center computations: exact MAP error, Monte Carlo, error exponents.

The exact path enumerates the product message space (joint pmfs are products
of per-sensor pmfs) and applies the MAP rule per message vector; with equal
priors this is 1 - (1/2) * sum_u max_j P(u|H_j). Monte Carlo draws are
PCG64 streams split per 32768-trial block from (seed, block_index), so an
estimate depends only on the seed, never on scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError
from .observation import ObservationModel
from .quantizer import Quantizer, conditional_pmf

__all__ = [
    "MAX_PRODUCT_CELLS",
    "NetworkConfig",
    "McConfig",
    "McResult",
    "ExponentPoint",
    "exact_map_error",
    "monte_carlo_error",
    "exponent_estimate",
]

MAX_PRODUCT_CELLS = 1 << 24
_MC_BLOCK = 1 << 15


@dataclass(frozen=True)
class NetworkConfig:
    """A bank of sensor quantizers sharing one observation model."""

    quantizers: tuple[Quantizer, ...]
    model: ObservationModel
    priors: tuple[float, float] = (0.5, 0.5)

    def __post_init__(self) -> None:
        quantizers = tuple(self.quantizers)
        if not quantizers:
            raise ValueError("need at least one sensor")
        pi0, pi1 = (float(p) for p in self.priors)
        if pi0 < 0.0 or pi1 < 0.0 or abs(pi0 + pi1 - 1.0) > 1e-12:
            raise ValueError("priors must be nonnegative and sum to 1")
        object.__setattr__(self, "quantizers", quantizers)
        object.__setattr__(self, "priors", (pi0, pi1))

    @property
    def n_sensors(self) -> int:
        return len(self.quantizers)

    def product_cells(self) -> int:
        total = 1
        for q in self.quantizers:
            total *= q.n_cells
        return total


@dataclass(frozen=True)
class McConfig:
    """Monte-Carlo settings; ties at the MAP threshold always go to H0."""

    snapshots: int = 1
    trials: int = 100000
    seed: int = 0
    tie_rule: str = "prefer_H0"

    def __post_init__(self) -> None:
        if self.snapshots < 1:
            raise ValueError("snapshots must be at least 1")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.tie_rule != "prefer_H0":
            raise ValueError("the only supported tie rule is 'prefer_H0'")


@dataclass(frozen=True)
class McResult:
    estimate: float
    std_err: float


@dataclass(frozen=True)
class ExponentPoint:
    """One empirical error-exponent sample, -log(Pe)/T at a given T."""

    snapshots: int
    pe_estimate: float
    std_err: float
    exponent: float
    is_lower_bound: bool


def _joint_log_pmfs(config: NetworkConfig) -> tuple[np.ndarray, np.ndarray]:
    l0 = np.zeros(1)
    l1 = np.zeros(1)
    for q in config.quantizers:
        pmfs = conditional_pmf(q, config.model)
        with np.errstate(divide="ignore"):
            s0 = np.log(pmfs.p0)
            s1 = np.log(pmfs.p1)
        l0 = (l0[:, None] + s0[None, :]).ravel()
        l1 = (l1[:, None] + s1[None, :]).ravel()
    return l0, l1


def exact_map_error(config: NetworkConfig) -> float:
    """Single-shot MAP error probability by product-space enumeration.

    Accumulates joint log-pmfs sensor by sensor, takes the prior-weighted
    max per message vector, and sums. For equal priors the result lies in
    [0, 0.5].
    """
    n_vectors = config.product_cells()
    if n_vectors > MAX_PRODUCT_CELLS:
        raise CapacityError(
            f"product message space of {n_vectors} cells exceeds {MAX_PRODUCT_CELLS}"
        )
    l0, l1 = _joint_log_pmfs(config)
    pi0, pi1 = config.priors
    with np.errstate(divide="ignore"):
        score = np.maximum(l0 + math.log(pi0) if pi0 > 0 else -np.inf,
                           l1 + math.log(pi1) if pi1 > 0 else -np.inf)
    p_correct = float(np.exp(score).sum())
    return min(max(1.0 - p_correct, 0.0), 1.0)


def _llr_tables(config: NetworkConfig) -> list[np.ndarray]:
    tables = []
    for q in config.quantizers:
        pmfs = conditional_pmf(q, config.model)
        with np.errstate(divide="ignore", invalid="ignore"):
            tables.append(np.log(pmfs.p1) - np.log(pmfs.p0))
    return tables


def monte_carlo_error(config: NetworkConfig, mc: McConfig) -> McResult:
    """Empirical MAP error rate over `mc.trials` independent network shots.

    Each trial draws a hypothesis from the priors, N*T observations, and
    runs the log-likelihood-ratio test on the quantized messages. Returns
    the error rate and its binomial standard error.
    """
    pi0, pi1 = config.priors
    threshold = math.inf if pi1 == 0.0 else (-math.inf if pi0 == 0.0 else math.log(pi0 / pi1))
    tables = _llr_tables(config)
    bounds = [np.asarray(q.boundaries) for q in config.quantizers]
    m = config.model.m
    t_snap = mc.snapshots

    errors = 0
    done = 0
    block_index = 0
    while done < mc.trials:
        n = min(_MC_BLOCK, mc.trials - done)
        rng = np.random.default_rng(np.random.SeedSequence((int(mc.seed), block_index)))
        is_h1 = rng.random(n) < pi1
        noise = rng.standard_normal((n, config.n_sensors, t_snap))
        x = noise + np.where(is_h1, m, -m)[:, None, None]
        llr = np.zeros(n)
        for j, (b, table) in enumerate(zip(bounds, tables)):
            cells = np.searchsorted(b, x[:, j, :], side="right")
            llr += table[cells].sum(axis=1)
        if np.isnan(llr).any():
            raise RuntimeError("a message landed in a cell with zero mass under both hypotheses")
        decide_h1 = llr > threshold
        errors += int(np.count_nonzero(decide_h1 != is_h1))
        done += n
        block_index += 1

    estimate = errors / mc.trials
    std_err = math.sqrt(estimate * (1.0 - estimate) / mc.trials)
    return McResult(estimate=estimate, std_err=std_err)


def exponent_estimate(
    config: NetworkConfig,
    t_values: list[int],
    trials_per_t: int,
    seed: int = 0,
) -> list[ExponentPoint]:
    """Empirical -log(Pe)/T for each requested number of snapshots T.

    When no errors are observed at some T the true error rate is below
    1/trials, so the point is reported as a lower bound on the exponent and
    flagged.
    """
    points = []
    for t_snap in t_values:
        sub_seed = int(np.random.SeedSequence((int(seed), int(t_snap))).generate_state(1, np.uint64)[0])
        result = monte_carlo_error(
            config, McConfig(snapshots=int(t_snap), trials=trials_per_t, seed=sub_seed)
        )
        if result.estimate > 0.0:
            exponent = -math.log(result.estimate) / t_snap
            flagged = False
        else:
            exponent = math.log(trials_per_t) / t_snap
            flagged = True
        points.append(
            ExponentPoint(
                snapshots=int(t_snap),
                pe_estimate=result.estimate,
                std_err=result.std_err,
                exponent=exponent,
                is_lower_bound=flagged,
            )
        )
    return points
