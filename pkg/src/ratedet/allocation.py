"""Rate-allocation vectors, the rebalancing argument, and exhaustive search.

Allocations are kept in canonical nonincreasing order. Enumeration uses the
full budget (sum == R): Chernoff information never decreases with rate, so
leaving budget unused is never strictly better.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .chernoff import chernoff_information, network_chernoff
from .errors import CapacityError
from .observation import ObservationModel
from .quantizer import conditional_pmf

__all__ = [
    "MAX_ENUMERATION",
    "RateAllocation",
    "AllocationScore",
    "enumerate_allocations",
    "rebalance_step",
    "rebalance_to_uniform",
    "score_allocation",
    "best_allocation",
]

MAX_ENUMERATION = 10**6


@dataclass(frozen=True)
class RateAllocation:
    """Integer bits per sensor under a sum-rate cap; stored nonincreasing."""

    rates: tuple[int, ...]
    sum_rate_cap: int

    def __post_init__(self) -> None:
        rates = tuple(sorted((int(r) for r in self.rates), reverse=True))
        if not rates:
            raise ValueError("allocation must have at least one sensor")
        if any(r < 0 for r in rates):
            raise ValueError("rates must be nonnegative")
        cap = int(self.sum_rate_cap)
        if cap < 1:
            raise ValueError("sum_rate_cap must be a positive integer")
        if sum(rates) > cap:
            raise ValueError(f"rates sum to {sum(rates)}, above the cap {cap}")
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "sum_rate_cap", cap)

    @property
    def n_sensors(self) -> int:
        return len(self.rates)

    @property
    def total_rate(self) -> int:
        return sum(self.rates)

    @property
    def spread(self) -> int:
        return self.rates[0] - self.rates[-1]

    def label(self) -> str:
        return "-".join(str(r) for r in self.rates)


def _count_partitions(total: int, slots: int) -> int:
    """Number of nonincreasing `slots`-tuples of nonnegative ints summing to `total`.

    Equals the number of partitions of `total` into at most `slots` parts
    (conjugate DP: parts of size <= slots).
    """
    table = [0] * (total + 1)
    table[0] = 1
    for part in range(1, slots + 1):
        for t in range(part, total + 1):
            table[t] += table[t - part]
    return table[total]


def _descending_partitions(total: int, slots: int, cap: int) -> Iterator[tuple[int, ...]]:
    if slots == 0:
        if total == 0:
            yield ()
        return
    hi = min(cap, total)
    lo = -(-total // slots)  # smallest feasible leading part, ceil division
    for v in range(hi, lo - 1, -1):
        for rest in _descending_partitions(total - v, slots - 1, v):
            yield (v,) + rest


def enumerate_allocations(n_sensors: int, total_rate: int) -> list[RateAllocation]:
    """All canonical allocations of exactly `total_rate` bits over the sensors.

    Ordered lexicographically descending (largest leading rate first).
    """
    if n_sensors < 1:
        raise ValueError("need at least one sensor")
    if total_rate < 0:
        raise ValueError("total_rate must be nonnegative")
    count = _count_partitions(total_rate, n_sensors)
    if count > MAX_ENUMERATION:
        raise CapacityError(
            f"{count} allocations exceed the enumeration cap of {MAX_ENUMERATION}"
        )
    cap = max(total_rate, 1)
    return [
        RateAllocation(rates=p, sum_rate_cap=cap)
        for p in _descending_partitions(total_rate, n_sensors, total_rate)
    ]


def rebalance_step(alloc: RateAllocation) -> RateAllocation:
    """Replace the extreme rates with their floor/ceil midpoint pair.

    Preserves the rate sum and never increases the spread; uniform-within-1
    allocations are fixed points.
    """
    rates = list(alloc.rates)
    hi, lo = rates[0], rates[-1]
    rates[0] = (hi + lo + 1) // 2
    rates[-1] = (hi + lo) // 2
    return RateAllocation(rates=tuple(rates), sum_rate_cap=alloc.sum_rate_cap)


def rebalance_to_uniform(
    alloc: RateAllocation,
) -> tuple[RateAllocation, list[RateAllocation]]:
    """Apply rebalance_step until the spread is at most one bit.

    Returns the fixed point and the trace of every intermediate allocation.
    Terminates because the sum of squared rates strictly decreases whenever
    the spread is two or more.
    """
    trace: list[RateAllocation] = []
    current = alloc
    while current.spread > 1:
        current = rebalance_step(current)
        trace.append(current)
    return current, trace


@dataclass(frozen=True)
class AllocationScore:
    """Network Chernoff information of one allocation, with per-sensor values."""

    allocation: RateAllocation
    network_chernoff: float
    per_sensor: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.network_chernoff > sum(self.per_sensor) + 1e-9:
            raise ValueError("network Chernoff cannot exceed the per-sensor sum")


def score_allocation(
    alloc: RateAllocation, model: ObservationModel, designer
) -> AllocationScore:
    """Design one quantizer per sensor rate and evaluate the network."""
    pmf_by_rate = {
        rate: conditional_pmf(designer.design(rate, model), model)
        for rate in set(alloc.rates)
    }
    pmfs = [pmf_by_rate[r] for r in alloc.rates]
    per_sensor = tuple(chernoff_information(p).value for p in pmfs)
    net = network_chernoff(pmfs)
    return AllocationScore(
        allocation=alloc, network_chernoff=net.value, per_sensor=per_sensor
    )


def best_allocation(
    n_sensors: int, total_rate: int, model: ObservationModel, designer
) -> tuple[AllocationScore, list[AllocationScore]]:
    """Exhaustively score every full-budget allocation.

    Returns the winner and the full ranking (descending network Chernoff;
    ties prefer smaller spread, then lexicographic order).
    """
    allocations = enumerate_allocations(n_sensors, total_rate)
    scores = [score_allocation(a, model, designer) for a in allocations]
    ranked = sorted(
        scores,
        key=lambda s: (-s.network_chernoff, s.allocation.spread, s.allocation.rates),
    )
    return ranked[0], ranked
