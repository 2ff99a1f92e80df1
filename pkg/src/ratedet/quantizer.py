"""Monotone scalar quantizers and their conditional message pmfs."""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass

import numpy as np

from .observation import Hypothesis, ObservationModel

__all__ = ["Quantizer", "SensorPmfPair", "conditional_pmf"]

_PMF_SUM_TOL = 1e-12


@dataclass(frozen=True)
class Quantizer:
    """Partition of the real line into K = 2**rate contiguous cells.

    Cell u (0-based, u = 0..K-1) is the interval [b_{u-1}, b_u) with
    b_{-1} = -inf and b_{K-1} = +inf; a rate-0 quantizer has a single cell
    and carries no information. Boundaries must be sorted nondecreasing;
    coincident boundaries are tolerated and yield zero-width cells.
    """

    rate: int
    boundaries: tuple[float, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.rate, int) or self.rate < 0:
            raise ValueError(f"rate must be a nonnegative integer, got {self.rate!r}")
        object.__setattr__(self, "boundaries", tuple(float(b) for b in self.boundaries))
        expected = 2**self.rate - 1
        if len(self.boundaries) != expected:
            raise ValueError(
                f"rate {self.rate} requires {expected} boundaries, got {len(self.boundaries)}"
            )
        for b in self.boundaries:
            if not math.isfinite(b):
                raise ValueError("boundaries must be finite")
        for left, right in zip(self.boundaries, self.boundaries[1:]):
            if left > right:
                raise ValueError("boundaries must be sorted nondecreasing")

    @property
    def n_cells(self) -> int:
        return 2**self.rate

    def cell_index(self, x: float) -> int:
        """0-based index of the cell containing x (cells are left-closed)."""
        return bisect.bisect_right(self.boundaries, x)

    def to_json(self) -> str:
        """Serialize as {"rate": r, "boundaries": [...]} at full precision."""
        return json.dumps({"rate": self.rate, "boundaries": list(self.boundaries)})

    @classmethod
    def from_json(cls, text: str) -> "Quantizer":
        obj = json.loads(text)
        return cls(rate=int(obj["rate"]), boundaries=tuple(obj["boundaries"]))


@dataclass(frozen=True, eq=False)
class SensorPmfPair:
    """Conditional pmfs of one sensor's message under each hypothesis."""

    p0: np.ndarray
    p1: np.ndarray

    def __post_init__(self) -> None:
        p0 = np.asarray(self.p0, dtype=np.float64)
        p1 = np.asarray(self.p1, dtype=np.float64)
        if p0.ndim != 1 or p1.ndim != 1 or p0.shape != p1.shape or p0.size == 0:
            raise ValueError("p0 and p1 must be nonempty 1-D vectors of equal length")
        for name, p in (("p0", p0), ("p1", p1)):
            if np.any(p < 0.0):
                raise ValueError(f"{name} has negative entries")
            if abs(float(p.sum()) - 1.0) > _PMF_SUM_TOL:
                raise ValueError(f"{name} must sum to 1 within {_PMF_SUM_TOL}")
        p0.flags.writeable = False
        p1.flags.writeable = False
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "p1", p1)

    @property
    def n_cells(self) -> int:
        return int(self.p0.size)


def conditional_pmf(quantizer: Quantizer, model: ObservationModel) -> SensorPmfPair:
    """Cell probabilities of the quantized observation under each hypothesis.

    Entry u is the probability mass of cell u, i.e. the conditional cdf
    increment across the cell. Tiny negative increments from rounding are
    clamped to zero.
    """
    edges0 = np.empty(quantizer.n_cells + 1)
    edges1 = np.empty(quantizer.n_cells + 1)
    edges0[0] = edges1[0] = 0.0
    edges0[-1] = edges1[-1] = 1.0
    for i, b in enumerate(quantizer.boundaries, start=1):
        edges0[i] = model.conditional_cdf(Hypothesis.H0, b)
        edges1[i] = model.conditional_cdf(Hypothesis.H1, b)
    p0 = np.maximum(np.diff(edges0), 0.0)
    p1 = np.maximum(np.diff(edges1), 0.0)
    return SensorPmfPair(p0=p0, p1=p1)
