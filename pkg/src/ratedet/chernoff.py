"""Chernoff-information functionals and the discrete-concavity check.

All divergences are in nats. The per-sensor functional is

    C(alpha) = -log sum_u p0[u]**alpha * p1[u]**(1-alpha),

which is concave in alpha (negative log-sum-exp of affine functions), so a
golden-section search over [0, 1] finds the Chernoff information exactly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .numerics import DEFAULT_TOLERANCE, maximize_concave_1d
from .observation import ObservationModel
from .quantizer import SensorPmfPair

__all__ = [
    "ChernoffResult",
    "ChernoffCurve",
    "ConcavityReport",
    "chernoff_at_alpha",
    "chernoff_information",
    "network_chernoff",
    "chernoff_raw",
    "is_discrete_concave",
]

# Values at or below this are treated as a flat zero maximum, for which the
# optimizer location is meaningless and 0.5 is reported by convention.
_FLAT_ZERO = 1e-15


@dataclass(frozen=True)
class ChernoffResult:
    """Maximized Chernoff information (nats) and its optimizer."""

    value: float
    alpha_star: float

    def __post_init__(self) -> None:
        if not self.value >= 0.0:
            raise ValueError("Chernoff information must be nonnegative")
        if not 0.0 <= self.alpha_star <= 1.0:
            raise ValueError("alpha_star must lie in [0, 1]")


def _support_logs(pmfs: SensorPmfPair) -> tuple[np.ndarray, np.ndarray]:
    """Log-pmfs restricted to cells with positive mass under both hypotheses.

    Cells with zero mass under one hypothesis contribute nothing to the sum
    for alpha in (0, 1); the same continuous extension is applied at the
    endpoints. Cells empty under both hypotheses are skipped outright.
    """
    mask = (pmfs.p0 > 0.0) & (pmfs.p1 > 0.0)
    return np.log(pmfs.p0[mask]), np.log(pmfs.p1[mask])


def _c_alpha(lp0: np.ndarray, lp1: np.ndarray, alpha: float) -> float:
    if lp0.size == 0:
        return math.inf
    v = alpha * lp0 + (1.0 - alpha) * lp1
    vmax = float(v.max())
    total = vmax + math.log(float(np.exp(v - vmax).sum()))
    # Hoelder gives sum <= 1; only rounding can push the value below zero.
    return max(0.0, -total)


def chernoff_at_alpha(pmfs: SensorPmfPair, alpha: float) -> float:
    """Evaluate the Chernoff functional at a fixed alpha in [0, 1]."""
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha!r}")
    lp0, lp1 = _support_logs(pmfs)
    return _c_alpha(lp0, lp1, alpha)


def chernoff_information(pmfs: SensorPmfPair) -> ChernoffResult:
    """Maximize the functional over alpha in [0, 1]."""
    lp0, lp1 = _support_logs(pmfs)
    if lp0.size == 0:
        return ChernoffResult(value=math.inf, alpha_star=0.5)
    alpha, value = maximize_concave_1d(
        lambda a: _c_alpha(lp0, lp1, a), 0.0, 1.0, DEFAULT_TOLERANCE.search_tol
    )
    if value <= _FLAT_ZERO:
        return ChernoffResult(value=0.0, alpha_star=0.5)
    return ChernoffResult(value=value, alpha_star=alpha)


def network_chernoff(sensors: Sequence[SensorPmfPair]) -> ChernoffResult:
    """Chernoff information of a sensor bank sharing a single alpha.

    Maximizes sum_n C_n(alpha) over one alpha in [0, 1]; by independence of
    the sensor messages this is the network-wide error exponent. It never
    exceeds the sum of the individually maximized values.
    """
    if len(sensors) == 0:
        raise ValueError("need at least one sensor")
    logs = [_support_logs(p) for p in sensors]
    if any(lp0.size == 0 for lp0, _ in logs):
        return ChernoffResult(value=math.inf, alpha_star=0.5)

    def total(alpha: float) -> float:
        return sum(_c_alpha(lp0, lp1, alpha) for lp0, lp1 in logs)

    alpha, value = maximize_concave_1d(total, 0.0, 1.0, DEFAULT_TOLERANCE.search_tol)
    if value <= _FLAT_ZERO:
        return ChernoffResult(value=0.0, alpha_star=0.5)
    return ChernoffResult(value=value, alpha_star=alpha)


def chernoff_raw(model: ObservationModel) -> float:
    """Chernoff information of one raw (unquantized) observation: m**2/2."""
    return 0.5 * model.m * model.m


class ConcavityReport(NamedTuple):
    is_concave: bool
    violations: tuple[int, ...]


def is_discrete_concave(values: Sequence[float], slack: float = 1e-9) -> ConcavityReport:
    """Check g(k-1) + g(k+1) <= 2 g(k) + slack at every interior index.

    The values are understood as g evaluated on consecutive integer rates.
    Returns the verdict together with the violating interior indices.
    """
    vals = [float(v) for v in values]
    if len(vals) < 3:
        raise ValueError("need at least three values to test discrete concavity")
    if slack < 0.0:
        raise ValueError("slack must be nonnegative")
    violations = tuple(
        k for k in range(1, len(vals) - 1) if vals[k - 1] + vals[k + 1] > 2.0 * vals[k] + slack
    )
    return ConcavityReport(is_concave=not violations, violations=violations)


@dataclass(frozen=True)
class ChernoffCurve:
    """Chernoff information as a function of rate for one design method."""

    rates: tuple[int, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        rates = tuple(int(r) for r in self.rates)
        values = tuple(float(v) for v in self.values)
        if len(rates) != len(values) or not rates:
            raise ValueError("rates and values must be nonempty and of equal length")
        if any(b <= a for a, b in zip(rates, rates[1:])):
            raise ValueError("rates must be strictly increasing")
        if any(v < 0.0 for v in values):
            raise ValueError("values must be nonnegative")
        if any(b < a - 1e-12 for a, b in zip(values, values[1:])):
            warnings.warn("Chernoff curve is not nondecreasing in rate", stacklevel=3)
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "values", values)

    def to_csv(self) -> str:
        lines = ["rate,chernoff"]
        lines.extend(f"{r},{v!r}" for r, v in zip(self.rates, self.values))
        return "\n".join(lines) + "\n"

    def concavity(self, slack: float = 1e-9) -> ConcavityReport:
        return is_discrete_concave(self.values, slack)
