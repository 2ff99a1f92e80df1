"""Antipodal-Gaussian observation model and SNR bookkeeping.

The per-channel SNR is the signal energy E = m**2 expressed in decibels, so
the amplitude conversion is m = 10**(db/20). The noise variance is fixed
at one; only the signal amplitude varies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .numerics import std_normal_cdf

__all__ = ["Hypothesis", "ObservationModel", "amplitude_from_snr_db", "model_from_snr_db"]


class Hypothesis(Enum):
    H0 = 0
    H1 = 1


def amplitude_from_snr_db(db: float) -> float:
    """Signal amplitude m for a per-channel SNR of `db` decibels."""
    db = float(db)
    if not math.isfinite(db):
        raise ValueError(f"SNR must be finite, got {db!r}")
    return 10.0 ** (db / 20.0)


@dataclass(frozen=True)
class ObservationModel:
    """Antipodal signal in additive unit-variance Gaussian noise.

    The observation mean is -m under H0 and +m under H1. The model is
    immutable and freely shareable across workers.
    """

    m: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.m) and self.m > 0.0):
            raise ValueError(f"signal amplitude must be positive and finite, got {self.m!r}")

    @property
    def snr_db(self) -> float:
        return 20.0 * math.log10(self.m)

    def mean(self, hypothesis: Hypothesis) -> float:
        return self.m if hypothesis is Hypothesis.H1 else -self.m

    def conditional_cdf(self, hypothesis: Hypothesis, x: float) -> float:
        """P(X <= x | hypothesis). Accepts +-inf, which map to 0/1."""
        x = float(x)
        if math.isinf(x):
            return 0.0 if x < 0 else 1.0
        if math.isnan(x):
            raise ValueError("observation must not be NaN")
        return std_normal_cdf(x - self.mean(hypothesis))


def model_from_snr_db(db: float) -> ObservationModel:
    """Build the observation model for a per-channel SNR given in dB."""
    return ObservationModel(amplitude_from_snr_db(db))
