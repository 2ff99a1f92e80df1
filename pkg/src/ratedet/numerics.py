"""Scalar special functions and a derivative-free 1-D maximizer.

Everything here is pure and reentrant; the rest of the package builds on
these three primitives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

__all__ = [
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "std_normal_cdf",
    "std_normal_pdf",
    "std_normal_inv_cdf",
    "maximize_concave_1d",
]

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# Golden-section constants: 1/phi and 1/phi^2.
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class Tolerance:
    """Default numerical tolerances for the scalar routines."""

    abs_tol: float = 1e-12
    search_tol: float = 1e-9

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0.0 and self.search_tol > 0.0):
            raise ValueError("tolerances must be positive")


DEFAULT_TOLERANCE = Tolerance()


def std_normal_cdf(y: float) -> float:
    """Standard normal distribution function G(y).

    Computed through erfc so that both tails keep full relative accuracy.
    """
    y = float(y)
    if not math.isfinite(y):
        raise ValueError(f"std_normal_cdf expects a finite argument, got {y!r}")
    return 0.5 * math.erfc(-y / _SQRT2)


def std_normal_pdf(y: float) -> float:
    """Standard normal density."""
    return _INV_SQRT_2PI * math.exp(-0.5 * y * y)


# Acklam's rational approximation to the normal quantile (relative error
# below 1.15e-9 on its own; refined by Newton steps below).
_ACKLAM_A = (
    -3.969683028665376e01,
    2.209460984245205e02,
    -2.759285104469687e02,
    1.383577518672690e02,
    -3.066479806614716e01,
    2.506628277459239e00,
)
_ACKLAM_B = (
    -5.447609879822406e01,
    1.615858368580409e02,
    -1.556989798598866e02,
    6.680131188771972e01,
    -1.328068155288572e01,
)
_ACKLAM_C = (
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e00,
    -2.549732539343734e00,
    4.374664141464968e00,
    2.938163982698783e00,
)
_ACKLAM_D = (
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e00,
    3.754408661907416e00,
)
_ACKLAM_PLOW = 0.02425


def _acklam_lower(p: float) -> float:
    """Acklam seed for p in (0, 0.5]."""
    a, b, c, d = _ACKLAM_A, _ACKLAM_B, _ACKLAM_C, _ACKLAM_D
    if p < _ACKLAM_PLOW:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0
        )
    q = p - 0.5
    r = q * q
    return (
        (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5])
        * q
        / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)
    )


def _inv_cdf_lower(p: float) -> float:
    """Quantile for p in (0, 0.5]; the result is <= 0.

    Two Newton corrections against std_normal_cdf make the inverse
    self-consistent with the forward function. For x <= 0 the forward cdf
    goes through erfc of a nonnegative argument, so the residual keeps full
    relative accuracy.
    """
    x = _acklam_lower(p)
    for _ in range(2):
        err = 0.5 * math.erfc(-x / _SQRT2) - p
        dens = std_normal_pdf(x)
        if err == 0.0 or dens == 0.0:
            break
        x -= err / dens
    return x


def std_normal_inv_cdf(p: float) -> float:
    """Inverse of std_normal_cdf on the open interval (0, 1).

    Antisymmetric by construction: the upper half reflects the lower half,
    which is exact because 1-p introduces no rounding for p >= 0.5.
    """
    p = float(p)
    if not (0.0 < p < 1.0):
        raise ValueError(f"std_normal_inv_cdf expects 0 < p < 1, got {p!r}")
    if p == 0.5:
        return 0.0
    if p > 0.5:
        return -_inv_cdf_lower(1.0 - p)
    return _inv_cdf_lower(p)


def maximize_concave_1d(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float | None = None,
) -> tuple[float, float]:
    """Golden-section maximization of a concave (unimodal) f on [lo, hi].

    Returns (argmax, f(argmax)) with the argmax located to within `tol`.
    Boundary maxima are supported: the bracket collapses onto the endpoint.
    """
    if tol is None:
        tol = DEFAULT_TOLERANCE.search_tol
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo!r}, {hi!r}]")
    if tol <= 0.0:
        raise ValueError("tol must be positive")

    a, b = lo, hi
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)

    n = int(math.ceil(math.log(tol / h) / math.log(_INVPHI)))
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    yc = f(c)
    yd = f(d)
    for _ in range(max(n - 1, 0)):
        if yc > yd:
            b, d, yd = d, c, yc
            h *= _INVPHI
            c = a + _INVPHI2 * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h *= _INVPHI
            d = a + _INVPHI * h
            yd = f(d)
    if yc > yd:
        return c, yc
    return d, yd
