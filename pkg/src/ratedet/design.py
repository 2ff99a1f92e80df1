"""Sensor design methods: closed-form compander and coordinate-ascent search.

Both methods produce monotone quantizers. The compander places boundaries at
sqrt(3) * G^{-1}(i/K) independently of the signal amplitude; the numerical
method ascends the Chernoff objective one boundary at a time from random
starting points.

Randomness is NumPy's PCG64: restart k of a design seeded with s draws from
``default_rng(SeedSequence((s, k)))``, so results are reproducible from the
seed alone and restarts are independent streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .chernoff import ChernoffCurve, chernoff_information
from .errors import CapacityError
from .numerics import maximize_concave_1d, std_normal_cdf, std_normal_inv_cdf
from .observation import ObservationModel
from .quantizer import Quantizer, SensorPmfPair, conditional_pmf

__all__ = [
    "MAX_RATE",
    "DesignerConfig",
    "NumericalDesign",
    "design_bb",
    "bb_asymptotic_chernoff",
    "design_numerical",
    "BBDesigner",
    "NumericalDesigner",
    "chernoff_curve",
]

# Cell counts grow as 2**rate; 16 bits (65536 cells) is the supported cap.
MAX_RATE = 16

_SQRT3 = math.sqrt(3.0)

# Outer search windows for the first/last boundary are unbounded in theory;
# they are clipped to +-(m + 8), beyond which the residual Gaussian mass
# (< 1e-12 relative) cannot move the objective at the tolerances used here.
_WINDOW_PAD = 8.0

# Position tolerance of the golden refinement inside one grid neighborhood.
_BOUNDARY_TOL = 1e-9

# Guard for the objective monotonicity invariant of coordinate ascent.
_ASCENT_SLACK = 1e-9


def _check_rate(rate: int) -> None:
    if not isinstance(rate, (int, np.integer)) or rate < 0:
        raise ValueError(f"rate must be a nonnegative integer, got {rate!r}")
    if rate > MAX_RATE:
        raise CapacityError(f"rate {rate} exceeds the supported cap of {MAX_RATE} bits")


def design_bb(rate: int) -> Quantizer:
    """Compander-rule quantizer: b_i = sqrt(3) * G^{-1}(i / 2**rate).

    The boundaries do not depend on the signal amplitude. Rate 0 yields the
    single-cell quantizer.
    """
    _check_rate(rate)
    k = 2**rate
    return Quantizer(
        rate=int(rate),
        boundaries=tuple(_SQRT3 * std_normal_inv_cdf(i / k) for i in range(1, k)),
    )


def bb_asymptotic_chernoff(rate: int, m: float) -> float:
    """High-rate closed form m**2/2 - log(1 + (pi*sqrt(3)*m**2/4) * 2**(-2r)).

    Valid asymptotically: at very low rates it can go negative, which is why
    curve evaluation uses exact cell pmfs instead.
    """
    if not m > 0.0:
        raise ValueError("m must be positive")
    if not (isinstance(rate, (int, np.integer)) and rate >= 0):
        raise ValueError(f"rate must be a nonnegative integer, got {rate!r}")
    return 0.5 * m * m - math.log1p(math.pi * _SQRT3 * m * m / 4.0 * 4.0 ** (-float(rate)))


@dataclass(frozen=True)
class DesignerConfig:
    """Knobs of the coordinate-ascent designer.

    `eta` is the stopping threshold on the per-iteration objective
    improvement; `restarts` independent random starts are run and the best
    kept. The boundary subproblem is solved by a `grid_points` coarse scan
    followed by golden-section refinement.
    """

    eta: float = 1e-4
    restarts: int = 16
    seed: int = 0
    grid_points: int = 64
    max_iters: int = 10000

    def __post_init__(self) -> None:
        if not self.eta > 0.0:
            raise ValueError("eta must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.grid_points < 2:
            raise ValueError("grid_points must be at least 2")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass(frozen=True)
class NumericalDesign:
    quantizer: Quantizer
    chernoff: float
    alpha_star: float


_SQRT2 = math.sqrt(2.0)
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_GOLDEN2 = (3.0 - math.sqrt(5.0)) / 2.0


@numba.njit(cache=True)
def _pair_mass(x, m, alpha, c0l, c1l, c0r, c1r):
    """Mass term of the two cells adjacent to a boundary placed at x.

    Maximizing the Chernoff objective in one boundary with everything else
    fixed is exactly minimizing this quantity; zero-mass cells contribute
    nothing (continuous extension in alpha).
    """
    g0 = 0.5 * math.erfc(-(x + m) / _SQRT2)
    g1 = 0.5 * math.erfc(-(x - m) / _SQRT2)
    total = 0.0
    p = g0 - c0l
    q = g1 - c1l
    if p > 0.0 and q > 0.0:
        total += p**alpha * q ** (1.0 - alpha)
    p = c0r - g0
    q = c1r - g1
    if p > 0.0 and q > 0.0:
        total += p**alpha * q ** (1.0 - alpha)
    return total


@numba.njit(cache=True)
def _sweep_kernel(b, c0, c1, m, alpha, grid_points, pad, refine_tol):
    """One in-place pass over b_1..b_{K-1}.

    Each boundary is re-optimized inside the window formed by its current
    neighbors: a `grid_points` coarse scan, golden-section refinement around
    the best grid point, and a keep-better comparison against the current
    position (which makes the objective nondecreasing by construction).
    """
    n = b.size
    for i in range(n):
        lo = b[i - 1] if i > 0 else -m - pad
        hi = b[i + 1] if i < n - 1 else m + pad
        if not lo < hi:
            continue
        c0l = c0[i - 1] if i > 0 else 0.0
        c1l = c1[i - 1] if i > 0 else 0.0
        c0r = c0[i + 1] if i < n - 1 else 1.0
        c1r = c1[i + 1] if i < n - 1 else 1.0

        step = (hi - lo) / (grid_points - 1)
        best_j = 0
        best_mass = math.inf
        for j in range(grid_points):
            x = lo + j * step
            mass = _pair_mass(x, m, alpha, c0l, c1l, c0r, c1r)
            if mass < best_mass:
                best_mass = mass
                best_j = j
        best_x = lo + best_j * step

        # golden-section refinement inside the bracketing grid neighborhood
        gl = lo + (best_j - 1) * step if best_j > 0 else lo
        gr = lo + (best_j + 1) * step if best_j < grid_points - 1 else hi
        h = gr - gl
        if h > refine_tol:
            n_iter = int(math.ceil(math.log(refine_tol / h) / math.log(_GOLDEN)))
            xc = gl + _GOLDEN2 * h
            xd = gl + _GOLDEN * h
            yc = _pair_mass(xc, m, alpha, c0l, c1l, c0r, c1r)
            yd = _pair_mass(xd, m, alpha, c0l, c1l, c0r, c1r)
            for _ in range(n_iter - 1):
                if yc < yd:
                    gr = xd
                    xd, yd = xc, yc
                    h *= _GOLDEN
                    xc = gl + _GOLDEN2 * h
                    yc = _pair_mass(xc, m, alpha, c0l, c1l, c0r, c1r)
                else:
                    gl = xc
                    xc, yc = xd, yd
                    h *= _GOLDEN
                    xd = gl + _GOLDEN * h
                    yd = _pair_mass(xd, m, alpha, c0l, c1l, c0r, c1r)
            if yc < yd:
                if yc < best_mass:
                    best_mass, best_x = yc, xc
            else:
                if yd < best_mass:
                    best_mass, best_x = yd, xd

        if best_mass < _pair_mass(b[i], m, alpha, c0l, c1l, c0r, c1r):
            b[i] = best_x
            c0[i] = 0.5 * math.erfc(-(best_x + m) / _SQRT2)
            c1[i] = 0.5 * math.erfc(-(best_x - m) / _SQRT2)


class _AscentState:
    """Boundaries of one start plus cached per-boundary cdf values."""

    def __init__(self, boundaries: np.ndarray, model: ObservationModel):
        self.m = model.m
        self.b = np.array(boundaries, dtype=np.float64)
        self.c0 = np.array([std_normal_cdf(x + self.m) for x in self.b])
        self.c1 = np.array([std_normal_cdf(x - self.m) for x in self.b])
        self.alpha = 0.5

    def cell_probs(self) -> tuple[np.ndarray, np.ndarray]:
        e0 = np.concatenate(([0.0], self.c0, [1.0]))
        e1 = np.concatenate(([0.0], self.c1, [1.0]))
        return np.maximum(np.diff(e0), 0.0), np.maximum(np.diff(e1), 0.0)

    def objective(self, alpha: float | None = None) -> float:
        if alpha is None:
            alpha = self.alpha
        p0, p1 = self.cell_probs()
        mask = (p0 > 0.0) & (p1 > 0.0)
        if not mask.any():
            return math.inf
        total = float((p0[mask] ** alpha * p1[mask] ** (1.0 - alpha)).sum())
        return max(0.0, -math.log(total))

    def sweep_boundaries(self, grid_points: int) -> None:
        _sweep_kernel(
            self.b, self.c0, self.c1, self.m, self.alpha,
            grid_points, _WINDOW_PAD, _BOUNDARY_TOL,
        )

    def update_alpha(self) -> float:
        """Re-optimize alpha over [0, 1]; returns the objective achieved."""
        p0, p1 = self.cell_probs()
        mask = (p0 > 0.0) & (p1 > 0.0)
        if not mask.any():
            return math.inf
        lp0 = np.log(p0[mask])
        lp1 = np.log(p1[mask])

        def value(alpha: float) -> float:
            v = alpha * lp0 + (1.0 - alpha) * lp1
            vmax = float(v.max())
            return max(0.0, -(vmax + math.log(float(np.exp(v - vmax).sum()))))

        alpha_new, val_new = maximize_concave_1d(value, 0.0, 1.0)
        val_cur = value(self.alpha)
        if val_new > val_cur:
            self.alpha = alpha_new
            return val_new
        return val_cur


def _run_start(
    rate: int, b0: np.ndarray, model: ObservationModel, cfg: DesignerConfig
) -> NumericalDesign:
    state = _AscentState(b0, model)
    obj = state.objective()
    for _ in range(cfg.max_iters):
        state.sweep_boundaries(cfg.grid_points)
        new_obj = state.update_alpha()
        if new_obj + _ASCENT_SLACK < obj:
            raise RuntimeError(
                f"coordinate ascent decreased the objective: {obj!r} -> {new_obj!r}"
            )
        improvement = new_obj - obj
        obj = new_obj
        if improvement < cfg.eta:
            break
    quantizer = Quantizer(rate=rate, boundaries=tuple(float(x) for x in state.b))
    return NumericalDesign(quantizer=quantizer, chernoff=obj, alpha_star=state.alpha)


def design_numerical(
    rate: int, model: ObservationModel, cfg: DesignerConfig | None = None
) -> NumericalDesign:
    """Coordinate-ascent quantizer design.

    Each restart draws 2**rate - 1 boundaries uniformly in [-m-5, m+5],
    sorts them, then alternates boundary sweeps with an alpha update until
    the per-iteration improvement drops below `eta`. The best restart wins;
    ties go to the lowest restart index, so the result is a deterministic
    function of (rate, model, cfg).
    """
    _check_rate(rate)
    if cfg is None:
        cfg = DesignerConfig()
    if rate == 0:
        return NumericalDesign(quantizer=Quantizer(0, ()), chernoff=0.0, alpha_star=0.5)
    best: NumericalDesign | None = None
    for k in range(cfg.restarts):
        rng = np.random.default_rng(np.random.SeedSequence((int(cfg.seed), k)))
        b0 = np.sort(rng.uniform(-model.m - 5.0, model.m + 5.0, size=2**rate - 1))
        result = _run_start(int(rate), b0, model, cfg)
        if best is None or result.chernoff > best.chernoff:
            best = result
    assert best is not None
    return best


class BBDesigner:
    """Design-method handle for the compander rule."""

    name = "bb"

    def design(self, rate: int, model: ObservationModel) -> Quantizer:
        return design_bb(rate)


class NumericalDesigner:
    """Design-method handle for coordinate ascent, with a per-(rate, m) cache.

    The cache makes repeated scoring of allocations cheap: a design method
    maps a rate to a unique decision function, so sensors at the same rate
    share one quantizer.
    """

    name = "numerical"

    def __init__(self, cfg: DesignerConfig | None = None):
        self.cfg = cfg if cfg is not None else DesignerConfig()
        self._cache: dict[tuple[int, float], NumericalDesign] = {}

    def design_full(self, rate: int, model: ObservationModel) -> NumericalDesign:
        key = (int(rate), model.m)
        if key not in self._cache:
            self._cache[key] = design_numerical(rate, model, self.cfg)
        return self._cache[key]

    def design(self, rate: int, model: ObservationModel) -> Quantizer:
        return self.design_full(rate, model).quantizer


def chernoff_curve(designer, model: ObservationModel, rates) -> ChernoffCurve:
    """Exact Chernoff information of the designer's quantizers, per rate.

    Values come from the cell pmfs (not any closed form), so the curve is
    comparable across design methods.
    """
    values = []
    for rate in rates:
        pmfs: SensorPmfPair = conditional_pmf(designer.design(int(rate), model), model)
        values.append(chernoff_information(pmfs).value)
    return ChernoffCurve(rates=tuple(int(r) for r in rates), values=tuple(values))
