"""Rate allocation and quantizer design for decentralized detection.

Designs rate-r scalar quantizers for a binary antipodal-Gaussian sensing
problem, evaluates per-sensor and network Chernoff information under a
sum-rate constraint, checks the discrete concavity that makes uniform rate
allocation optimal, and computes exact and Monte-Carlo fusion-center error
probabilities.
"""

from .allocation import (
    AllocationScore,
    RateAllocation,
    best_allocation,
    enumerate_allocations,
    rebalance_step,
    rebalance_to_uniform,
    score_allocation,
)
from .chernoff import (
    ChernoffCurve,
    ChernoffResult,
    ConcavityReport,
    chernoff_at_alpha,
    chernoff_information,
    chernoff_raw,
    is_discrete_concave,
    network_chernoff,
)
from .design import (
    MAX_RATE,
    BBDesigner,
    DesignerConfig,
    NumericalDesign,
    NumericalDesigner,
    bb_asymptotic_chernoff,
    chernoff_curve,
    design_bb,
    design_numerical,
)
from .detection import (
    ExponentPoint,
    McConfig,
    McResult,
    NetworkConfig,
    exact_map_error,
    exponent_estimate,
    monte_carlo_error,
)
from .errors import CapacityError
from .numerics import (
    DEFAULT_TOLERANCE,
    Tolerance,
    maximize_concave_1d,
    std_normal_cdf,
    std_normal_inv_cdf,
)
from .observation import (
    Hypothesis,
    ObservationModel,
    amplitude_from_snr_db,
    model_from_snr_db,
)
from .quantizer import Quantizer, SensorPmfPair, conditional_pmf

__version__ = "0.1.0"

__all__ = [
    "AllocationScore",
    "BBDesigner",
    "CapacityError",
    "ChernoffCurve",
    "ChernoffResult",
    "ConcavityReport",
    "DEFAULT_TOLERANCE",
    "DesignerConfig",
    "ExponentPoint",
    "Hypothesis",
    "MAX_RATE",
    "McConfig",
    "McResult",
    "NetworkConfig",
    "NumericalDesign",
    "NumericalDesigner",
    "ObservationModel",
    "Quantizer",
    "RateAllocation",
    "SensorPmfPair",
    "Tolerance",
    "amplitude_from_snr_db",
    "bb_asymptotic_chernoff",
    "best_allocation",
    "chernoff_at_alpha",
    "chernoff_curve",
    "chernoff_information",
    "chernoff_raw",
    "conditional_pmf",
    "design_bb",
    "design_numerical",
    "enumerate_allocations",
    "exact_map_error",
    "exponent_estimate",
    "is_discrete_concave",
    "maximize_concave_1d",
    "model_from_snr_db",
    "monte_carlo_error",
    "network_chernoff",
    "rebalance_step",
    "rebalance_to_uniform",
    "score_allocation",
    "std_normal_cdf",
    "std_normal_inv_cdf",
]
