"""Numerical laboratory for central-spin quantum battery charging dynamics."""

from .model import ModelParams, TridiagonalHamiltonian, build_hamiltonian, coupling_element
from .eigensolve import EigenSystem, decompose, tridiagonal_eigh
from .dynamics import (
    StateVector,
    Trajectory,
    efficiency,
    energy_stored,
    propagate,
    sample_trajectory,
)
from .analytics import (
    AnalyticPrediction,
    ChargingReport,
    Regime,
    RegimeClass,
    ScalingFit,
    analytic_charging_time,
    analytic_delta_e,
    charging_advantage,
    classify_regime,
    collapse_curve,
    equal_parameter_scan,
    find_charging_time,
    scaling_fit,
    single_cell_power,
    su2_approximation_error,
)
from .oracle import oracle_trajectory, verify_reduction

__version__ = "0.1.0"

__all__ = [
    "AnalyticPrediction",
    "ChargingReport",
    "EigenSystem",
    "ModelParams",
    "Regime",
    "RegimeClass",
    "ScalingFit",
    "StateVector",
    "Trajectory",
    "TridiagonalHamiltonian",
    "analytic_charging_time",
    "analytic_delta_e",
    "build_hamiltonian",
    "charging_advantage",
    "classify_regime",
    "collapse_curve",
    "coupling_element",
    "decompose",
    "efficiency",
    "energy_stored",
    "equal_parameter_scan",
    "find_charging_time",
    "oracle_trajectory",
    "propagate",
    "sample_trajectory",
    "scaling_fit",
    "single_cell_power",
    "su2_approximation_error",
    "tridiagonal_eigh",
    "verify_reduction",
    "__version__",
]
