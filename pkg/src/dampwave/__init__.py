"""Desk-scale laboratory for the semilinear wave equation with space-time
dependent damping: finite-difference runs, weighted energy functionals,
decay-rate fits, and numerical audits of the underlying inequalities."""

from .coefficients import (
    InvalidConfig,
    ModelConfig,
    WeightConstants,
    critical_exponent,
    damping_coefficient,
    derived_constants,
    nonlinear_exponents,
    nonlinearity,
    weight_derivatives,
    weight_exponent,
)
from .energetics import (
    DecayFit,
    EnergyRecord,
    OverflowInvalidRun,
    apriori_functional,
    apriori_series,
    region_bound_ratio,
    fit_decay_rate,
    initial_norm_squared,
    record,
    weighted_integral,
)
from .solver import (
    BlowUpSignal,
    GridSpec,
    InitialData,
    RunResult,
    WaveState,
    init_state,
    run,
    step,
)

__all__ = [
    "BlowUpSignal",
    "DecayFit",
    "EnergyRecord",
    "GridSpec",
    "InitialData",
    "InvalidConfig",
    "ModelConfig",
    "OverflowInvalidRun",
    "RunResult",
    "WaveState",
    "WeightConstants",
    "apriori_functional",
    "apriori_series",
    "region_bound_ratio",
    "critical_exponent",
    "damping_coefficient",
    "derived_constants",
    "fit_decay_rate",
    "init_state",
    "initial_norm_squared",
    "nonlinear_exponents",
    "nonlinearity",
    "record",
    "run",
    "step",
    "weight_derivatives",
    "weight_exponent",
    "weighted_integral",
]

__version__ = "0.1.0"
