# pa_harq/__init__.py
"""
Pacote PA-HARQ: taxa média de enlaces com antena preditora (PA) e HARQ-INR
de comprimento variável sob descasamento espacial.
"""

from .analytic import (
    eta_exact,
    eta_closed_form,
    eta_open_loop,
    open_loop_optimal_rate,
    eta_benchmarks_analytic,
)
from .channel import (
    effective_distance,
    correlation_entry,
    sigma_from_scenario,
    sample_joint,
    sample_joint_batch,
    conditional_gain_cdf,
    conditional_gain_pdf,
)
from .montecarlo import estimate, sweep, point_seed
from .optimize import (
    optimize_rate_stationarity,
    optimize_rate_direct,
    optimize_open_loop,
    stationarity_residual_literal,
)
from .protocol import (
    second_round_length,
    pa_harq_rate,
    pa_harq_outcome,
    basic_arq_rate,
    open_loop_rate,
    diversity_rate,
)
from .types import (
    ScenarioParams,
    CorrelationModel,
    SpatialCorrelation,
    ChannelDraw,
    RatePolicy,
    RoundOutcome,
    RoundStatus,
    EvalResult,
    McEstimate,
    OptResult,
)
from .config import McConfig, NumericsConfig, ScenarioDefaults
from .exceptions import (
    PaHarqException,
    ConfigurationError,
    DomainError,
    ConvergenceError,
    DegenerateDistributionError,
    ContractViolation,
    NumericError,
    QuadratureError,
)

__all__ = [
    # Analytic
    "eta_exact",
    "eta_closed_form",
    "eta_open_loop",
    "open_loop_optimal_rate",
    "eta_benchmarks_analytic",
    # Channel
    "effective_distance",
    "correlation_entry",
    "sigma_from_scenario",
    "sample_joint",
    "sample_joint_batch",
    "conditional_gain_cdf",
    "conditional_gain_pdf",
    # Monte Carlo
    "estimate",
    "sweep",
    "point_seed",
    # Optimize
    "optimize_rate_stationarity",
    "optimize_rate_direct",
    "optimize_open_loop",
    "stationarity_residual_literal",
    # Protocol
    "second_round_length",
    "pa_harq_rate",
    "pa_harq_outcome",
    "basic_arq_rate",
    "open_loop_rate",
    "diversity_rate",
    # Types
    "ScenarioParams",
    "CorrelationModel",
    "SpatialCorrelation",
    "ChannelDraw",
    "RatePolicy",
    "RoundOutcome",
    "RoundStatus",
    "EvalResult",
    "McEstimate",
    "OptResult",
    # Config
    "McConfig",
    "NumericsConfig",
    "ScenarioDefaults",
    # Exceptions
    "PaHarqException",
    "ConfigurationError",
    "DomainError",
    "ConvergenceError",
    "DegenerateDistributionError",
    "ContractViolation",
    "NumericError",
    "QuadratureError",
]
