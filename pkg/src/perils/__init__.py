"""Returns to science under time-of-perils risk."""

from .better_science import (
    better_science_breakeven,
    better_science_impact,
    breakeven_lambda_better,
    capability_ratio,
    utility_scaling,
)
from .calibration import ForecastSet, PerilCalibration, calibrate, calibrate_preset
from .config import ScenarioConfig, load_config, parse_config_text
from .core_model import (
    ImpactDecomposition,
    ModelParams,
    ModelTerms,
    breakeven_peril,
    brute_force_impact,
    impact_decomposition,
    model_terms,
    too_late_impact,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DivergenceError,
    DomainError,
    HorizonError,
    NoRootError,
    PerilsError,
)
from .extinction import ExtinctionParams, breakeven_lambda, extinction_adjusted_impact, rho_for_lambda
from .realistic import SurvivalModel, fit_survival, life_expectancy, realistic_breakeven, realistic_impact, survival_share
from .roi import back_of_envelope, to_op_multiple

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DivergenceError",
    "DomainError",
    "ExtinctionParams",
    "ForecastSet",
    "HorizonError",
    "ImpactDecomposition",
    "ModelParams",
    "ModelTerms",
    "NoRootError",
    "PerilCalibration",
    "PerilsError",
    "ScenarioConfig",
    "SurvivalModel",
    "back_of_envelope",
    "better_science_breakeven",
    "better_science_impact",
    "breakeven_lambda",
    "breakeven_lambda_better",
    "breakeven_peril",
    "brute_force_impact",
    "calibrate",
    "calibrate_preset",
    "capability_ratio",
    "extinction_adjusted_impact",
    "fit_survival",
    "impact_decomposition",
    "life_expectancy",
    "load_config",
    "model_terms",
    "parse_config_text",
    "realistic_breakeven",
    "realistic_impact",
    "rho_for_lambda",
    "survival_share",
    "to_op_multiple",
    "too_late_impact",
    "utility_scaling",
]
