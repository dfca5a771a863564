"""Capacity-constrained duopoly pricing under demand uncertainty: equilibrium
analytics, synthetic posted-price panels, and dispersion econometrics."""

from .equilibrium import (
    DemandState,
    DeviationReport,
    MarketParams,
    MixedStrategy,
    TieBreakRule,
    check_mixed_equilibrium,
    check_no_capacity_candidates,
    check_no_pure_symmetric,
    equilibrium_cdf,
    equilibrium_density,
    equilibrium_moments,
    equilibrium_profit,
    equilibrium_quantile,
    equilibrium_support,
    expected_profit,
    pure_equilibrium_known_state,
    pure_equilibrium_no_capacity,
)
from .panel import PriceObservation, read_panel_csv, write_panel_csv
from .simulator import (
    SelloutProcess,
    SimulationConfig,
    apply_sellout,
    linear_alpha_schedule,
    simulate_panel,
)
from .dispersion import DispersionRecord, compute_dispersion, mean_price_by_lead_time
from .regression import RegressionResult, absorb_fixed_effects, ols, ols_absorbed

__all__ = [
    "DemandState",
    "DeviationReport",
    "DispersionRecord",
    "MarketParams",
    "MixedStrategy",
    "PriceObservation",
    "RegressionResult",
    "SelloutProcess",
    "SimulationConfig",
    "TieBreakRule",
    "absorb_fixed_effects",
    "apply_sellout",
    "check_mixed_equilibrium",
    "check_no_capacity_candidates",
    "check_no_pure_symmetric",
    "compute_dispersion",
    "equilibrium_cdf",
    "equilibrium_density",
    "equilibrium_moments",
    "equilibrium_profit",
    "equilibrium_quantile",
    "equilibrium_support",
    "expected_profit",
    "linear_alpha_schedule",
    "mean_price_by_lead_time",
    "ols",
    "ols_absorbed",
    "pure_equilibrium_known_state",
    "pure_equilibrium_no_capacity",
    "read_panel_csv",
    "simulate_panel",
    "write_panel_csv",
]
