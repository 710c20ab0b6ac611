"""Spam-MEV equilibrium engine for blockspace design.

Computes competitive spam equilibria under random and priority-fee
transaction ordering, the induced welfare / revenue / externality metrics,
parameter-setting rules for block capacity and the gas price floor, demand
scaling sweeps, and Monte Carlo oracles that validate the analytic
results.
"""

from .demand import (
    CustomDemand,
    DemandCurve,
    ExponentialDemand,
    LinearDemand,
    gross_surplus,
    mmus_condition,
)
from .equilibrium import (
    Counterfactual,
    Equilibrium,
    MarketParams,
    Regime,
    b_plat,
    claim_probability,
    clearing_price_given_spam,
    counterfactual,
    solve,
    spam_utility,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    InfeasibleSpamError,
    NonMonotoneShareWarning,
    SpamEqError,
    UnboundedPlateauError,
)
from .design_rules import (
    choose_bmax_mmus,
    choose_gmin_baseline,
    choose_gmin_refined,
    entry_bmax,
    entry_threshold_price,
    marginal_user_share,
    mu_user,
)
from .mc_oracle import (
    McConfig,
    McEstimate,
    best_response_entry,
    simulate_claim_probability,
    simulate_pfo_capture,
)
from .metrics import (
    CostParams,
    MetricsReport,
    SweepPoint,
    externality,
    report,
    sweep_bmax,
    user_welfare,
    validator_revenue,
)
from .pfo import (
    PfoEquilibrium,
    PfoParams,
    PfoSubBlock,
    SpamLocationCdf,
    fill_block,
    pfo_metrics,
    pfo_report,
    solve_pfo,
    spam_location_cdf,
    subblock_utility,
)
from .scaling import ScalingPoint, sweep_lambda
from .solvers import DEFAULT_SOLVER, SolverConfig

__version__ = "0.1.0"

__all__ = [
    "CustomDemand",
    "DemandCurve",
    "ExponentialDemand",
    "LinearDemand",
    "gross_surplus",
    "mmus_condition",
    "Counterfactual",
    "Equilibrium",
    "MarketParams",
    "Regime",
    "b_plat",
    "claim_probability",
    "clearing_price_given_spam",
    "counterfactual",
    "solve",
    "spam_utility",
    "ConfigError",
    "ConvergenceError",
    "InfeasibleSpamError",
    "NonMonotoneShareWarning",
    "SpamEqError",
    "UnboundedPlateauError",
    "choose_bmax_mmus",
    "choose_gmin_baseline",
    "choose_gmin_refined",
    "entry_bmax",
    "entry_threshold_price",
    "marginal_user_share",
    "mu_user",
    "McConfig",
    "McEstimate",
    "best_response_entry",
    "simulate_claim_probability",
    "simulate_pfo_capture",
    "CostParams",
    "MetricsReport",
    "SweepPoint",
    "externality",
    "report",
    "sweep_bmax",
    "user_welfare",
    "validator_revenue",
    "PfoEquilibrium",
    "PfoParams",
    "PfoSubBlock",
    "SpamLocationCdf",
    "fill_block",
    "pfo_metrics",
    "pfo_report",
    "solve_pfo",
    "spam_location_cdf",
    "subblock_utility",
    "ScalingPoint",
    "sweep_lambda",
    "DEFAULT_SOLVER",
    "SolverConfig",
]
