"""Welfare, revenue, and externality metrics for spam and no-spam worlds."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence

from .demand import DemandCurve, gross_surplus
from .equilibrium import (
    Counterfactual,
    Equilibrium,
    MarketParams,
    counterfactual,
    solve,
)
from .solvers import DEFAULT_SOLVER, SolverConfig


@dataclass(frozen=True)
class CostParams:
    """Network cost coefficients: capacity provisioning and execution."""

    c1: float = 0.0
    c2: float = 1.0

    def __post_init__(self) -> None:
        if self.c1 < 0.0 or self.c2 < 0.0:
            raise ValueError("cost coefficients must be nonnegative")


@dataclass(frozen=True)
class MetricsReport:
    """Metric levels in both worlds plus the spam-attributable deltas."""

    w_user: float
    revenue: float
    externality: float
    w_user0: float
    revenue0: float
    externality0: float
    delta_w: float
    delta_r: float
    delta_e: float

    @property
    def w_plus_r(self) -> float:
        return self.w_user + self.revenue

    @property
    def w_plus_r0(self) -> float:
        return self.w_user0 + self.revenue0


def user_welfare(demand: DemandCurve, user_gas: float, price: float) -> float:
    """Consumer surplus of included users paying a uniform ``price``.

    The integral of (P(q) - price) over included quantities. Requires the
    price to be consistent with the marginal included user.
    """
    d0 = demand.intercept()
    if user_gas < 0.0 or user_gas > d0 * (1.0 + 1e-12):
        raise ValueError(f"user gas {user_gas} outside demand range [0, {d0}]")
    if user_gas == 0.0:
        return 0.0
    marginal = demand.inverse(user_gas)
    if price > marginal + 1e-9 * max(1.0, marginal):
        raise ValueError(
            f"price {price} exceeds marginal willingness to pay {marginal}"
        )
    return gross_surplus(demand, 0.0, user_gas) - price * user_gas


def validator_revenue(price: float, total_gas: float) -> float:
    """Gas sold times the clearing price."""
    if price < 0.0 or total_gas < 0.0:
        raise ValueError("price and total gas must be nonnegative")
    return price * total_gas


def externality(costs: CostParams, bmax: float, total_gas: float) -> float:
    """Capacity provisioning cost plus execution cost of the gas actually used."""
    if total_gas > bmax * (1.0 + 1e-12):
        raise ValueError(f"total gas {total_gas} exceeds capacity {bmax}")
    return costs.c1 * bmax + costs.c2 * total_gas


def report(
    params: MarketParams,
    costs: CostParams,
    config: SolverConfig = DEFAULT_SOLVER,
) -> MetricsReport:
    """Evaluate all metrics at the solved equilibrium and its no-spam benchmark."""
    eq = solve(params, config)
    cf = counterfactual(params)
    return report_from_solution(params, costs, eq, cf)


def report_from_solution(
    params: MarketParams,
    costs: CostParams,
    eq: Equilibrium,
    cf: Counterfactual,
) -> MetricsReport:
    w_user = user_welfare(params.demand, eq.user_gas, eq.clearing_price)
    revenue = validator_revenue(eq.clearing_price, eq.total_gas)
    ext = externality(costs, params.bmax, eq.total_gas)
    w_user0 = user_welfare(params.demand, cf.user_gas, cf.clearing_price)
    revenue0 = validator_revenue(cf.clearing_price, cf.user_gas)
    ext0 = externality(costs, params.bmax, cf.user_gas)
    return MetricsReport(
        w_user=w_user,
        revenue=revenue,
        externality=ext,
        w_user0=w_user0,
        revenue0=revenue0,
        externality0=ext0,
        delta_w=w_user - w_user0,
        delta_r=revenue - revenue0,
        delta_e=ext - ext0,
    )


@dataclass(frozen=True)
class SweepPoint:
    bmax: float
    equilibrium: Equilibrium
    metrics: MetricsReport


def sweep_bmax(
    params: MarketParams,
    costs: CostParams,
    grid: Sequence[float] | Iterable[float],
    config: SolverConfig = DEFAULT_SOLVER,
) -> List[SweepPoint]:
    """Solve and score every block size in ``grid`` (emitted in grid order)."""
    grid = list(grid)
    if not grid:
        raise ValueError("bmax grid must be nonempty")
    points: List[SweepPoint] = []
    for bmax in grid:
        p = params.with_bmax(bmax)
        eq = solve(p, config)
        m = report_from_solution(p, costs, eq, counterfactual(p))
        points.append(SweepPoint(bmax=bmax, equilibrium=eq, metrics=m))
    return points
