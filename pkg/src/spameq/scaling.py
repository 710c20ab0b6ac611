"""Spam share of included gas when user demand scales up.

Demand is multiplied by a factor ``lam`` so the number of users at every
price grows proportionally. By default the opportunity parameter scales
along with demand (the per-user opportunity density is held constant);
set ``scale_r0=False`` to keep the total opportunity budget fixed instead,
in which case the spam share vanishes as demand grows.

Three block-size rules are compared: sizing at the welfare plateau,
sizing by the minimum-marginal-user-share rule, and keeping the plateau
benchmark while ordering by priority fees.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, List, Optional, Sequence

from .design_rules import choose_bmax_mmus
from .equilibrium import MarketParams, b_plat, solve
from .pfo import PfoParams, solve_pfo
from .solvers import DEFAULT_SOLVER, SolverConfig

RULES = ("plateau", "mmus", "pfo")


@dataclass(frozen=True)
class ScalingPoint:
    lam: float
    rule: str
    bmax_used: float
    spam_count: float
    spam_gas: float
    user_gas: float
    rho_spam: float


def sweep_lambda(
    params: MarketParams,
    rule: str,
    lambdas: Sequence[float] | Iterable[float],
    *,
    eta: Optional[float] = None,
    pfo: Optional[PfoParams] = None,
    scale_r0: bool = True,
    config: SolverConfig = DEFAULT_SOLVER,
) -> List[ScalingPoint]:
    """Spam share of included gas along a demand-scaling grid."""
    if rule not in RULES:
        raise ValueError(f"rule must be one of {RULES}, got {rule!r}")
    if rule == "mmus" and eta is None:
        raise ValueError("the mmus rule requires eta")
    if rule == "pfo" and pfo is None:
        raise ValueError("the pfo rule requires sub-block parameters")
    lambdas = list(lambdas)
    if any(lam < 1.0 for lam in lambdas):
        raise ValueError("scaling factors must be >= 1")

    points: List[ScalingPoint] = []
    warm: Optional[float] = None
    for lam in lambdas:
        scaled = replace(
            params,
            demand=params.demand.scale(lam),
            r0=params.r0 * lam if scale_r0 else params.r0,
        )
        if rule == "mmus":
            bmax = choose_bmax_mmus(scaled, eta, config)
        else:
            bmax = b_plat(scaled)
        scaled = scaled.with_bmax(bmax)
        if rule == "pfo":
            eq = solve_pfo(scaled, pfo, config, warm_start=warm)
            warm = eq.bar_g
            spam_count, spam_gas, user_gas = eq.total_spam, eq.spam_gas, eq.total_user_gas
        else:
            req = solve(scaled, config)
            spam_count, spam_gas, user_gas = req.spam_count, req.spam_gas, req.user_gas
        included = spam_gas + user_gas
        rho = spam_gas / included if included > 0.0 else 0.0
        points.append(
            ScalingPoint(
                lam=lam,
                rule=rule,
                bmax_used=bmax,
                spam_count=spam_count,
                spam_gas=spam_gas,
                user_gas=user_gas,
                rho_spam=rho,
            )
        )
    return points
