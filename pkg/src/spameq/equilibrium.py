"""Competitive spam equilibrium under random transaction ordering.

A block of capacity ``bmax`` serves price-sensitive user demand plus spam
transactions of ``s`` gas each that compete for a single opportunity whose
value is proportional to included user gas. Spam enters until the expected
profit of the marginal transaction is zero. Depending on parameters the
equilibrium lands in one of three regimes:

* ``NO_ENTRY``: the opportunity is too small relative to inclusion cost.
* ``SLACK_AT_FLOOR``: the clearing price sits at the protocol floor and the
  block has spare capacity.
* ``CONGESTED``: spam and users fill the block and push the price above
  the floor.

For linear demand the closed-form solution is evaluated and cross-checked
against a bracketed bisection of the zero-profit condition; for any other
demand curve the bisection result is used directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .demand import DemandCurve, LinearDemand
from .errors import ConvergenceError, InfeasibleSpamError, UnboundedPlateauError
from .solvers import DEFAULT_SOLVER, SolverConfig, bisect_root, first_positive_to_negative


@dataclass(frozen=True)
class MarketParams:
    """Market constants and design levers.

    Attributes:
        demand: user demand curve.
        s: gas reserved by one spam transaction.
        r0: opportunity value when all baseline demand is included.
        gmin: protocol price floor per gas unit.
        bmax: block capacity in gas units.
    """

    demand: DemandCurve
    s: float
    r0: float
    gmin: float
    bmax: float

    def __post_init__(self) -> None:
        if self.s <= 0.0:
            raise ValueError("spam gas size s must be positive")
        if self.r0 < 0.0:
            raise ValueError("opportunity r0 must be nonnegative")
        if self.gmin < 0.0:
            raise ValueError("price floor gmin must be nonnegative")
        if self.bmax <= 0.0:
            raise ValueError("block capacity bmax must be positive")

    def with_bmax(self, bmax: float) -> "MarketParams":
        return replace(self, bmax=bmax)


class Regime(str, Enum):
    NO_ENTRY = "no_entry"
    SLACK_AT_FLOOR = "slack_at_floor"
    CONGESTED = "congested"


@dataclass(frozen=True)
class Equilibrium:
    """Solved spam equilibrium for one parameter point."""

    regime: Regime
    spam_count: float
    clearing_price: float
    user_gas: float
    spam_gas: float
    total_gas: float
    opportunity: float
    unbounded_spam: bool = False


@dataclass(frozen=True)
class Counterfactual:
    """No-spam benchmark world at the same parameters."""

    clearing_price: float
    user_gas: float


def claim_probability(spam_count: float) -> float:
    """Probability that the opportunity is claimed by one of ``spam_count`` spam txs."""
    if spam_count < 0.0:
        raise ValueError("spam count must be nonnegative")
    return spam_count / (spam_count + 1.0)


def clearing_price_given_spam(params: MarketParams, spam_count: float) -> float:
    """Clearing price when ``spam_count`` spam transactions occupy the block."""
    if spam_count < 0.0 or params.s * spam_count > params.bmax * (1.0 + 1e-12):
        raise InfeasibleSpamError(
            f"spam gas {params.s * spam_count} does not fit in block {params.bmax}"
        )
    remaining = params.bmax - params.s * spam_count
    d0 = params.demand.intercept()
    arg = min(max(remaining, 0.0), d0)
    return max(params.gmin, params.demand.inverse(arg))


def spam_utility(params: MarketParams, spam_count: float) -> float:
    """Aggregate expected profit of ``spam_count`` spam transactions."""
    g = clearing_price_given_spam(params, spam_count)
    remaining = max(0.0, params.bmax - params.s * spam_count)
    user_gas = min(params.demand.value(g) if math.isfinite(g) else 0.0, remaining)
    r = params.r0 * user_gas / params.demand.intercept()
    return claim_probability(spam_count) * r - spam_count * params.s * g


def counterfactual(params: MarketParams) -> Counterfactual:
    """Price and included user gas in the world without spam."""
    d0 = params.demand.intercept()
    g0 = max(params.gmin, params.demand.inverse(min(params.bmax, d0)))
    qu0 = min(params.bmax, params.demand.value(params.gmin))
    return Counterfactual(clearing_price=g0, user_gas=qu0)


def b_plat(params: MarketParams) -> float:
    """Smallest block size at which the clearing price settles at the floor.

    Equals demand at the floor plus the spam gas that remains profitable
    there. Diverges as the floor goes to zero.
    """
    if params.gmin <= 0.0:
        raise UnboundedPlateauError("plateau block size diverges at a zero price floor")
    d_floor = params.demand.value(params.gmin)
    d0 = params.demand.intercept()
    spam_gas = 0.0
    if d_floor > 0.0:
        spam_gas = max(0.0, params.r0 * d_floor / (d0 * params.gmin) - params.s)
    return d_floor + spam_gas


def _bisect_entry_root(params: MarketParams, config: SolverConfig) -> float:
    """Root of the zero-profit condition, bracketing the first + to - crossing.

    Entry is assumed profitable near zero; the scan treats S = 0 as the
    positive edge so that roots smaller than one grid step are still found.
    """
    hi = params.bmax / params.s

    def u(s_count: float) -> float:
        return spam_utility(params, s_count)

    step = hi / (config.scan_points - 1)
    bracket = None
    prev = 0.0
    for k in range(1, config.scan_points):
        x = k * step if k < config.scan_points - 1 else hi
        if u(x) <= 0.0:
            bracket = (prev, x)
            break
        prev = x
    if bracket is None:
        raise ConvergenceError("zero-profit condition has no sign change in [0, bmax/s]")
    return bisect_root(u, bracket[0], bracket[1], xtol=config.s_tol)


def _linear_closed_form(params: MarketParams, cf: Counterfactual) -> tuple[float, Regime]:
    curve = params.demand
    assert isinstance(curve, LinearDemand)
    d0, beta = curve.d0, curve.beta
    if (
        params.gmin > 0.0
        and cf.clearing_price == params.gmin
        and params.bmax >= b_plat(params)
    ):
        d_floor = curve.value(params.gmin)
        s_star = params.r0 * d_floor / (d0 * params.s * params.gmin) - 1.0
        return s_star, Regime.SLACK_AT_FLOOR
    delta = d0 - params.bmax
    a = params.s - delta + beta * params.r0 / d0
    b = params.s + delta + beta * params.r0 / d0
    s_star = (math.sqrt(a * a + 4.0 * beta * params.r0) - b) / (2.0 * params.s)
    return s_star, Regime.CONGESTED


def solve(params: MarketParams, config: SolverConfig = DEFAULT_SOLVER) -> Equilibrium:
    """Solve the zero-profit spam equilibrium.

    Raises:
        ConvergenceError: when the closed form and the bisection route
            disagree beyond ``config.rel_match_tol`` or the zero-profit
            residual is out of tolerance.
    """
    cf = counterfactual(params)
    d0 = params.demand.intercept()
    r_no_spam = params.r0 * cf.user_gas / d0
    if r_no_spam <= params.s * cf.clearing_price:
        return Equilibrium(
            regime=Regime.NO_ENTRY,
            spam_count=0.0,
            clearing_price=cf.clearing_price,
            user_gas=cf.user_gas,
            spam_gas=0.0,
            total_gas=cf.user_gas,
            opportunity=r_no_spam,
        )

    s_bisect = _bisect_entry_root(params, config)
    unbounded = False
    if isinstance(params.demand, LinearDemand) and params.gmin > 0.0:
        s_star, regime = _linear_closed_form(params, cf)
        if abs(s_star - s_bisect) > config.rel_match_tol * max(1.0, abs(s_star)):
            raise ConvergenceError(
                "closed form and bisection disagree: "
                f"{s_star!r} vs {s_bisect!r} at bmax={params.bmax}"
            )
    else:
        s_star = s_bisect
        g_at_root = clearing_price_given_spam(params, s_star)
        if g_at_root > params.gmin:
            regime = Regime.CONGESTED
        else:
            regime = Regime.SLACK_AT_FLOOR
            unbounded = params.gmin <= 0.0

    g_star = clearing_price_given_spam(params, s_star)
    remaining = max(0.0, params.bmax - params.s * s_star)
    user_gas = min(params.demand.value(g_star), remaining)
    opportunity = params.r0 * user_gas / d0
    residual = spam_utility(params, s_star)
    if abs(residual) > 1e-6 * max(1.0, opportunity):
        raise ConvergenceError(
            f"zero-profit residual {residual} out of tolerance at bmax={params.bmax}"
        )
    spam_gas = params.s * s_star
    return Equilibrium(
        regime=regime,
        spam_count=s_star,
        clearing_price=g_star,
        user_gas=user_gas,
        spam_gas=spam_gas,
        total_gas=user_gas + spam_gas,
        opportunity=opportunity,
        unbounded_spam=unbounded,
    )
