"""Parameter-setting rules for block capacity and the gas price floor.

Two one-dimensional rules are implemented in each direction:

* Block size for a fixed floor: stop at the welfare plateau, or stop
  earlier once the marginal unit of capacity no longer serves at least an
  ``eta`` fraction of users (minimum marginal user share).
* Floor for a fixed block size: the baseline floor makes the current block
  just sufficient; the refined floor additionally requires that capacity
  newly admitted by lowering the floor stays sufficiently user-heavy.
"""

from __future__ import annotations

import math
import warnings
from typing import Optional

from .demand import LinearDemand, mmus_condition
from .equilibrium import MarketParams, Regime, b_plat, solve
from .errors import NonMonotoneShareWarning
from .solvers import DEFAULT_SOLVER, SolverConfig

_plateau_block_size = b_plat  # the baseline block-size rule is the plateau itself


def entry_bmax(params: MarketParams, config: SolverConfig = DEFAULT_SOLVER) -> float:
    """Smallest block size at which spam entry becomes profitable.

    Returns infinity when spam never enters at the given floor.
    """
    curve = params.demand
    d0 = curve.intercept()
    d_floor = curve.value(params.gmin)
    if params.r0 * d_floor / d0 <= params.s * params.gmin or d_floor <= 0.0:
        return math.inf
    if isinstance(curve, LinearDemand):
        return params.s * d0 * d0 / (curve.beta * params.r0 + params.s * d0)

    def gap(bmax: float) -> float:
        g0 = max(params.gmin, curve.inverse(min(bmax, d0)))
        qu0 = min(bmax, d_floor)
        return params.r0 * qu0 / d0 - params.s * g0

    lo, hi = 1e-9 * d_floor, d_floor
    if gap(lo) >= 0.0:
        return lo
    while hi - lo > config.design_tol:
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def marginal_user_share(
    params: MarketParams, config: SolverConfig = DEFAULT_SOLVER
) -> float:
    """Fraction of the next unit of block capacity that goes to users.

    Closed form for linear demand in the congested regime; central finite
    differences otherwise. Exactly one in the no-entry region and zero at
    or beyond the plateau block size.
    """
    if params.gmin > 0.0 and params.bmax >= b_plat(params):
        return 0.0
    eq = solve(params, config)
    if eq.regime is Regime.NO_ENTRY:
        return 1.0
    curve = params.demand
    if isinstance(curve, LinearDemand) and eq.regime is Regime.CONGESTED:
        d0, beta = curve.d0, curve.beta
        x = params.bmax - d0 + params.s + beta * params.r0 / d0
        return 0.5 * (1.0 - x / math.sqrt(x * x + 4.0 * beta * params.r0))
    h = config.fd_step_frac * params.bmax
    qu_hi = solve(params.with_bmax(params.bmax + h), config).user_gas
    qu_lo = solve(params.with_bmax(params.bmax - h), config).user_gas
    return (qu_hi - qu_lo) / (2.0 * h)


def choose_bmax_mmus(
    params: MarketParams, eta: float, config: SolverConfig = DEFAULT_SOLVER
) -> float:
    """Largest block size whose marginal capacity still serves an ``eta`` user share.

    Falls back to a grid scan (with a warning) if the curvature condition
    that guarantees a monotone share fails somewhere in the search bracket.
    """
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    plateau = b_plat(params)
    if plateau <= 0.0:
        return plateau
    lo = entry_bmax(params, config)
    if not math.isfinite(lo):
        # spam never enters at this floor; capacity is useful up to the plateau
        return plateau
    share_at_plateau = marginal_user_share(params.with_bmax(plateau * (1.0 - 1e-9)), config)
    if eta <= share_at_plateau:
        return plateau
    share_at_entry = marginal_user_share(params.with_bmax(lo * (1.0 + 1e-9)), config)
    if eta >= share_at_entry:
        return lo

    curve = params.demand
    if isinstance(curve, LinearDemand):
        d0, beta = curve.d0, curve.beta
        c = 1.0 - 2.0 * eta
        x = c * math.sqrt(4.0 * beta * params.r0 / (1.0 - c * c))
        target = x + d0 - params.s - beta * params.r0 / d0
        return min(max(target, lo), plateau)

    if not _share_is_monotone(params, lo, plateau, config):
        warnings.warn(
            "marginal user share is not monotone for this demand curve; "
            "falling back to a grid scan",
            NonMonotoneShareWarning,
        )
        return _grid_scan_bmax(params, eta, lo, plateau, config)

    a, b = lo, plateau
    while b - a > config.design_tol:
        mid = 0.5 * (a + b)
        if marginal_user_share(params.with_bmax(mid), config) >= eta:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def _share_is_monotone(
    params: MarketParams, lo: float, hi: float, config: SolverConfig
) -> bool:
    for k in range(17):
        bmax = lo + (hi - lo) * (k + 0.5) / 17.0
        g_star = solve(params.with_bmax(bmax), config).clearing_price
        if mmus_condition(params.demand, g_star) >= 0.0:
            return False
    return True


def _grid_scan_bmax(
    params: MarketParams, eta: float, lo: float, hi: float, config: SolverConfig
) -> float:
    best = lo
    for k in range(513):
        bmax = lo + (hi - lo) * k / 512.0
        if marginal_user_share(params.with_bmax(bmax), config) >= eta:
            best = max(best, bmax)
    return best


def entry_threshold_price(
    params: MarketParams, config: SolverConfig = DEFAULT_SOLVER
) -> float:
    """Floor price above which spam entry is unprofitable even with slack space."""
    curve = params.demand
    d0 = curve.intercept()
    if params.r0 <= 0.0:
        return 0.0
    if isinstance(curve, LinearDemand):
        return params.r0 * d0 / (d0 * params.s + curve.beta * params.r0)

    def gap(g: float) -> float:
        return params.r0 * curve.value(g) / d0 - params.s * g

    hi = 1.0
    for _ in range(200):
        if gap(hi) < 0.0:
            break
        hi *= 2.0
    lo = 0.0
    while hi - lo > 1e-12 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def choose_gmin_baseline(
    params: MarketParams, bmax: float, config: SolverConfig = DEFAULT_SOLVER
) -> float:
    """The unique floor at which the given block size is exactly the plateau."""
    if bmax <= 0.0:
        raise ValueError(f"block size must be positive, got {bmax}")
    curve = params.demand
    d0 = curve.intercept()
    result: Optional[float] = None
    if isinstance(curve, LinearDemand):
        beta = curve.beta
        no_entry_price = (d0 - bmax) / beta
        if no_entry_price >= entry_threshold_price(params, config):
            result = no_entry_price
        else:
            x = bmax - d0 + params.s + beta * params.r0 / d0
            result = (-x + math.sqrt(x * x + 4.0 * beta * params.r0)) / (2.0 * beta)

    bisected = _bisect_gmin_on_plateau(params, bmax, config)
    if result is None:
        return bisected
    if abs(result - bisected) > config.rel_match_tol * max(1.0, abs(result)):
        raise ValueError(
            f"closed-form floor {result} disagrees with bisection {bisected}"
        )
    return result


def _bisect_gmin_on_plateau(
    params: MarketParams, bmax: float, config: SolverConfig
) -> float:
    def plateau(g: float) -> float:
        return b_plat(MarketParams(params.demand, params.s, params.r0, g, bmax))

    lo = 1e-12
    for _ in range(200):
        if plateau(lo) > bmax:
            break
        lo *= 0.5
    hi = max(1.0, 2.0 * params.gmin)
    for _ in range(200):
        if plateau(hi) < bmax:
            break
        hi *= 2.0
    while hi - lo > 1e-12 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if plateau(mid) > bmax:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def mu_user(params: MarketParams) -> Optional[float]:
    """User share of capacity newly admitted by lowering the floor.

    Returns None in the congested region, where an infinitesimal floor cut
    does not change the allocation and the share is undefined.
    """
    curve = params.demand
    d0 = curve.intercept()
    g = params.gmin
    d_floor = curve.value(g) if g > 0.0 else d0
    entry_at_floor = params.r0 * d_floor / d0 > params.s * g
    if not entry_at_floor:
        return 1.0 if params.bmax >= d_floor else None
    if g > 0.0 and params.bmax >= b_plat(params):
        slope = curve.derivative(g, 1)
        user_term = -slope
        spam_term = -(params.r0 / d0) * (slope * g - curve.value(g)) / (g * g)
        return user_term / (user_term + spam_term)
    return None


def choose_gmin_refined(
    params: MarketParams,
    bmax: float,
    eta: float,
    config: SolverConfig = DEFAULT_SOLVER,
) -> float:
    """Floor choice: lower the floor only while the block stays sufficient
    and newly admitted capacity keeps at least an ``eta`` user share."""
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    baseline = choose_gmin_baseline(params, bmax, config)
    threshold = entry_threshold_price(params, config)
    if eta == 1.0:
        warnings.warn(
            "eta = 1 makes the user-share floor diverge; returning the entry threshold",
            NonMonotoneShareWarning,
        )
        g_eta = math.inf
    else:
        g_eta = _floor_for_user_share(params, eta, threshold)
    return max(baseline, min(threshold, g_eta))


def _floor_for_user_share(params: MarketParams, eta: float, threshold: float) -> float:
    curve = params.demand
    if isinstance(curve, LinearDemand):
        return math.sqrt(eta * params.r0 / (curve.beta * (1.0 - eta)))

    def share(g: float) -> float:
        slope = curve.derivative(g, 1)
        user_term = -slope
        spam_term = -(params.r0 / curve.intercept()) * (
            slope * g - curve.value(g)
        ) / (g * g)
        return user_term / (user_term + spam_term)

    if share(threshold) < eta:
        return math.inf
    lo, hi = 1e-12, threshold
    while hi - lo > 1e-12 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if share(mid) < eta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
