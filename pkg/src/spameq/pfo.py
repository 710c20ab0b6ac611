"""Approximate priority-fee ordering: sub-block equilibrium and metrics.

The block is split into ``n`` equal sub-blocks executed top first. Users
that opt into priority (a fraction ``v`` of demand) fill sub-blocks from
the top at a descending price ladder; the remaining users pay only the
block clearing price ``bar_g`` and fill the first sub-blocks with residual
space. Spam may buy its way into any sub-block at that sub-block's price.

Within a sub-block ordering is random, so spam there claims an opportunity
originating in the sub-block with probability S/(S+1). An opportunity that
survives a sub-block spills over and is claimed by the next sub-block that
contains any spam. Zero-profit levels are solved sub-block by sub-block
from the top, and the block clearing price is closed by a damped fixed
point on the total post-spam capacity (with a bisection fallback).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .demand import DemandCurve, gross_surplus
from .equilibrium import MarketParams, counterfactual
from .metrics import CostParams, MetricsReport
from .solvers import DEFAULT_SOLVER, SolverConfig


@dataclass(frozen=True)
class PfoParams:
    """Sub-block count and the fraction of users bidding for priority."""

    n: int
    v: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("sub-block count must be at least 1")
        if not 0.0 <= self.v <= 1.0:
            raise ValueError("priority fraction v must lie in [0, 1]")


@dataclass(frozen=True)
class PfoSubBlock:
    """State of one sub-block in a filled block (index 1 executes first)."""

    index: int
    spam_count: float
    priority_user_gas: float
    inclusion_user_gas: float
    residual: float
    price: float

    @property
    def user_gas(self) -> float:
        return self.priority_user_gas + self.inclusion_user_gas


@dataclass(frozen=True)
class FillResult:
    """Outcome of allocating users around a fixed spam profile."""

    sub_blocks: List[PfoSubBlock]
    first_open_index: int  # first sub-block with residual space; n + 1 if none
    user_gas: float


@dataclass(frozen=True)
class PfoEquilibrium:
    """Solved sub-block equilibrium with convergence metadata."""

    sub_blocks: List[PfoSubBlock]
    bar_g: float
    total_spam: float
    total_user_gas: float
    spam_gas: float
    converged: bool
    outer_iterations: int
    residual: float
    alternate_bar_g: Tuple[float, ...] = field(default=())

    @property
    def total_gas(self) -> float:
        return self.total_user_gas + self.spam_gas


def _subblock_capacity(params: MarketParams, pfo: PfoParams) -> float:
    return params.bmax / pfo.n


def fill_block(
    spam_profile: Sequence[float],
    bar_g: float,
    params: MarketParams,
    pfo: PfoParams,
) -> FillResult:
    """Allocate priority and inclusion-only users around a spam profile.

    Priority demand v * D(bar_g) fills sub-blocks top down; residual slots
    are then filled contiguously by inclusion-only users starting from the
    first sub-block with spare space. Sub-blocks fully occupied by
    priority users clear above ``bar_g``; all later ones clear at it.
    """
    n = pfo.n
    if len(spam_profile) != n:
        raise ValueError(f"spam profile must have {n} entries, got {len(spam_profile)}")
    if bar_g < params.gmin:
        raise ValueError(f"block clearing price {bar_g} below the floor {params.gmin}")
    cap_block = _subblock_capacity(params, pfo)
    corner = cap_block / params.s
    for s_i in spam_profile:
        if s_i < 0.0 or s_i > corner * (1.0 + 1e-9):
            raise ValueError(f"sub-block spam count {s_i} outside [0, {corner}]")

    curve = params.demand
    d0 = curve.intercept()
    demand_at_bar = curve.value(bar_g) if math.isfinite(bar_g) else 0.0
    priority_demand = pfo.v * demand_at_bar

    caps = [max(0.0, cap_block - params.s * s_i) for s_i in spam_profile]
    q_top: List[float] = []
    cum_top = 0.0
    for cap in caps:
        take = min(cap, max(0.0, priority_demand - cum_top))
        q_top.append(take)
        cum_top += take
    residuals = [cap - qt for cap, qt in zip(caps, q_top)]
    first_open = n + 1
    for i, res in enumerate(residuals, start=1):
        if res > 0.0:
            first_open = i
            break

    available = sum(caps)
    user_gas = min(demand_at_bar, available)
    inclusion_total = max(0.0, user_gas - cum_top)
    q_low = [0.0] * n
    rem = inclusion_total
    if first_open <= n:
        for i in range(first_open - 1, n):
            take = min(residuals[i], rem)
            q_low[i] = take
            rem -= take
            if rem <= 0.0:
                break

    blocks: List[PfoSubBlock] = []
    gamma_top = 0.0
    for i in range(1, n + 1):
        gamma_top += q_top[i - 1]
        if i < first_open and pfo.v > 0.0:
            price = max(bar_g, curve.inverse(min(gamma_top / pfo.v, d0)))
        else:
            price = bar_g
        blocks.append(
            PfoSubBlock(
                index=i,
                spam_count=spam_profile[i - 1],
                priority_user_gas=q_top[i - 1],
                inclusion_user_gas=q_low[i - 1],
                residual=residuals[i - 1],
                price=price,
            )
        )
    return FillResult(sub_blocks=blocks, first_open_index=first_open, user_gas=user_gas)


def subblock_utility(
    index: int,
    spam_count: float,
    prefix_spam: Sequence[float],
    bar_g: float,
    params: MarketParams,
    pfo: PfoParams,
) -> float:
    """Expected profit of ``spam_count`` spam in sub-block ``index``.

    Earlier sub-blocks hold the solved profile ``prefix_spam``; later ones
    are treated as spam-free. The profit combines capture of opportunities
    originating in the sub-block, spillover surviving from earlier blocks,
    and the inclusion cost at the sub-block price.
    """
    if not 1 <= index <= pfo.n:
        raise ValueError(f"sub-block index {index} outside 1..{pfo.n}")
    if len(prefix_spam) != index - 1:
        raise ValueError("prefix must cover exactly the earlier sub-blocks")
    profile = list(prefix_spam) + [spam_count] + [0.0] * (pfo.n - index)
    fill = fill_block(profile, bar_g, params, pfo)
    blocks = fill.sub_blocks
    k = params.r0 / params.demand.intercept()

    h = 0
    for j in range(index - 1, 0, -1):
        if prefix_spam[j - 1] > 0.0:
            h = j
            break
    spill = sum(blocks[j - 1].user_gas for j in range(h + 1, index))
    if h >= 1:
        spill += blocks[h - 1].user_gas / (prefix_spam[h - 1] + 1.0)

    own_gas = blocks[index - 1].user_gas
    own = own_gas * spam_count / (spam_count + 1.0) if spam_count > 0.0 else 0.0
    return k * (own + spill) - spam_count * params.s * blocks[index - 1].price


def _inner_pass(
    bar_g: float,
    params: MarketParams,
    pfo: PfoParams,
    config: SolverConfig,
) -> Tuple[List[float], float]:
    """Solve every sub-block's zero-profit level at a candidate ``bar_g``.

    Returns the spam profile and the total post-spam capacity. Uses an
    incremental O(1) evaluation of the fill state so a full reallocation is
    not recomputed for every candidate spam level.
    """
    n = pfo.n
    curve = params.demand
    d0 = curve.intercept()
    s = params.s
    v = pfo.v
    k = params.r0 / d0
    cap_block = _subblock_capacity(params, pfo)
    corner = cap_block / s
    demand_at_bar = curve.value(bar_g) if math.isfinite(bar_g) else 0.0
    priority_demand = v * demand_at_bar

    cum_top = 0.0  # priority gas in earlier sub-blocks
    cum_cap = 0.0  # post-spam capacity of earlier sub-blocks
    cum_res = 0.0  # residual space of earlier sub-blocks
    opened = False  # whether any earlier sub-block has residual space
    spill = 0.0  # spillover value reaching the current sub-block, in gas units
    profile: List[float] = []

    for i in range(1, n + 1):
        tail_cap = (n - i) * cap_block

        def utility(s_count: float) -> float:
            cap = max(0.0, cap_block - s * s_count)
            q_top = min(cap, max(0.0, priority_demand - cum_top))
            res = cap - q_top
            gamma_top = cum_top + q_top
            gamma_top_all = min(priority_demand, gamma_top + tail_cap)
            avail = cum_cap + cap + tail_cap
            qu = min(demand_at_bar, avail)
            inclusion_left = qu - gamma_top_all - cum_res
            q_low = max(0.0, min(res, inclusion_left))
            q_i = q_top + q_low
            if not opened and res <= 0.0 and v > 0.0:
                price = max(bar_g, curve.inverse(min(gamma_top / v, d0)))
            else:
                price = bar_g
            own = q_i * s_count / (s_count + 1.0) if s_count > 0.0 else 0.0
            return k * (own + spill) - s_count * s * price

        # entry at 0+ is profitable on positive spillover or positive
        # marginal profit k * Q_i(0) - s * price(0)
        cap0 = cap_block
        q_top0 = min(cap0, max(0.0, priority_demand - cum_top))
        res0 = cap0 - q_top0
        avail0 = cum_cap + cap0 + tail_cap
        qu0 = min(demand_at_bar, avail0)
        gamma_all0 = min(priority_demand, cum_top + q_top0 + tail_cap)
        q_low0 = max(0.0, min(res0, qu0 - gamma_all0 - cum_res))
        if not opened and res0 <= 0.0 and v > 0.0:
            price0 = max(bar_g, curve.inverse(min((cum_top + q_top0) / v, d0)))
        else:
            price0 = bar_g
        entry = spill > 0.0 or k * (q_top0 + q_low0) > s * price0
        s_star = _solve_subblock(utility, corner, entry, config)
        # re-evaluate the fill at the solved level and advance the state
        cap = max(0.0, cap_block - s * s_star)
        q_top = min(cap, max(0.0, priority_demand - cum_top))
        res = cap - q_top
        gamma_top_all = min(priority_demand, cum_top + q_top + tail_cap)
        avail = cum_cap + cap + tail_cap
        qu = min(demand_at_bar, avail)
        q_low = max(0.0, min(res, qu - gamma_top_all - cum_res))
        q_i = q_top + q_low

        if s_star > 0.0:
            spill = q_i / (s_star + 1.0)
        else:
            spill += q_i
        cum_top += q_top
        cum_cap += cap
        cum_res += res
        opened = opened or res > 0.0
        profile.append(s_star)

    return profile, cum_cap


def _solve_subblock(
    utility, corner: float, entry_forced: bool, config: SolverConfig
) -> float:
    """Smallest spam level at which profit first crosses from + to -."""
    if utility(corner) >= 0.0:
        # profit stays nonnegative up to the capacity boundary
        return corner
    n_points = config.scan_points
    step = corner / (n_points - 1)
    saw_positive = entry_forced
    lo = 0.0
    bracket = None
    for kk in range(1, n_points):
        x = kk * step if kk < n_points - 1 else corner
        u = utility(x)
        if saw_positive and u <= 0.0:
            bracket = (lo, x)
            break
        if u > 0.0:
            saw_positive = True
        lo = x
    if bracket is None:
        return 0.0
    a, b = bracket
    while b - a > config.s_tol:
        mid = 0.5 * (a + b)
        if utility(mid) > 0.0:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def _price_target(
    available: float, params: MarketParams
) -> float:
    d0 = params.demand.intercept()
    return max(params.gmin, params.demand.inverse(min(max(available, 0.0), d0)))


def solve_pfo(
    params: MarketParams,
    pfo: PfoParams,
    config: SolverConfig = DEFAULT_SOLVER,
    warm_start: Optional[float] = None,
) -> PfoEquilibrium:
    """Solve the sub-block spam equilibrium and its block clearing price.

    The outer loop iterates the damped fixed point on the clearing price;
    if it stalls or oscillates, the residual is bisected over the price
    range instead. A result is always returned; ``converged`` reports
    whether the fixed-point residual met tolerance.
    """
    if params.gmin <= 0.0:
        raise ValueError("the sub-block solver requires a positive price floor")

    def target_of(bar: float) -> Tuple[List[float], float]:
        profile, available = _inner_pass(bar, params, pfo, config)
        return profile, _price_target(available, params)

    g0 = counterfactual(params).clearing_price
    bar = max(params.gmin, warm_start if warm_start is not None else g0)
    best_bar, best_resid = bar, math.inf
    history: List[float] = []
    converged = False
    iterations = 0
    alternates: Tuple[float, ...] = ()

    for iterations in range(1, config.max_outer + 1):
        _, target = target_of(bar)
        resid = target - bar
        if abs(resid) < best_resid:
            best_bar, best_resid = bar, abs(resid)
        if abs(resid) <= config.fp_tol * max(1.0, bar):
            converged = True
            break
        history.append(abs(resid))
        if len(history) >= 40 and history[-1] > 0.9 * history[-40]:
            break  # stalled or oscillating; switch to bisection
        bar = bar + config.damping * resid

    if not converged:
        bar, alternates = _bisect_fixed_point(target_of, params, config)
        _, target = target_of(bar)
        resid = target - bar
        if abs(resid) < best_resid:
            best_bar, best_resid = bar, abs(resid)
        converged = best_resid <= config.fp_residual_tol * max(1.0, best_bar)
        bar = best_bar

    profile, _ = _inner_pass(bar, params, pfo, config)
    fill = fill_block(profile, bar, params, pfo)
    residual = _price_target(
        sum(max(0.0, _subblock_capacity(params, pfo) - params.s * s_i) for s_i in profile),
        params,
    ) - bar
    total_spam = sum(profile)
    return PfoEquilibrium(
        sub_blocks=fill.sub_blocks,
        bar_g=bar,
        total_spam=total_spam,
        total_user_gas=fill.user_gas,
        spam_gas=params.s * total_spam,
        converged=converged or abs(residual) <= config.fp_residual_tol * max(1.0, bar),
        outer_iterations=iterations,
        residual=residual,
        alternate_bar_g=alternates,
    )


def _bisect_fixed_point(
    target_of, params: MarketParams, config: SolverConfig
) -> Tuple[float, Tuple[float, ...]]:
    """Bisect bar - target(bar); report every root, lowest price first."""

    def phi(bar: float) -> float:
        return bar - target_of(bar)[1]

    lo = params.gmin
    hi = max(2.0 * params.gmin, 2.0 * counterfactual(params).clearing_price, 1.0)
    for _ in range(200):
        if phi(hi) >= 0.0:
            break
        hi *= 2.0
    xs = [lo + (hi - lo) * k / 63.0 for k in range(64)]
    values = [phi(x) for x in xs]
    roots: List[float] = []
    for k in range(1, 64):
        if values[k - 1] < 0.0 <= values[k]:
            a, b = xs[k - 1], xs[k]
            while b - a > config.fp_tol * max(1.0, b):
                mid = 0.5 * (a + b)
                if phi(mid) < 0.0:
                    a = mid
                else:
                    b = mid
            roots.append(0.5 * (a + b))
    if abs(values[0]) <= config.fp_tol * max(1.0, xs[0]):
        roots.insert(0, xs[0])
    if not roots:
        return hi, ()
    return roots[0], tuple(roots[1:])


@dataclass(frozen=True)
class PfoWorldMetrics:
    """Metric levels of one world (spam or spam-free) under sub-block pricing."""

    w_user: float
    revenue: float
    externality: float
    user_gas: float
    spam_gas: float


def pfo_metrics(
    eq: PfoEquilibrium,
    params: MarketParams,
    pfo: PfoParams,
    costs: CostParams,
    with_spam: bool = True,
) -> PfoWorldMetrics:
    """Welfare, revenue, and externality of the solved world.

    With ``with_spam=False`` the block is refilled spam-free at the no-spam
    clearing price, giving the counterfactual levels for the same params.
    """
    if with_spam:
        blocks = eq.sub_blocks
        bar_g = eq.bar_g
    else:
        bar_g = counterfactual(params).clearing_price
        blocks = fill_block([0.0] * pfo.n, bar_g, params, pfo).sub_blocks
    return _world_metrics(blocks, bar_g, params, pfo, costs)


def _world_metrics(
    blocks: Sequence[PfoSubBlock],
    bar_g: float,
    params: MarketParams,
    pfo: PfoParams,
    costs: CostParams,
) -> PfoWorldMetrics:
    curve = params.demand
    v = pfo.v
    welfare = 0.0
    if v > 0.0:
        cum = 0.0
        for b in blocks:
            if b.priority_user_gas > 0.0:
                lo, hi = cum, cum + b.priority_user_gas
                welfare += _segment_surplus(curve, lo, hi, v, b.price)
                cum = hi
    if v < 1.0:
        cum = 0.0
        for b in blocks:
            if b.inclusion_user_gas > 0.0:
                lo, hi = cum, cum + b.inclusion_user_gas
                welfare += _segment_surplus(curve, lo, hi, 1.0 - v, bar_g)
                cum = hi
    revenue = sum(b.price * (b.user_gas + params.s * b.spam_count) for b in blocks)
    user_gas = sum(b.user_gas for b in blocks)
    spam_gas = params.s * sum(b.spam_count for b in blocks)
    ext = costs.c1 * params.bmax + costs.c2 * (user_gas + spam_gas)
    return PfoWorldMetrics(
        w_user=welfare,
        revenue=revenue,
        externality=ext,
        user_gas=user_gas,
        spam_gas=spam_gas,
    )


def _segment_surplus(
    curve: DemandCurve, lo: float, hi: float, fraction: float, price: float
) -> float:
    """Surplus of users holding gas ranks [lo, hi] within a demand slice."""
    return fraction * gross_surplus(curve, lo / fraction, hi / fraction) - price * (
        hi - lo
    )


def pfo_report(
    params: MarketParams,
    pfo: PfoParams,
    costs: CostParams,
    config: SolverConfig = DEFAULT_SOLVER,
    warm_start: Optional[float] = None,
) -> Tuple[PfoEquilibrium, MetricsReport]:
    """Solve the sub-block equilibrium and assemble the two-world report."""
    eq = solve_pfo(params, pfo, config, warm_start=warm_start)
    spam_world = pfo_metrics(eq, params, pfo, costs, with_spam=True)
    base_world = pfo_metrics(eq, params, pfo, costs, with_spam=False)
    report = MetricsReport(
        w_user=spam_world.w_user,
        revenue=spam_world.revenue,
        externality=spam_world.externality,
        w_user0=base_world.w_user,
        revenue0=base_world.revenue,
        externality0=base_world.externality,
        delta_w=spam_world.w_user - base_world.w_user,
        delta_r=spam_world.revenue - base_world.revenue,
        delta_e=spam_world.externality - base_world.externality,
    )
    return eq, report


@dataclass(frozen=True)
class SpamLocationCdf:
    """Cumulative spam-gas share by normalized block position."""

    points: List[Tuple[float, float]]
    has_spam: bool


def spam_location_cdf(eq: PfoEquilibrium, params: MarketParams) -> SpamLocationCdf:
    """Cumulative spam share against position within the included gas.

    Spam inside a sub-block is treated as uniformly spread across that
    sub-block's gas, so the curve is piecewise linear between sub-block
    boundaries. A spam-free block yields a flat zero curve.
    """
    gas = [b.user_gas + params.s * b.spam_count for b in eq.sub_blocks]
    spam = [params.s * b.spam_count for b in eq.sub_blocks]
    total_gas = sum(gas)
    total_spam = sum(spam)
    if total_gas <= 0.0:
        return SpamLocationCdf(points=[(0.0, 0.0), (1.0, 0.0)], has_spam=False)
    points = [(0.0, 0.0)]
    pos = 0.0
    cum = 0.0
    for g_i, s_i in zip(gas, spam):
        pos += g_i / total_gas
        if total_spam > 0.0:
            cum += s_i / total_spam
        points.append((pos, cum))
    return SpamLocationCdf(points=points, has_spam=total_spam > 0.0)
