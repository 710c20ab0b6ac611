"""Monte Carlo and brute-force oracles for the analytic results.

Randomness comes from a counter-based generator: every trial's draws are a
pure function of (seed, stream, trial index) through a SplitMix-style
finalizer, so estimates are bit-identical across reruns and independent of
evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .equilibrium import MarketParams, solve, spam_utility

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


@dataclass(frozen=True)
class McConfig:
    trials: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trial count must be at least 1")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    standard_error: float


def _finalize(z: np.ndarray) -> np.ndarray:
    z = z.copy()
    z ^= z >> np.uint64(30)
    z *= np.uint64(_MIX1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_MIX2)
    z ^= z >> np.uint64(31)
    return z


def _uniforms(cfg: McConfig, stream: int) -> np.ndarray:
    """One uniform(0, 1) draw per trial on an independent stream."""
    key = (cfg.seed + _GOLDEN * (stream + 1)) & _MASK
    key = int(_finalize(np.array([key], dtype=np.uint64))[0])
    counters = np.arange(cfg.trials, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = _finalize(np.uint64(key) + counters * np.uint64(_GOLDEN))
    return (z >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


def _binomial_estimate(successes: float, trials: int) -> McEstimate:
    p = successes / trials
    se = math.sqrt(max(p * (1.0 - p), 0.0) / trials)
    return McEstimate(mean=p, standard_error=se)


def simulate_claim_probability(spam_count: int, cfg: McConfig) -> McEstimate:
    """Empirical probability that spam claims the opportunity.

    Each trial places the opportunity uniformly into one of
    ``spam_count + 1`` relative positions; only the last one escapes.
    """
    if spam_count < 0 or spam_count != int(spam_count):
        raise ValueError("spam count must be a nonnegative integer")
    spam_count = int(spam_count)
    if spam_count == 0:
        return McEstimate(mean=0.0, standard_error=0.0)
    u = _uniforms(cfg, stream=0)
    positions = np.floor(u * (spam_count + 1)).astype(np.int64)
    np.clip(positions, 0, spam_count, out=positions)
    successes = int(np.count_nonzero(positions < spam_count))
    return _binomial_estimate(successes, cfg.trials)


def best_response_entry(params: MarketParams) -> int:
    """Integer spam level reached by sequential profitable entry.

    Entrants keep joining while the post-entry per-transaction profit is
    nonnegative; the stopping level brackets the continuous zero-profit
    solution.
    """
    eq = solve(params)
    limit = int(math.floor(params.bmax / params.s))
    count = 0
    while True:
        if count >= limit:
            raise RuntimeError("entry iteration exceeded the block's spam capacity")
        post_entry = spam_utility(params, count + 1)
        if post_entry < -1e-9 * max(1.0, eq.opportunity):
            break
        count += 1
    lo = math.floor(eq.spam_count)
    hi = math.ceil(eq.spam_count)
    if count not in (lo, hi):
        raise AssertionError(
            f"integer best response {count} does not bracket continuous {eq.spam_count}"
        )
    return count


def simulate_pfo_capture(
    spam_profile: Sequence[int],
    user_gas: Sequence[float],
    cfg: McConfig,
) -> List[McEstimate]:
    """Per-sub-block capture frequency of a randomly placed opportunity.

    The opportunity originates in a sub-block with probability proportional
    to its user gas and lands uniformly among that sub-block's spam slots.
    If it survives (placed after all local spam), the next sub-block with
    any spam captures it. Returns one frequency estimate per sub-block;
    multiplying by the block's opportunity value gives expected revenue.
    """
    n = len(spam_profile)
    if n == 0 or n > 8:
        raise ValueError("oracle supports 1..8 sub-blocks")
    if len(user_gas) != n:
        raise ValueError("user gas must cover every sub-block")
    spam = np.array([int(s) for s in spam_profile], dtype=np.int64)
    if np.any(spam < 0):
        raise ValueError("spam counts must be nonnegative integers")
    gas = np.array(user_gas, dtype=np.float64)
    if np.any(gas < 0.0) or gas.sum() <= 0.0:
        raise ValueError("user gas must be nonnegative with a positive total")

    # next sub-block (inclusive of none) holding spam, for spillover capture
    next_spam = np.full(n + 1, -1, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        next_spam[i] = i if spam[i] > 0 else next_spam[i + 1]

    cum = np.cumsum(gas)
    u_origin = _uniforms(cfg, stream=0) * cum[-1]
    origin = np.searchsorted(cum, u_origin, side="right")
    np.clip(origin, 0, n - 1, out=origin)
    u_pos = _uniforms(cfg, stream=1)
    slots = spam[origin] + 1
    position = np.floor(u_pos * slots).astype(np.int64)
    np.clip(position, 0, spam[origin], out=position)

    captured_here = position < spam[origin]
    capturer = np.where(captured_here, origin, next_spam[origin + 1])
    counts = np.bincount(capturer[capturer >= 0], minlength=n)
    return [_binomial_estimate(int(c), cfg.trials) for c in counts[:n]]
