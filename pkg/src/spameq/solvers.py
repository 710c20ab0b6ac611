"""Scalar root-finding helpers and shared solver settings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from .errors import ConvergenceError


@dataclass(frozen=True)
class SolverConfig:
    """Numerical knobs used by the equilibrium and PFO solvers.

    Attributes:
        s_tol: absolute bisection tolerance on spam counts.
        scan_points: grid size used to bracket the first sign change.
        rel_match_tol: allowed relative gap between closed form and bisection.
        fp_tol: relative convergence tolerance of the block-price fixed point.
        fp_residual_tol: relative residual accepted as a converged fixed point.
        damping: damping factor of the fixed-point iteration.
        max_outer: iteration cap for the fixed-point loop.
        fd_step_frac: relative step for finite-difference derivatives.
        design_tol: absolute tolerance (gas units) for design-rule bisections.
    """

    s_tol: float = 1e-9
    scan_points: int = 64
    rel_match_tol: float = 1e-6
    fp_tol: float = 1e-8
    fp_residual_tol: float = 1e-6
    damping: float = 0.5
    max_outer: int = 500
    fd_step_frac: float = 1e-3
    design_tol: float = 1e-6


DEFAULT_SOLVER = SolverConfig()


def bisect_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    xtol: float,
    positive_at_lo: bool = True,
    max_iter: int = 256,
) -> float:
    """Bisect ``f`` on [lo, hi] where the sign changes from + to -.

    ``positive_at_lo`` lets callers assert the left sign without evaluating
    (useful when f(lo) is exactly zero but known positive just inside).
    """
    if not positive_at_lo and f(lo) <= 0.0:
        # swap orientation: root where f crosses - to +
        g = f
        f = lambda x: -g(x)  # noqa: E731
    for _ in range(max_iter):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def first_positive_to_negative(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    n_points: int,
) -> Tuple[Optional[Tuple[float, float]], bool]:
    """Scan a uniform grid for the first + to - sign change of ``f``.

    Returns ``(bracket, saw_positive)`` where ``bracket`` is the (a, b) pair
    around the first crossing or None when no crossing was found.
    """
    if n_points < 2:
        raise ValueError("need at least two scan points")
    step = (hi - lo) / (n_points - 1)
    saw_positive = False
    x_prev = lo
    v_prev = f(lo)
    if v_prev > 0.0:
        saw_positive = True
    for k in range(1, n_points):
        x = lo + k * step if k < n_points - 1 else hi
        v = f(x)
        if saw_positive and v <= 0.0:
            return (x_prev, x), True
        if v > 0.0:
            saw_positive = True
        x_prev, v_prev = x, v
    return None, saw_positive


def expanding_upper_bracket(
    f: Callable[[float], float],
    start: float,
    *,
    factor: float = 2.0,
    max_doublings: int = 200,
) -> float:
    """Grow ``start`` geometrically until ``f`` becomes nonnegative."""
    hi = start
    for _ in range(max_doublings):
        if f(hi) >= 0.0:
            return hi
        hi *= factor
    raise ConvergenceError("failed to bracket a root while expanding upward")
