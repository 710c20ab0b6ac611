"""Parametric demand curves for blockspace markets.

A demand curve maps a gas price ``g`` to the quantity of gas demanded at
that price. Three families are supported:

* ``LinearDemand``: D(g) = max(0, d0 - beta * g), clamped at zero past
  d0 / beta because quantities are physical gas.
* ``ExponentialDemand``: D(g) = d0 * exp(-lam * g).
* ``CustomDemand``: arbitrary decreasing curve supplied as value, slope,
  and curvature callables. The callables are trusted for derivatives; no
  numeric differentiation is applied, so curvature-based checks stay exact.

Every curve exposes ``value``, ``inverse``, ``derivative``, ``scale``, and
``intercept``. ``mmus_condition`` evaluates the curvature expression that
governs whether the marginal user share is decreasing in block size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable


class DemandCurve:
    """Base interface for demand curves."""

    def value(self, g: float) -> float:
        raise NotImplementedError

    def inverse(self, q: float) -> float:
        raise NotImplementedError

    def derivative(self, g: float, order: int = 1) -> float:
        raise NotImplementedError

    def scale(self, factor: float) -> "DemandCurve":
        raise NotImplementedError

    def intercept(self) -> float:
        """Quantity demanded at a zero price, D(0)."""
        return self.value(0.0)


def _check_price(g: float) -> None:
    if g < 0.0:
        raise ValueError(f"gas price must be nonnegative, got {g}")


def _check_order(order: int) -> None:
    if order not in (1, 2):
        raise ValueError(f"derivative order must be 1 or 2, got {order}")


def _check_scale(factor: float) -> None:
    if factor < 1.0:
        raise ValueError(f"scale factor must be >= 1, got {factor}")


@dataclass(frozen=True)
class LinearDemand(DemandCurve):
    """D(g) = max(0, d0 - beta * g)."""

    d0: float
    beta: float

    def __post_init__(self) -> None:
        if self.d0 <= 0.0 or self.beta <= 0.0:
            raise ValueError("linear demand requires d0 > 0 and beta > 0")

    def value(self, g: float) -> float:
        _check_price(g)
        return max(0.0, self.d0 - self.beta * g)

    def inverse(self, q: float) -> float:
        if q < 0.0 or q > self.d0 * (1.0 + 1e-12):
            raise ValueError(f"quantity {q} outside demand range [0, {self.d0}]")
        return (self.d0 - min(q, self.d0)) / self.beta

    def derivative(self, g: float, order: int = 1) -> float:
        _check_price(g)
        _check_order(order)
        if order == 2:
            return 0.0
        # slope at the kink d0/beta is taken from the left
        return -self.beta if g <= self.d0 / self.beta else 0.0

    def scale(self, factor: float) -> "LinearDemand":
        _check_scale(factor)
        if factor == 1.0:
            return self
        return LinearDemand(factor * self.d0, factor * self.beta)


@dataclass(frozen=True)
class ExponentialDemand(DemandCurve):
    """D(g) = d0 * exp(-lam * g)."""

    d0: float
    lam: float

    def __post_init__(self) -> None:
        if self.d0 <= 0.0 or self.lam <= 0.0:
            raise ValueError("exponential demand requires d0 > 0 and lam > 0")

    def value(self, g: float) -> float:
        _check_price(g)
        return self.d0 * math.exp(-self.lam * g)

    def inverse(self, q: float) -> float:
        if q < 0.0 or q > self.d0 * (1.0 + 1e-12):
            raise ValueError(f"quantity {q} outside demand range [0, {self.d0}]")
        if q == 0.0:
            return math.inf
        return -math.log(min(q, self.d0) / self.d0) / self.lam

    def derivative(self, g: float, order: int = 1) -> float:
        _check_price(g)
        _check_order(order)
        if order == 1:
            return -self.lam * self.value(g)
        return self.lam * self.lam * self.value(g)

    def scale(self, factor: float) -> "ExponentialDemand":
        _check_scale(factor)
        if factor == 1.0:
            return self
        return ExponentialDemand(factor * self.d0, self.lam)


class CustomDemand(DemandCurve):
    """Demand curve defined by user-supplied value and derivative callables."""

    def __init__(
        self,
        value_fn: Callable[[float], float],
        slope_fn: Callable[[float], float],
        curvature_fn: Callable[[float], float],
    ) -> None:
        self._value = value_fn
        self._slope = slope_fn
        self._curvature = curvature_fn
        self._d0 = float(value_fn(0.0))
        if self._d0 <= 0.0:
            raise ValueError("custom demand must be positive at a zero price")

    def value(self, g: float) -> float:
        _check_price(g)
        return max(0.0, float(self._value(g)))

    def inverse(self, q: float) -> float:
        if q < 0.0 or q > self._d0 * (1.0 + 1e-12):
            raise ValueError(f"quantity {q} outside demand range [0, {self._d0}]")
        q = min(q, self._d0)
        if q == self._d0:
            return 0.0
        # bracket the price, then bisect to 1e-10 relative tolerance
        hi = 1.0
        for _ in range(200):
            if self.value(hi) <= q:
                break
            hi *= 2.0
        else:
            raise ValueError(f"quantity {q} is never reached by this curve")
        lo = 0.0
        while hi - lo > 1e-10 * max(1.0, hi):
            mid = 0.5 * (lo + hi)
            if self.value(mid) > q:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def derivative(self, g: float, order: int = 1) -> float:
        _check_price(g)
        _check_order(order)
        fn = self._slope if order == 1 else self._curvature
        return float(fn(g))

    def scale(self, factor: float) -> "CustomDemand":
        _check_scale(factor)
        if factor == 1.0:
            return self
        value_fn, slope_fn, curvature_fn = self._value, self._slope, self._curvature
        return CustomDemand(
            lambda g: factor * value_fn(g),
            lambda g: factor * slope_fn(g),
            lambda g: factor * curvature_fn(g),
        )


def mmus_condition(curve: DemandCurve, g: float) -> float:
    """Curvature expression g*D*D'' + 2*D*D' - 2*g*D'^2 at price ``g``.

    A negative value means the marginal user share is strictly decreasing
    in block size around the corresponding congested equilibrium.
    """
    d = curve.value(g)
    d1 = curve.derivative(g, 1)
    d2 = curve.derivative(g, 2)
    return g * d * d2 + 2.0 * d * d1 - 2.0 * g * d1 * d1


def gross_surplus(curve: DemandCurve, a: float, b: float) -> float:
    """Integral of the inverse demand P(q) over quantities [a, b].

    Closed form for the linear and exponential families; adaptive
    quadrature for custom curves.
    """
    if b < a:
        raise ValueError("integration bounds must satisfy a <= b")
    if a == b:
        return 0.0
    if isinstance(curve, LinearDemand):
        return (curve.d0 * (b - a) - 0.5 * (b * b - a * a)) / curve.beta
    if isinstance(curve, ExponentialDemand):

        def antider(q: float) -> float:
            if q == 0.0:
                return 0.0
            return (q - q * math.log(q / curve.d0)) / curve.lam

        return antider(b) - antider(a)
    from scipy.integrate import quad

    result, _ = quad(curve.inverse, a, b, epsabs=1e-8 * max(1.0, b - a), limit=200)
    return float(result)
