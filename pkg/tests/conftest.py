"""Shared fixtures: the reference market and frozen solution constants."""

import math

import pytest

from spameq import CostParams, CustomDemand, LinearDemand, MarketParams

# Reference scenario used throughout: linear demand with intercept 1200 and
# slope 6, spam size 20, opportunity 6000, floor 20. Frozen solution values
# below were computed from the closed forms and an independent fine-grained
# scan + bisection of the zero-profit condition.
REF_D0 = 1200.0
REF_BETA = 6.0
REF_S = 20.0
REF_R0 = 6000.0
REF_GMIN = 20.0

S_CONGESTED_1000 = 3.951102881551583
G_CONGESTED_1000 = 46.50367627183861
QU_CONGESTED_1000 = 920.9779423689683
B_PLAT = 1330.0
S_SLACK = 12.5
ENTRY_BMAX = 480.0
M_USER_1000 = 0.6838036555234519
M_USER_PLATEAU = 2.0 / 7.0
MMUS_BMAX_06 = 1072.5403330758518
GDAG_1180 = 29.221443851123798
G_SHARE_06 = 38.72983346207417
ENTRY_THRESHOLD = 120.0
RHO_PLATEAU_1 = 0.18796992481203006
RHO_PLATEAU_2 = 0.19402985074626866
RHO_PLATEAU_LIMIT = 0.2


@pytest.fixture
def ref_market() -> MarketParams:
    return MarketParams(
        demand=LinearDemand(REF_D0, REF_BETA),
        s=REF_S,
        r0=REF_R0,
        gmin=REF_GMIN,
        bmax=1000.0,
    )


@pytest.fixture
def ref_costs() -> CostParams:
    return CostParams(c1=0.0, c2=1.0)


def make_bump_curve(scale: float = 1200.0) -> CustomDemand:
    """Smooth, strictly decreasing curve whose curvature condition changes sign.

    value(g) = scale * exp(-(1 - (1+g)^-2) / 2); the share-monotonicity
    expression is proportional to g^3 - 4g - 2, negative for small g and
    positive once g is large.
    """

    def value(g: float) -> float:
        return scale * math.exp(-(1.0 - (1.0 + g) ** -2) / 2.0)

    def slope(g: float) -> float:
        return -value(g) / (1.0 + g) ** 3

    def curvature(g: float) -> float:
        return value(g) * (1.0 + 3.0 * (1.0 + g) ** 2) / (1.0 + g) ** 6

    return CustomDemand(value, slope, curvature)
