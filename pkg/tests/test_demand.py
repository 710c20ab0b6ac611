"""Demand curve evaluation, inversion, derivatives, scaling, and curvature."""

import math

import pytest
from hypothesis import given, strategies as st

from spameq import CustomDemand, ExponentialDemand, LinearDemand, mmus_condition

from conftest import make_bump_curve

LINEAR = LinearDemand(1200.0, 6.0)
EXPO = ExponentialDemand(1200.0, 0.01)


class TestEval:
    def test_linear_interior(self):
        assert LINEAR.value(20.0) == 1080.0

    def test_linear_exhausted(self):
        assert LINEAR.value(200.0) == 0.0
        assert LINEAR.value(500.0) == 0.0

    def test_exponential_intercept(self):
        assert EXPO.value(0.0) == 1200.0

    def test_negative_price_rejected(self):
        with pytest.raises(ValueError):
            LINEAR.value(-1.0)
        with pytest.raises(ValueError):
            EXPO.value(-0.5)

    def test_invalid_params_rejected(self):
        with pytest.raises(ValueError):
            LinearDemand(0.0, 6.0)
        with pytest.raises(ValueError):
            LinearDemand(1200.0, -1.0)
        with pytest.raises(ValueError):
            ExponentialDemand(1200.0, 0.0)


class TestInverse:
    def test_linear_values(self):
        assert LINEAR.inverse(1000.0) == pytest.approx(200.0 / 6.0, rel=1e-12)
        assert LINEAR.inverse(0.0) == 200.0
        assert LINEAR.inverse(1080.0) == pytest.approx(20.0, rel=1e-12)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            LINEAR.inverse(1200.1)
        with pytest.raises(ValueError):
            LINEAR.inverse(-1.0)

    def test_exponential_round_trip(self):
        for g in (0.0, 10.0, 55.0, 300.0):
            assert EXPO.inverse(EXPO.value(g)) == pytest.approx(g, abs=1e-9)

    def test_exponential_zero_quantity_is_infinite_price(self):
        assert EXPO.inverse(0.0) == math.inf

    def test_custom_round_trip(self):
        curve = make_bump_curve()
        for g in (0.1, 1.0, 7.5, 40.0):
            q = curve.value(g)
            assert curve.inverse(q) == pytest.approx(g, rel=1e-8, abs=1e-8)

    def test_custom_unreachable_quantity(self):
        # this curve never falls below scale * exp(-1/2)
        curve = make_bump_curve()
        with pytest.raises(ValueError):
            curve.inverse(100.0)


class TestDerivative:
    def test_linear(self):
        assert LINEAR.derivative(50.0, 1) == -6.0
        assert LINEAR.derivative(50.0, 2) == 0.0
        # at the kink the slope is taken from the left
        assert LINEAR.derivative(200.0, 1) == -6.0
        assert LINEAR.derivative(201.0, 1) == 0.0

    def test_exponential_at_zero(self):
        assert EXPO.derivative(0.0, 1) == pytest.approx(-12.0, rel=1e-12)

    def test_bad_order(self):
        with pytest.raises(ValueError):
            LINEAR.derivative(10.0, 3)

    @given(st.floats(min_value=0.0, max_value=180.0))
    def test_linear_matches_finite_difference(self, g):
        h = 1e-5 * max(1.0, g)
        if g - h < 0.0 or g + h > 199.0:
            return
        fd = (LINEAR.value(g + h) - LINEAR.value(g - h)) / (2.0 * h)
        assert abs(LINEAR.derivative(g, 1) - fd) <= 1e-4 * max(1.0, abs(fd))

    @given(st.floats(min_value=0.01, max_value=400.0))
    def test_exponential_matches_finite_difference(self, g):
        h = 1e-5 * max(1.0, g)
        fd = (EXPO.value(g + h) - EXPO.value(g - h)) / (2.0 * h)
        assert abs(EXPO.derivative(g, 1) - fd) <= 1e-4 * max(1.0, abs(fd))


class TestMonotoneAndRoundTrip:
    @given(
        st.floats(min_value=0.0, max_value=500.0),
        st.floats(min_value=0.0, max_value=500.0),
    )
    def test_linear_nonincreasing(self, g1, g2):
        lo, hi = min(g1, g2), max(g1, g2)
        assert LINEAR.value(lo) >= LINEAR.value(hi)

    @given(st.floats(min_value=0.0, max_value=199.0))
    def test_linear_round_trip(self, g):
        assert abs(LINEAR.inverse(LINEAR.value(g)) - g) <= 1e-8 * max(1.0, g)


class TestScale:
    def test_linear_scaling(self):
        scaled = LINEAR.scale(2.0)
        assert scaled == LinearDemand(2400.0, 12.0)
        assert scaled.value(20.0) == 2160.0

    def test_identity(self):
        assert LINEAR.scale(1.0) is LINEAR
        assert EXPO.scale(1.0) is EXPO

    def test_exponential_scaling(self):
        scaled = EXPO.scale(3.0)
        assert scaled.value(0.0) == 3600.0
        assert scaled.lam == EXPO.lam

    def test_below_one_rejected(self):
        with pytest.raises(ValueError):
            LINEAR.scale(0.5)

    @given(
        st.floats(min_value=1.0, max_value=40.0),
        st.floats(min_value=0.0, max_value=190.0),
    )
    def test_scaled_value_is_exact_multiple(self, factor, g):
        # exact up to float product reassociation (a few ULPs)
        assert LINEAR.scale(factor).value(g) == pytest.approx(
            factor * LINEAR.value(g), rel=1e-13
        )
        assert EXPO.scale(factor).value(g) == pytest.approx(
            factor * EXPO.value(g), rel=1e-13
        )

    def test_custom_scaling(self):
        curve = make_bump_curve()
        scaled = curve.scale(2.0)
        assert scaled.value(3.0) == pytest.approx(2.0 * curve.value(3.0), rel=1e-15)
        assert scaled.derivative(3.0, 2) == pytest.approx(
            2.0 * curve.derivative(3.0, 2), rel=1e-15
        )


class TestMmusCondition:
    def test_linear_is_constant_negative(self):
        # g*D*D'' + 2*D*D' - 2*g*(D')^2 reduces to -2*beta*d0 for linear demand
        for g in (1.0, 25.0, 120.0):
            assert mmus_condition(LINEAR, g) == pytest.approx(-14400.0, rel=1e-12)

    def test_exponential_is_negative(self):
        for g in (0.5, 10.0, 80.0, 250.0):
            assert mmus_condition(EXPO, g) < 0.0

    def test_bump_curve_changes_sign(self):
        curve = make_bump_curve()
        assert mmus_condition(curve, 1.0) < 0.0
        # positive once g^3 - 4g - 2 > 0
        assert mmus_condition(curve, 3.0) > 0.0
        assert mmus_condition(curve, 25.0) > 0.0

    def test_bump_curve_sign_matches_reduced_polynomial(self):
        curve = make_bump_curve()
        for g in (0.2, 1.0, 2.0, 2.5, 5.0, 12.0):
            poly = g**3 - 4.0 * g - 2.0
            value = mmus_condition(curve, g)
            assert (value > 0.0) == (poly > 0.0)


def test_custom_requires_positive_intercept():
    with pytest.raises(ValueError):
        CustomDemand(lambda g: -1.0, lambda g: 0.0, lambda g: 0.0)
