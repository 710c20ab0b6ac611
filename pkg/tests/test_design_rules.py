"""Block-size and floor-setting rules: marginal shares and their inverses."""

from dataclasses import replace

import pytest

from spameq import (
    ExponentialDemand,
    NonMonotoneShareWarning,
    b_plat,
    choose_bmax_mmus,
    choose_gmin_baseline,
    choose_gmin_refined,
    entry_bmax,
    entry_threshold_price,
    marginal_user_share,
    mu_user,
    solve,
)

from conftest import (
    B_PLAT,
    ENTRY_BMAX,
    ENTRY_THRESHOLD,
    GDAG_1180,
    G_CONGESTED_1000,
    G_SHARE_06,
    MMUS_BMAX_06,
    M_USER_1000,
    M_USER_PLATEAU,
)


def _finite_difference_share(params, bmax, h=1.0):
    hi = solve(params.with_bmax(bmax + h)).user_gas
    lo = solve(params.with_bmax(bmax - h)).user_gas
    return (hi - lo) / (2.0 * h)


class TestMarginalUserShare:
    def test_congested_closed_form(self, ref_market):
        assert marginal_user_share(ref_market) == pytest.approx(M_USER_1000, rel=1e-12)

    def test_left_of_plateau(self, ref_market):
        share = marginal_user_share(ref_market.with_bmax(B_PLAT - 1e-6))
        assert share == pytest.approx(M_USER_PLATEAU, rel=1e-6)

    def test_no_entry_is_one(self, ref_market):
        assert marginal_user_share(ref_market.with_bmax(400.0)) == 1.0

    def test_at_and_past_plateau_is_zero(self, ref_market):
        assert marginal_user_share(ref_market.with_bmax(B_PLAT)) == 0.0
        assert marginal_user_share(ref_market.with_bmax(2000.0)) == 0.0

    def test_matches_finite_difference(self, ref_market):
        for bmax in (700.0, 900.0, 1100.0, 1250.0):
            closed = marginal_user_share(ref_market.with_bmax(bmax))
            fd = _finite_difference_share(ref_market, bmax)
            assert abs(closed - fd) <= 1e-4

    def test_strictly_decreasing_linear(self, ref_market):
        lo = ENTRY_BMAX * 1.01
        hi = B_PLAT * 0.99
        grid = [lo + (hi - lo) * k / 199.0 for k in range(200)]
        shares = [marginal_user_share(ref_market.with_bmax(b)) for b in grid]
        for a, b in zip(shares, shares[1:]):
            assert b < a + 1e-9

    def test_strictly_decreasing_exponential(self, ref_market):
        params = replace(ref_market, demand=ExponentialDemand(1200.0, 0.01))
        lo = entry_bmax(params) * 1.02
        hi = b_plat(params) * 0.98
        grid = [lo + (hi - lo) * k / 49.0 for k in range(50)]
        shares = [marginal_user_share(params.with_bmax(b)) for b in grid]
        for a, b in zip(shares, shares[1:]):
            assert b < a + 1e-9


class TestChooseBmaxMmus:
    def test_reference_value(self, ref_market):
        assert choose_bmax_mmus(ref_market, 0.6) == pytest.approx(
            MMUS_BMAX_06, abs=1e-3
        )

    def test_tiny_eta_reaches_plateau(self, ref_market):
        assert choose_bmax_mmus(ref_market, 1e-6) == pytest.approx(B_PLAT, rel=1e-9)

    def test_eta_at_plateau_share(self, ref_market):
        assert choose_bmax_mmus(ref_market, 0.28571) == pytest.approx(B_PLAT, rel=1e-9)

    def test_large_eta_stops_at_entry(self, ref_market):
        assert choose_bmax_mmus(ref_market, 0.99) == pytest.approx(
            ENTRY_BMAX, rel=1e-6
        )

    def test_bad_eta_rejected(self, ref_market):
        with pytest.raises(ValueError):
            choose_bmax_mmus(ref_market, 0.0)
        with pytest.raises(ValueError):
            choose_bmax_mmus(ref_market, 1.5)

    def test_never_exceeds_plateau(self, ref_market):
        for eta in (0.05, 0.3, 0.6, 0.9, 1.0):
            assert choose_bmax_mmus(ref_market, eta) <= B_PLAT + 1e-6

    def test_exponential_demand_bisection(self, ref_market):
        params = replace(ref_market, demand=ExponentialDemand(1200.0, 0.01))
        chosen = choose_bmax_mmus(params, 0.6)
        assert entry_bmax(params) < chosen < b_plat(params)
        share = marginal_user_share(params.with_bmax(chosen))
        assert share == pytest.approx(0.6, abs=1e-4)

    def test_share_at_chosen_point_equals_eta(self, ref_market):
        chosen = choose_bmax_mmus(ref_market, 0.6)
        assert marginal_user_share(ref_market.with_bmax(chosen)) == pytest.approx(
            0.6, abs=1e-9
        )


class TestEntryBoundary:
    def test_linear_closed_form(self, ref_market):
        assert entry_bmax(ref_market) == pytest.approx(ENTRY_BMAX, rel=1e-12)

    def test_infinite_when_floor_blocks_entry(self, ref_market):
        assert entry_bmax(replace(ref_market, gmin=150.0)) == float("inf")

    def test_threshold_price(self, ref_market):
        assert entry_threshold_price(ref_market) == pytest.approx(
            ENTRY_THRESHOLD, rel=1e-12
        )


class TestChooseGminBaseline:
    def test_congested_block(self, ref_market):
        assert choose_gmin_baseline(ref_market, 1000.0) == pytest.approx(
            G_CONGESTED_1000, rel=1e-9
        )

    def test_plateau_block(self, ref_market):
        assert choose_gmin_baseline(ref_market, 1330.0) == pytest.approx(20.0, rel=1e-9)

    def test_quadratic_branch(self, ref_market):
        g_dag = choose_gmin_baseline(ref_market, 1180.0)
        assert g_dag == pytest.approx(GDAG_1180, abs=1e-6)
        assert b_plat(replace(ref_market, gmin=g_dag)) == pytest.approx(1180.0, rel=1e-9)

    def test_no_entry_branch(self, ref_market):
        g_dag = choose_gmin_baseline(ref_market, 400.0)
        assert g_dag == pytest.approx(800.0 / 6.0, rel=1e-9)
        assert b_plat(replace(ref_market, gmin=g_dag)) == pytest.approx(400.0, rel=1e-9)

    def test_matches_congested_clearing_price(self, ref_market):
        # the baseline floor for a block equals the congested price reached
        # from any strictly lower floor
        g_dag = choose_gmin_baseline(ref_market, 1000.0)
        for lower_floor in (5.0, 10.0, 20.0):
            eq = solve(replace(ref_market, gmin=lower_floor, bmax=1000.0))
            assert eq.clearing_price == pytest.approx(g_dag, rel=1e-9)

    def test_bad_bmax_rejected(self, ref_market):
        with pytest.raises(ValueError):
            choose_gmin_baseline(ref_market, 0.0)

    def test_exponential_demand(self, ref_market):
        params = replace(ref_market, demand=ExponentialDemand(1200.0, 0.01))
        g_dag = choose_gmin_baseline(params, 1000.0)
        assert b_plat(replace(params, gmin=g_dag)) == pytest.approx(1000.0, rel=1e-9)


class TestMuUser:
    def test_slack_share(self, ref_market):
        assert mu_user(ref_market.with_bmax(1500.0)) == pytest.approx(
            M_USER_PLATEAU, rel=1e-12
        )

    def test_no_entry_region(self, ref_market):
        assert mu_user(replace(ref_market, gmin=120.0, bmax=3000.0)) == 1.0

    def test_inverse_of_share_threshold(self, ref_market):
        assert mu_user(replace(ref_market, gmin=G_SHARE_06, bmax=1330.0)) == pytest.approx(
            0.6, rel=1e-9
        )

    def test_congested_region_undefined(self, ref_market):
        assert mu_user(ref_market) is None

    def test_increasing_in_floor_within_slack(self, ref_market):
        grid = [20.0 + k for k in range(0, 100, 5)]
        values = [
            mu_user(replace(ref_market, gmin=g, bmax=2500.0)) for g in grid
        ]
        assert all(v is not None for v in values)
        for a, b in zip(values, values[1:]):
            assert b > a


class TestChooseGminRefined:
    def test_congested_baseline_dominates(self, ref_market):
        assert choose_gmin_refined(ref_market, 1000.0, 0.6) == pytest.approx(
            G_CONGESTED_1000, rel=1e-9
        )

    def test_share_term_dominates(self, ref_market):
        assert choose_gmin_refined(ref_market, 1330.0, 0.6) == pytest.approx(
            G_SHARE_06, abs=1e-4
        )

    def test_entry_threshold_clamps(self, ref_market):
        assert choose_gmin_refined(ref_market, 1330.0, 0.99) == pytest.approx(
            ENTRY_THRESHOLD, rel=1e-9
        )

    def test_eta_one_flagged(self, ref_market):
        with pytest.warns(NonMonotoneShareWarning):
            value = choose_gmin_refined(ref_market, 1330.0, 1.0)
        assert value == pytest.approx(ENTRY_THRESHOLD, rel=1e-9)

    def test_bad_eta_rejected(self, ref_market):
        with pytest.raises(ValueError):
            choose_gmin_refined(ref_market, 1330.0, 0.0)
