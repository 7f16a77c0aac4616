import datetime as dt
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from volsent.data_io import OptionQuote, RatePoint
from volsent.errors import (
    DegenerateSmile,
    InsufficientQuotes,
    NonUniformSpacing,
    OutOfHull,
    PriceOutOfBounds,
    TooFewPoints,
    UnknownLevel,
)
from volsent.surface import (
    GridConfig,
    IVSurfaceGrid,
    bs_price,
    build_grid,
    implied_vol,
    interpolate,
    smile_curvature,
    smile_skewness,
    surface_params,
    term_slope,
)

TRADE = dt.date(2020, 1, 6)


def bisect_iv(price, S, K, r, tau, kind, price_tol=1e-10):
    """Independent inversion oracle: plain bisection on the price."""
    lo, hi = 1e-6, 6.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        diff = bs_price(S, K, r, tau, mid, kind) - price
        if abs(diff) < price_tol:
            return mid
        if diff > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


class TestBsPrice:
    def test_zero_vol_is_discounted_intrinsic(self):
        assert bs_price(110, 100, 0.0, 1.0, 0.0, "call") == 10.0

    def test_tiny_strike_call_approaches_spot(self):
        assert bs_price(100, 1e-10, 0.0, 1.0, 0.2, "call") == pytest.approx(100.0, abs=1e-8)

    def test_atm_reference_value(self):
        # frozen from a 40-digit evaluation of the pricing formula
        assert bs_price(100, 100, 0.0, 1.0, 0.2, "call") == pytest.approx(
            7.965567455405796, abs=1e-12
        )

    @given(
        s=st.floats(50, 200),
        m=st.floats(0.5, 2.0),
        r=st.floats(-0.01, 0.1),
        tau=st.floats(0.02, 3.0),
        sigma=st.floats(0.01, 2.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_put_call_parity(self, s, m, r, tau, sigma):
        k = m * s
        call = bs_price(s, k, r, tau, sigma, "call")
        put = bs_price(s, k, r, tau, sigma, "put")
        assert call - put == pytest.approx(s - k * math.exp(-r * tau), abs=1e-10 * s)

    @given(
        s=st.floats(50, 200),
        m=st.floats(0.6, 1.6),
        r=st.floats(0.0, 0.05),
        tau=st.floats(0.05, 2.0),
        sigma=st.floats(0.05, 1.5),
    )
    @settings(max_examples=200, deadline=None)
    def test_price_increases_with_vol(self, s, m, r, tau, sigma):
        from volsent.surface import bs_vega

        k = m * s
        # strict monotonicity is only observable where vega is resolvable
        assume(bs_vega(s, k, r, tau, sigma) > 1e-8 * s)
        lower = bs_price(s, k, r, tau, sigma, "call")
        upper = bs_price(s, k, r, tau, sigma + 0.05, "call")
        assert upper > lower

    def test_call_within_no_arbitrage_bounds(self):
        price = bs_price(100, 90, 0.02, 0.5, 0.35, "call")
        assert max(100 - 90 * math.exp(-0.01), 0.0) < price < 100


class TestImpliedVol:
    def test_forward_round_trip(self):
        price = bs_price(100, 90, 0.03, 0.5, 0.25, "call")
        assert price == pytest.approx(13.790848961769481, abs=1e-12)
        assert implied_vol(price, 100, 90, 0.03, 0.5, "call") == pytest.approx(0.25, abs=1e-6)

    def test_below_intrinsic_rejected(self):
        with pytest.raises(PriceOutOfBounds):
            implied_vol(5.0, 110, 100, 0.0, 1.0, "call")

    def test_above_upper_bound_rejected(self):
        with pytest.raises(PriceOutOfBounds):
            implied_vol(101.0, 100, 90, 0.0, 1.0, "call")

    def test_deep_otm_put_round_trip_matches_bisection_oracle(self):
        S, K, r, tau = 100.0, 85.0, 0.03, 1.0 / 12.0
        price = bs_price(S, K, r, tau, 0.6, "put")
        assert price == pytest.approx(1.4493502186834129, abs=1e-12)
        newton = implied_vol(price, S, K, r, tau, "put")
        oracle = bisect_iv(price, S, K, r, tau, "put")
        assert newton == pytest.approx(0.6, abs=1e-5)
        assert newton == pytest.approx(oracle, abs=1e-6)

    @given(
        sigma=st.floats(0.05, 2.0),
        log_m=st.floats(-0.7, 0.7),
        tau=st.floats(0.05, 2.0),
        r=st.floats(0.0, 0.08),
    )
    @settings(max_examples=300, deadline=None)
    def test_round_trip_property(self, sigma, log_m, tau, r):
        S = 100.0
        K = S * math.exp(log_m)
        kind = "call" if K >= S else "put"
        price = bs_price(S, K, r, tau, sigma, kind)
        lower = max((S - K * math.exp(-r * tau)) if kind == "call" else (K * math.exp(-r * tau) - S), 0.0)
        # skip tuples whose time value is below double-precision resolution
        assume(price - lower > 1e-9 * S)
        assert implied_vol(price, S, K, r, tau, kind) == pytest.approx(sigma, abs=1e-6)


def flat_quotes(vol=0.2, rate=0.025, expiry_days=(15, 45, 100, 200, 270),
                moneyness=(0.85, 0.90, 0.95, 1.00, 1.05, 1.10, 1.15), spot=100.0):
    quotes = []
    for days in expiry_days:
        expiry = TRADE + dt.timedelta(days=days)
        tau = days / 365.0
        for m in moneyness:
            kind = "call" if m >= 1.0 else "put"
            sigma = vol(tau, m) if callable(vol) else vol
            price = bs_price(spot, m * spot, rate, tau, sigma, kind)
            quotes.append(OptionQuote(TRADE, expiry, m * spot, kind, price, spot))
    return quotes, RatePoint(TRADE, rate)


class TestBuildGrid:
    def test_flat_world_recovers_flat_grid(self):
        quotes, rate = flat_quotes(vol=0.2)
        grid = build_grid(quotes, rate)
        np.testing.assert_allclose(grid.values, 0.2, atol=1e-4)
        assert grid.n_inversion_failures == 0

    def test_quotes_on_grid_nodes_reproduced_exactly(self):
        config = GridConfig()
        spot, rate_value = 100.0, 0.0
        expiry_days = [round(365 * months / 12.0) for months in config.maturities]
        node_vol = lambda i, j: 0.5 + 0.05 * ((i + j) % 3)
        quotes = []
        for i, days in enumerate(expiry_days):
            for j, m in enumerate(config.moneyness_levels):
                kind = "call" if m >= 1.0 else "put"
                tau = days / 365.0
                price = bs_price(spot, m * spot, rate_value, tau, node_vol(i, j), kind)
                quotes.append(OptionQuote(TRADE, TRADE + dt.timedelta(days=days), m * spot, kind, price, spot))
        rate = RatePoint(TRADE, rate_value)
        grid = build_grid(quotes, rate, config)
        for i, days in enumerate(expiry_days):
            tau = days / 365.0
            for j, m in enumerate(config.moneyness_levels):
                kind = "call" if m >= 1.0 else "put"
                price = bs_price(spot, m * spot, rate_value, tau, node_vol(i, j), kind)
                node_iv = implied_vol(price, spot, m * spot, rate_value, tau, kind)
                assert grid.values[i, j] == pytest.approx(node_iv, abs=1e-12)

    def test_single_expiry_insufficient(self):
        quotes, rate = flat_quotes(expiry_days=(45,))
        with pytest.raises(InsufficientQuotes):
            build_grid(quotes, rate)

    def test_smirk_world_skew_signs(self):
        smirk = lambda tau, m: 0.2 + 0.3 * max(1.0 - m, 0.0)
        quotes, rate = flat_quotes(vol=smirk)
        grid = build_grid(quotes, rate)
        params = surface_params(grid)
        # downside smirk: higher vols below the money -> positive skew rows
        assert np.all(params.skew_by_tau > 0)
        assert np.all(params.cur_by_tau > 0)  # kink at the money is convex


class TestInterpolate:
    def grid(self, fn):
        config = GridConfig()
        values = np.array(
            [[fn(months / 12.0, m) for m in config.moneyness_levels] for months in config.maturities]
        )
        return IVSurfaceGrid(TRADE, config.maturities, config.moneyness_levels, values)

    def test_node_returns_stored_value(self):
        grid = self.grid(lambda tau, m: 0.2 + 0.1 * tau + 0.05 * (m - 1.0) ** 2)
        assert interpolate(grid, 0.5, 1.025) == pytest.approx(grid.values[2, 2], abs=1e-14)

    def test_flat_surface_everywhere(self):
        grid = self.grid(lambda tau, m: 0.31)
        assert interpolate(grid, 0.4, 0.97) == pytest.approx(0.31, abs=1e-12)

    def test_linear_in_tau_reproduced(self):
        grid = self.grid(lambda tau, m: 0.2 + 0.1 * tau)
        tau = 0.4
        assert interpolate(grid, tau, 1.0) == pytest.approx(0.2 + 0.1 * tau, abs=1e-10)

    def test_out_of_hull_raises_when_disabled(self):
        grid = self.grid(lambda tau, m: 0.2)
        with pytest.raises(OutOfHull):
            interpolate(grid, 2.0, 1.0, extrapolation="raise")

    def test_clamp_matches_edge(self):
        grid = self.grid(lambda tau, m: 0.2 + 0.1 * tau)
        assert interpolate(grid, 5.0, 1.0) == pytest.approx(interpolate(grid, 1.0, 1.0), abs=1e-12)


class TestSmileCurvature:
    def test_flat_smile_zero(self):
        smile = [(k, 0.2) for k in (90, 95, 100, 105, 110)]
        assert smile_curvature(smile) == 0.0

    def test_hand_computed_reference(self):
        smile = list(zip((90, 95, 100, 105, 110), (0.24, 0.21, 0.20, 0.21, 0.24)))
        # frozen from a 40-digit evaluation of the three interior terms
        assert smile_curvature(smile) == pytest.approx(0.0007999872002559952, rel=1e-12)

    def test_linear_smile_zero(self):
        smile = [(k, 0.1 + 0.001 * k) for k in (90, 95, 100, 105, 110)]
        assert smile_curvature(smile) == pytest.approx(0.0, abs=1e-15)

    def test_too_few_points(self):
        with pytest.raises(TooFewPoints):
            smile_curvature([(90, 0.2), (95, 0.21)])

    def test_non_uniform_spacing(self):
        with pytest.raises(NonUniformSpacing):
            smile_curvature([(90, 0.2), (95, 0.21), (101, 0.22)])

    def test_translation_invariant_in_strike(self):
        ivs = (0.24, 0.21, 0.20, 0.21, 0.24)
        a = smile_curvature(list(zip((90, 95, 100, 105, 110), ivs)))
        b = smile_curvature(list(zip((190, 195, 200, 205, 210), ivs)))
        assert a == pytest.approx(b, rel=1e-12)

    def test_symmetric_smile_reversal_invariant(self):
        ivs = (0.24, 0.21, 0.20, 0.21, 0.24)
        a = smile_curvature(list(zip((90, 95, 100, 105, 110), ivs)))
        b = smile_curvature(list(zip((90, 95, 100, 105, 110), ivs[::-1])))
        assert a == pytest.approx(b, rel=1e-12)

    def test_paper_literal_mode_differs(self):
        smile = list(zip((90, 95, 100, 105, 110), (0.24, 0.21, 0.20, 0.21, 0.24)))
        literal = smile_curvature(smile, mode="paper-literal")
        corrected = smile_curvature(smile)
        # literal divides by n=5 instead of n-2=3
        assert literal == pytest.approx(corrected * 3 / 5, rel=1e-3)


class TestSmileSkewness:
    def test_values_symmetric_about_mean_zero(self):
        assert smile_skewness([0.18, 0.19, 0.20, 0.21, 0.22]) == pytest.approx(0.0, abs=1e-10)

    def test_u_shaped_smile_has_positive_skew(self):
        assert smile_skewness([0.24, 0.21, 0.20, 0.21, 0.24]) > 0

    def test_one_outlier_reference(self):
        assert smile_skewness([0.2, 0.2, 0.2, 0.5]) == pytest.approx(
            1.1547005383792515, rel=1e-12
        )

    def test_degenerate_smile(self):
        with pytest.raises(DegenerateSmile):
            smile_skewness([0.2, 0.2, 0.2])

    def test_translation_invariant(self):
        base = [0.21, 0.24, 0.2, 0.26]
        shifted = [v + 0.3 for v in base]
        assert smile_skewness(base) == pytest.approx(smile_skewness(shifted), rel=1e-9)


class TestTermSlope:
    def grid(self, fn):
        config = GridConfig()
        values = np.array(
            [[fn(months / 12.0, m) for m in config.moneyness_levels] for months in config.maturities]
        )
        return IVSurfaceGrid(TRADE, config.maturities, config.moneyness_levels, values)

    def test_flat_in_tau_zero_slope(self):
        grid = self.grid(lambda tau, m: 0.2 + 0.01 * m)
        assert term_slope(grid, 1.0) == pytest.approx(0.0, abs=1e-14)

    def test_affine_recovered_exactly(self):
        grid = self.grid(lambda tau, m: 0.2 + 0.12 * tau)
        assert term_slope(grid, 0.975) == pytest.approx(0.12, abs=1e-12)

    def test_convex_matches_normal_equation_oracle(self):
        grid = self.grid(lambda tau, m: 0.2 + 0.05 * tau**2)
        taus = grid.taus()
        y = grid.values[:, list(grid.moneyness_levels).index(1.100)]
        oracle = np.polyfit(taus, y, 1)[0]
        assert term_slope(grid, 1.100) == pytest.approx(oracle, rel=1e-10)

    def test_unknown_level(self):
        grid = self.grid(lambda tau, m: 0.2)
        with pytest.raises(UnknownLevel):
            term_slope(grid, 0.77)


class TestSurfaceParams:
    def test_flat_surface_maps_degenerate_rows_to_zero_with_flag(self):
        config = GridConfig()
        grid = IVSurfaceGrid(
            TRADE, config.maturities, config.moneyness_levels,
            np.full((4, 7), 0.2),
        )
        params = surface_params(grid)
        np.testing.assert_array_equal(params.skew_by_tau, 0.0)
        np.testing.assert_array_equal(params.cur_by_tau, 0.0)
        assert params.degenerate == (True, True, True, True)

    def test_vector_length_is_two_maturities_plus_levels(self):
        config = GridConfig()
        grid = IVSurfaceGrid(
            TRADE, config.maturities, config.moneyness_levels,
            0.2 + 0.01 * np.arange(28, dtype=float).reshape(4, 7) / 28,
        )
        assert surface_params(grid).as_vector().shape == (2 * 4 + 7,)

    def test_matches_componentwise_recomputation(self):
        config = GridConfig()
        fn = lambda tau, m: 0.2 + 0.05 * (1.0 - m) ** 2 + 0.03 * tau + 0.02 * max(1.0 - m, 0.0)
        values = np.array(
            [[fn(months / 12.0, m) for m in config.moneyness_levels] for months in config.maturities]
        )
        grid = IVSurfaceGrid(TRADE, config.maturities, config.moneyness_levels, values)
        params = surface_params(grid)
        from scipy.interpolate import CubicSpline

        levels = np.array(config.moneyness_levels)
        order = np.argsort(levels)
        ladder = np.linspace(0.90, 1.10, 5)
        for i in range(4):
            ivs = CubicSpline(levels[order], grid.values[i][order])(ladder)
            assert params.cur_by_tau[i] == pytest.approx(
                smile_curvature(list(zip(ladder, ivs))), rel=1e-12
            )
            assert params.skew_by_tau[i] == pytest.approx(smile_skewness(ivs), rel=1e-12)
        for j, m in enumerate(config.moneyness_levels):
            assert params.slope_by_m[j] == pytest.approx(term_slope(grid, m), rel=1e-12)
