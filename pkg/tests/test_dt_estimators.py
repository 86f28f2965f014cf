import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fctdrem import DtEstimator, DtGains, ScalarLreSample


def feed(est, deltas, theta=10.0, noise=None):
    """Drive the estimator with noiseless samples y = delta * theta."""
    for k, d in enumerate(deltas):
        y = d * theta
        if noise is not None:
            y += noise[k]
        est.step(ScalarLreSample(t=float(k), delta=d, y_meas=y))


class TestGains:
    def test_validation(self):
        with pytest.raises(ValueError):
            DtGains(c=0.0)
        with pytest.raises(ValueError):
            DtGains(c=1.0, rho=1.0)
        with pytest.raises(ValueError):
            DtGains(c=1.0, rho=0.5, d=0)
        with pytest.raises(ValueError):
            DtGains(c=1.0, rho=0.5, d=2.0)  # must be an integer


class TestRecursion:
    def test_two_step_hand_values(self):
        est = DtEstimator(DtGains(c=1.0, rho=0.9))
        feed(est, [1.0], theta=10.0)
        assert est.theta_hat == 5.0
        assert est.w == 0.5
        feed_more = ScalarLreSample(t=1.0, delta=1.0, y_meas=10.0)
        est.step(feed_more)
        assert est.theta_hat == 7.5
        assert est.w == 0.25

    def test_zero_regressor_is_a_no_op(self):
        est = DtEstimator(DtGains(c=1.0, rho=0.9), theta0=2.5)
        est.step(ScalarLreSample(t=0.0, delta=0.0, y_meas=0.0))
        assert est.theta_hat == 2.5
        assert est.w == 1.0

    def test_single_step_with_large_regressor(self):
        # c=1, delta=3, theta=2: theta_hat(1) = (3/10) * 6, w(1) = 1/10
        est = DtEstimator(DtGains(c=1.0, rho=0.9))
        feed(est, [3.0], theta=2.0)
        assert est.theta_hat == pytest.approx(1.8, abs=1e-15)
        assert est.w == pytest.approx(0.1, abs=1e-16)

    def test_error_contraction(self):
        rng = random.Random(99)
        est = DtEstimator(DtGains(c=1.0, rho=0.9))
        prev = abs(est.theta_hat - 10.0)
        for k in range(500):
            d = rng.uniform(-2, 2)
            est.step(ScalarLreSample(t=float(k), delta=d, y_meas=d * 10.0))
            err = abs(est.theta_hat - 10.0)
            assert err <= prev + 1e-15
            prev = err


class TestFctReadout:
    def test_exact_recovery_after_one_sample(self):
        est = DtEstimator(DtGains(c=1.0, rho=0.9))
        feed(est, [1.0])
        assert est.theta_fct == pytest.approx(10.0, abs=1e-12)

    def test_collapses_to_initial_estimate_before_excitation(self):
        est = DtEstimator(DtGains(c=1.0, rho=0.5), theta0=3.0)
        # w(0) = 1 is clipped to rho: (3 - 0.5*3)/(1 - 0.5) = 3
        assert est.theta_fct == 3.0

    def test_passthrough_once_weight_underflows(self):
        est = DtEstimator(DtGains(c=1.0, rho=0.9))
        feed(est, [2.0] * 3000)
        assert est.w == 0.0  # running product underflows on a long excited run
        assert est.theta_fct == est.theta_hat

    def test_ie_flag(self):
        est = DtEstimator(DtGains(c=1.0, rho=0.9))
        assert not est.ie_met()
        feed(est, [1.0])
        assert est.ie_met()  # w(1) = 0.5 < 0.9

    def test_ie_flag_zero_excitation(self):
        est = DtEstimator(DtGains(c=1.0, rho=0.9))
        feed(est, [0.0] * 50)
        assert not est.ie_met()

    def test_ie_flag_tight_threshold(self):
        est = DtEstimator(DtGains(c=1.0, rho=0.999))
        feed(est, [3.0], theta=2.0)
        assert est.ie_met()  # w(1) = 0.1


class TestWindowRatio:
    def test_hand_value(self):
        est = DtEstimator(DtGains(c=1.0, rho=0.9, d=1))
        feed(est, [1.0, 1.0])
        assert est.window_ratio() == pytest.approx(0.5, abs=1e-15)  # 0.25 / 0.5

    def test_no_excitation_window(self):
        est = DtEstimator(DtGains(c=1.0, rho=0.9, d=3))
        feed(est, [0.0] * 10)
        assert est.window_ratio() == 1.0

    def test_prehistory_is_one(self):
        est = DtEstimator(DtGains(c=1.0, rho=0.9, d=4))
        assert est.window_ratio() == 1.0  # k = 0

    def test_ratio_matches_weight_quotient_while_representable(self):
        rng = random.Random(5)
        est = DtEstimator(DtGains(c=1.0, rho=0.9, d=3))
        ws = [1.0]
        for k in range(200):
            d = rng.uniform(-2, 2)
            est.step(ScalarLreSample(t=float(k), delta=d, y_meas=d * 10.0))
            ws.append(est.w)
            k1 = est.k
            expected = ws[k1] / ws[max(k1 - 3, 0)]
            assert est.window_ratio() == pytest.approx(expected, rel=1e-12)


class TestFctApReadout:
    def test_hand_value(self):
        est = DtEstimator(DtGains(c=1.0, rho=0.9, d=1))
        feed(est, [1.0, 1.0])
        # (7.5 - 0.5 * 5) / (1 - 0.5) = 10
        assert est.theta_fct_ap == pytest.approx(10.0, abs=1e-12)

    def test_fixed_point(self):
        est = DtEstimator(DtGains(c=1.0, rho=0.9, d=2), theta0=7.0)
        feed(est, [0.0] * 5, theta=7.0)
        # clip active, estimate equals anchor: reconstruction is the identity
        assert est.theta_fct_ap == pytest.approx(7.0, rel=1e-14)

    def test_fixed_point_after_convergence(self):
        est = DtEstimator(DtGains(c=1.0, rho=0.9, d=1))
        feed(est, [1.0] * 60)
        assert est.theta_fct_ap == pytest.approx(10.0, abs=1e-10)


class TestProductForm:
    def test_matches_independent_cumulative_product(self):
        rng = np.random.default_rng(20240501)
        deltas = rng.uniform(-2.0, 2.0, size=10_000)
        est = DtEstimator(DtGains(c=1.0, rho=0.9, d=1))
        factors = 1.0 / (1.0 + deltas**2)
        oracle = np.cumprod(factors)
        for k, d in enumerate(deltas):
            est.step(ScalarLreSample(t=float(k), delta=float(d), y_meas=float(d) * 10.0))
            ow = oracle[k]
            if ow > 1e-300:
                assert abs(est.w - ow) <= 1e-12 * ow
            else:
                assert est.w == ow  # both underflow identically

    @given(st.lists(st.floats(min_value=-2, max_value=2), min_size=1, max_size=60))
    @settings(max_examples=100)
    def test_product_form_short_sequences(self, deltas):
        est = DtEstimator(DtGains(c=1.0, rho=0.9))
        prod = 1.0
        for k, d in enumerate(deltas):
            est.step(ScalarLreSample(t=float(k), delta=d, y_meas=d * 3.0))
            prod *= 1.0 / (1.0 + d * d)
        assert est.w == pytest.approx(prod, rel=1e-12)

    def test_window_identity_brute_force(self):
        # theta_err(k) = wd(k) * theta_err(k-d) against the direct factor product
        rng = random.Random(77)
        deltas = [rng.uniform(-2, 2) for _ in range(2000)]
        factors = [1.0 / (1.0 + d * d) for d in deltas]
        for d_win in (1, 3, 7):
            est = DtEstimator(DtGains(c=1.0, rho=0.9, d=d_win))
            errs = [est.theta_hat - 10.0]
            for k, d in enumerate(deltas):
                est.step(ScalarLreSample(t=float(k), delta=d, y_meas=d * 10.0))
                errs.append(est.theta_hat - 10.0)
                k1 = est.k
                lo = max(k1 - d_win, 0)
                wd_oracle = 1.0
                for f in factors[lo:k1]:
                    wd_oracle *= f
                assert abs(errs[k1] - wd_oracle * errs[lo]) <= 1e-10
                assert est.window_ratio() == pytest.approx(wd_oracle, rel=1e-12)

    def test_fct_exact_whenever_clip_inactive(self):
        rng = random.Random(13)
        est = DtEstimator(DtGains(c=1.0, rho=0.9, d=2))
        for k in range(3000):
            d = rng.uniform(-2, 2)
            est.step(ScalarLreSample(t=float(k), delta=d, y_meas=d * 10.0))
            if est.w < 0.9 and est.w > 0.0:
                assert abs(est.theta_fct - 10.0) <= 1e-10
            if est.window_ratio() < 0.9:
                assert abs(est.theta_fct_ap - 10.0) <= 1e-10
