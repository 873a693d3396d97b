import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freesb import (
    NonInvertibleError,
    Params,
    PreconditionError,
    TruncSeries,
    chi_series,
    chi_st_series,
    f_series,
    f_st_series,
    moment_closed_form,
    ps_compose,
    ps_exp,
    ps_mul,
    ps_revert,
    psi_series,
)
from freesb.series import chi_series_from_moments, chi_st_series_direct, p_coefficients, scaled_residual

N = 16


def z(order=N):
    return TruncSeries.identity(order)


class TestPrimitives:
    def test_exp_of_zero_is_one(self):
        assert np.allclose(ps_exp(TruncSeries.constant(0.0, N)).coeffs, np.r_[1.0, np.zeros(N)])

    def test_exp_matches_factorials(self):
        expected = [1 / math.factorial(k) for k in range(N + 1)]
        assert np.allclose(ps_exp(z()).coeffs, expected, rtol=0, atol=1e-16)

    def test_exp_times_exp_negative(self):
        prod = ps_mul(ps_exp(z()), ps_exp(-z()))
        assert np.max(np.abs(prod.coeffs - np.r_[1.0, np.zeros(N)])) < 1e-15

    def test_compose_identity_outer(self):
        h = TruncSeries([0, 2.0, -1.0, 0.5], N)
        assert np.array_equal(ps_compose(z(), h).coeffs, h.coeffs)

    def test_mul_is_convolution(self):
        a = TruncSeries([1, 2, 3], 4)
        b = TruncSeries([0, 1, -1], 4)
        assert np.allclose(ps_mul(a, b).coeffs, [0, 1, 1, 1, -3])

    def test_constant_term_violations(self):
        bad = TruncSeries([1.0, 1.0], N)
        with pytest.raises(PreconditionError):
            ps_exp(bad)
        with pytest.raises(PreconditionError):
            ps_compose(z(), bad)
        with pytest.raises(PreconditionError):
            ps_revert(bad)

    def test_revert_needs_nonzero_slope(self):
        with pytest.raises(NonInvertibleError):
            ps_revert(TruncSeries([0, 0, 1.0], N))

    def test_revert_identity(self):
        assert np.allclose(ps_revert(z()).coeffs, z().coeffs)

    def test_revert_geometric(self):
        # z/(1-z) has inverse z/(1+z) with coefficients (-1)^(k-1)
        b = ps_revert(TruncSeries([0] + [1.0] * N))
        expected = np.r_[0.0, [(-1.0) ** (k - 1) for k in range(1, N + 1)]]
        assert np.max(np.abs(b.coeffs - expected)) < 1e-12

    def test_revert_f_series_round_trip(self):
        f = f_series(1.0, 24)
        assert np.max(np.abs(ps_compose(f, ps_revert(f)).coeffs - z(24).coeffs)) < 1e-12

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-0.5, 0.5), min_size=6, max_size=6), st.floats(1, 3))
    def test_revert_round_trip_random(self, tail, slope):
        # slope >= 1 and small tails keep the inverse coefficients O(1)
        a = TruncSeries([0.0, slope] + tail)
        b = ps_revert(a)
        assert scaled_residual(ps_compose(a, b), TruncSeries.identity(a.order)) < 1e-9

    def test_arithmetic_and_horner(self):
        a = TruncSeries([1, 2, 3])
        assert a(0.5) == pytest.approx(1 + 1 + 0.75)
        assert np.allclose((a / a).coeffs, [1, 0, 0])
        assert np.allclose((a**2).coeffs, ps_mul(a, a).coeffs)
        assert np.allclose(a.derivative().coeffs[:2], [2, 6])

    def test_json_round_trip(self):
        a = f_series(0.7, 8)
        assert np.array_equal(TruncSeries.from_json(a.to_json()).coeffs, a.coeffs)


class TestMoments:
    @pytest.mark.parametrize("t", [0.0, 0.3, 1.0, 5.0])
    def test_first_moment(self, t):
        assert moment_closed_form(1, t) == pytest.approx(math.exp(-t / 2), rel=1e-15)

    @pytest.mark.parametrize("n", range(8))
    def test_zero_time_gives_ones(self, n):
        assert moment_closed_form(n, 0.0) == 1.0

    def test_second_moment_at_one_vanishes(self):
        assert moment_closed_form(2, 1.0) == 0.0

    @pytest.mark.parametrize("t", [0.5, 2.0, 7.0])
    def test_second_moment(self, t):
        assert moment_closed_form(2, t) == pytest.approx(math.exp(-t) * (1 - t), abs=1e-15)

    def test_third_moment_by_hand(self):
        # n = 3: e^{-3t/2} (1 - 3t + 3t^2/2)
        t = 1.3
        assert moment_closed_form(3, t) == pytest.approx(math.exp(-1.5 * t) * (1 - 3 * t + 1.5 * t * t), rel=1e-14)

    def test_large_order_stays_bounded(self):
        # moments of a probability measure on the circle lie in [-1, 1]
        assert all(abs(moment_closed_form(n, 3.0)) <= 1 for n in range(60))

    def test_negative_order_rejected(self):
        with pytest.raises(PreconditionError):
            moment_closed_form(-1, 1.0)


class TestMapSeries:
    def test_f_series_zero_time_is_identity(self):
        assert np.allclose(f_series(0.0, N).coeffs, z().coeffs)

    @pytest.mark.parametrize("t", [0.4, 1.0, 3.0, -1.0])
    def test_f_series_low_coefficients(self, t):
        c = f_series(t, N).coeffs
        assert c[1] == pytest.approx(math.exp(t / 2))
        assert c[2] == pytest.approx(t * math.exp(t / 2))

    def test_psi_series_low_coefficients(self):
        c = psi_series(1.7, N).coeffs
        assert c[1] == pytest.approx(math.exp(-0.85))
        assert c[2] == pytest.approx(math.exp(-1.7) * (1 - 1.7))

    def test_psi_series_zero_time(self):
        assert np.allclose(psi_series(0.0, N).coeffs, np.r_[0.0, np.ones(N)])

    @pytest.mark.parametrize("s", [0.5, 2.0, 6.0])
    def test_chi_series_slope(self, s):
        assert chi_series(s, N).coeffs[1] == pytest.approx(math.exp(-s / 2))

    def test_chi_series_small_s_near_identity(self):
        assert np.max(np.abs(chi_series(1e-9, N).coeffs - z().coeffs)) < 1e-7

    def test_chi_series_two_routes_s1(self):
        assert scaled_residual(chi_series(1.0, N), chi_series_from_moments(1.0, N)) < 1e-12

    def test_chi_st_at_equal_parameters(self):
        assert np.max(np.abs(chi_st_series(Params(2.0, 2.0), N).coeffs - chi_series(2.0, N).coeffs)) < 1e-14

    @pytest.mark.parametrize("s,t", [(3.0, 1.0), (1.0, 1.5), (5.0, 2.0)])
    def test_chi_st_slope_and_direct_route(self, s, t):
        p = Params(s, t)
        a = chi_st_series(p, 24)
        assert a.coeffs[1] == pytest.approx(math.exp(-t / 2))
        assert scaled_residual(a, chi_st_series_direct(p, 24)) < 1e-12

    def test_subordination_order16(self):
        p = Params(3.0, 1.0)
        lhs = ps_compose(psi_series(2.0, N), chi_st_series(p, N))
        assert scaled_residual(lhs, psi_series(3.0, N)) < 1e-12

    @pytest.mark.parametrize("s,t", [(1.0, 1.0), (2.0, 1.0), (3.0, 1.0), (5.0, 2.0)])
    def test_f_st_round_trip(self, s, t):
        p = Params(s, t)
        f = f_st_series(p, 24)
        assert f.coeffs[1] == pytest.approx(math.exp(t / 2))
        assert scaled_residual(ps_compose(f, chi_st_series(p, 24)), z(24)) < 1e-9

    @pytest.mark.parametrize("s,t", [(1.0, 1.5), (0.8, 1.6)])
    def test_f_st_round_trip_below_diagonal(self, s, t):
        # for s < t the coefficients of f_st grow fast and the composition
        # cancels terms of size M; rounding the inputs alone costs ~eps * M
        p = Params(s, t)
        f, chi = f_st_series(p, 24), chi_st_series(p, 24)
        power, M = TruncSeries.constant(1.0, 24), np.zeros(25)
        for k in range(1, 25):
            power = power * chi
            M += abs(f.coeffs[k]) * np.abs(power.coeffs)
        resid = np.abs((ps_compose(f, chi) - z(24)).coeffs)
        assert np.all(resid <= 64 * np.finfo(float).eps * np.maximum(M, 1.0))

    def test_f_st_equal_parameters(self):
        assert scaled_residual(f_st_series(Params(1.5, 1.5), N), f_series(1.5, N)) < 1e-12

    def test_f_st_requires_regime(self):
        with pytest.raises(PreconditionError):
            f_st_series(Params(1.0, 3.0), N)


class TestPCoefficients:
    @pytest.mark.parametrize("s,t", [(1.0, 1.0), (2.0, 1.0), (1.0, 1.5)])
    def test_matches_powers_of_f_st(self, s, t):
        # oracle: [z^k] f_st^m from repeated series multiplication
        p = Params(s, t)
        n = 10
        f = f_st_series(p, n)
        C = p_coefficients(p, n)
        power = TruncSeries.constant(1.0, n)
        for m in range(1, n + 1):
            power = power * f
            col = power.coeffs[1:]
            assert np.max(np.abs(C[:, m - 1] - col)) <= 1e-9 * max(1.0, np.max(np.abs(col)))

    def test_lower_triangular_with_exponential_diagonal(self):
        p = Params(3.0, 1.0)
        C = p_coefficients(p, 8)
        assert np.allclose(np.triu(C, 1), 0)
        assert np.allclose(np.diag(C), [math.exp(k * 0.5) for k in range(1, 9)])

    def test_returns_a_copy(self):
        p = Params(3.0, 1.0)
        C = p_coefficients(p, 4)
        C[0, 0] = 99
        assert p_coefficients(p, 4)[0, 0] != 99
