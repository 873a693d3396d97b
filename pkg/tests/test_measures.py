import cmath
import math

import numpy as np
import pytest
from scipy.integrate import quad

from freesb import (
    KernelEvaluator,
    Params,
    chi_boundary,
    PreconditionError,
    density,
    kernel_integrand,
    kernel_mass,
    kernel_mgf_check,
    moment_closed_form,
    moment_quadrature,
    quadrature_rule,
    semicircle_density,
    support_endpoints,
)
from freesb.maps import chi_st_boundary
from freesb.measures import integrate_adaptive, kernel_moment_series, semicircle_integrate


class TestDensity:
    @pytest.mark.parametrize("s", [0.5, 1.0, 3.0])
    def test_normalised_by_independent_quadrature(self, s):
        tmax = support_endpoints(s)
        total = quad(lambda th: density(s, th), -tmax, tmax, limit=200, epsabs=1e-12)[0] / (2 * math.pi)
        assert total == pytest.approx(1, abs=1e-9)

    def test_closing_point_at_four(self):
        assert abs(density(4.0, math.pi)) < 1e-8

    def test_zero_off_support_and_positive_on_it(self):
        assert density(1.0, 2.0) == 0
        assert density(1.0, 0.0) > 0
        assert np.all(np.asarray(density(6.0, np.linspace(-math.pi, math.pi, 101))) > 0)

    def test_symmetric(self):
        th = np.linspace(0, math.pi, 41)
        assert np.allclose(density(2.0, th), density(2.0, -th), atol=1e-14)


class TestQuadrature:
    def test_mass(self):
        rule = quadrature_rule(1.0, 256)
        assert rule.integrate(np.ones(len(rule))).real == pytest.approx(1, abs=1e-9)

    def test_first_moment(self):
        rule = quadrature_rule(2.0, 256)
        assert rule.integrate(rule.omega) == pytest.approx(math.exp(-1), abs=1e-9)

    def test_doubling_stable(self):
        a = quadrature_rule(1.0, 128)
        b = quadrature_rule(1.0, 256)
        assert abs(a.integrate(a.omega**3) - b.integrate(b.omega**3)) < 1e-10

    @pytest.mark.parametrize("s", [0.5, 2.0, 4.0, 6.0])
    def test_moments(self, s):
        for n in range(13):
            assert abs(moment_quadrature(s, n) - moment_closed_form(n, s)) < 1e-8

    def test_special_moments(self):
        assert moment_quadrature(3.0, 0) == pytest.approx(1, abs=1e-12)
        assert moment_quadrature(6.0, 1) == pytest.approx(math.exp(-3), abs=1e-12)

    def test_adaptive_reports_gap(self):
        value, gap = integrate_adaptive(1.0, lambda r: r.omega**2)
        assert gap < 1e-12
        assert value.real == pytest.approx(moment_closed_form(2, 1.0), abs=1e-12)

    def test_rejects_bad_arguments(self):
        with pytest.raises(PreconditionError):
            quadrature_rule(0.0)
        with pytest.raises(PreconditionError):
            quadrature_rule(1.0, 4)
        with pytest.raises(PreconditionError):
            moment_quadrature(1.0, -1)

    def test_json(self):
        js = quadrature_rule(1.0, 16).to_json()
        assert len(js["nodes"]) == len(js["weights"]) == 16


class TestKernel:
    def test_identity_when_s_equals_t(self):
        th = np.linspace(-1, 1, 11)
        assert np.max(np.abs(kernel_integrand(Params(1.0, 1.0), 1.0, th) - 1)) < 1e-12

    def test_real_on_circle(self):
        p = Params(3.0, 1.0)
        th = support_endpoints(3.0) * np.linspace(-0.99, 0.99, 31)
        vals = kernel_integrand(p, cmath.exp(0.3j), th)
        assert np.max(np.abs(vals.imag)) < 1e-12

    def test_endpoint_ratio(self):
        # (1 - |chi_st|^2) / (1 - |chi_s|^2) from the boundary maps tends to t/s;
        # Re kappa vanishes like a square root at the arc end, so the gap does too
        s, t = 2.0, 1.0
        tmax = support_endpoints(s)
        for k in (3, 5, 7):
            th = tmax * (1 - 10.0**-k)
            a = abs(chi_st_boundary(Params(s, t), th)) ** 2
            b = abs(chi_boundary(s, th)) ** 2
            assert abs((1 - a) / (1 - b) - t / s) < 10.0 ** (-k / 2)

    def test_kernel_matches_boundary_maps(self):
        # oracle: the kernel density assembled from chi_s and chi_st directly
        p, zeta = Params(3.0, 1.0), 1.1 * cmath.exp(0.2j)
        th = np.linspace(-2.0, 2.0, 9)
        cs, cst = chi_boundary(3.0, th), chi_st_boundary(p, th)
        ref = (1 - abs(cst) ** 2) / (1 - abs(cs) ** 2) * abs(1 - cs) ** 2 / ((zeta - cst) * (1 / zeta - np.conj(cst)))
        assert np.allclose(kernel_integrand(p, zeta, th), ref, rtol=1e-10, atol=0)

    @pytest.mark.parametrize("zeta", [1.0, cmath.exp(0.3j), 1.2])
    def test_mass_one(self, zeta):
        assert abs(kernel_mass(Params(1.0, 1.0), zeta) - 1) < 1e-8

    def test_mass_off_circle_other_pair(self):
        assert abs(kernel_mass(Params(3.0, 1.0), 1.1) - 1) < 1e-8

    def test_mgf(self):
        p = Params(2.0, 1.0)
        assert kernel_mgf_check(p, cmath.exp(0.2j), 0) == 0.0
        for z in (0.5, -0.3j, 0.2 + 0.2j):
            assert kernel_mgf_check(p, cmath.exp(0.2j), z) < 1e-8
        with pytest.raises(PreconditionError):
            kernel_mgf_check(p, 1.0, 1.0)

    def test_moments_by_series(self):
        p = Params(2.0, 1.0)
        zeta = cmath.exp(0.2j)
        ev = KernelEvaluator(p, zeta)
        for n in range(7):
            assert abs(ev.moment(n) - kernel_moment_series(p, zeta, n)) < 1e-8

    def test_zero_rejected(self):
        with pytest.raises(PreconditionError):
            kernel_integrand(Params(1.0, 1.0), 0, 0.1)


class TestSemicircle:
    def test_normalised(self):
        r = 2 * math.sqrt(2.0)
        assert quad(lambda x: semicircle_density(2.0, x), -r, r)[0] == pytest.approx(1, abs=1e-10)
        assert semicircle_integrate(2.0, np.ones_like) == pytest.approx(1, abs=1e-12)

    def test_second_moment(self):
        assert semicircle_integrate(2.5, lambda x: x * x) == pytest.approx(2.5, abs=1e-9)

    def test_zero_outside(self):
        assert semicircle_density(1.0, 2.5) == 0

    def test_rejects_nonpositive(self):
        with pytest.raises(PreconditionError):
            semicircle_density(0.0, 0.1)
