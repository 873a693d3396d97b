import cmath
import math

import numpy as np
import pytest

from freesb import (
    BoundaryProximityWarning,
    Params,
    PreconditionError,
    annulus_deviation,
    chi_st_eval,
    f_eval,
    in_sigma,
    omega_boundary_curve,
    sigma_boundary_curve,
    support_endpoints,
)
from freesb.geometry import scaled_annulus_deviation, symmetric_grid, winding_number


def test_symmetric_grid_is_exact():
    g = symmetric_grid(2.5, 101)
    assert g[0] == -2.5 and g[-1] == 2.5
    assert np.array_equal(g, -g[::-1])


def test_winding_number_of_square():
    sq = np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j, 1 + 1j])
    assert winding_number(0, sq) == pytest.approx(1)
    assert winding_number(3, sq) == pytest.approx(0, abs=1e-15)


class TestOmega:
    @pytest.mark.parametrize("t", [1.0, 3.0, 4.0])
    def test_non_arc_points_map_to_circle(self, t):
        c = omega_boundary_curve(t, 400)
        th = c.thetas[0]
        mask = np.abs(th) > support_endpoints(t) + 1e-9
        if t >= 4:
            assert not mask.any()
        else:
            assert np.max(np.abs(np.abs(f_eval(t, c.components[0][mask])) - 1)) < 1e-8

    def test_arc_points_map_to_circle_too(self):
        c = omega_boundary_curve(2.0, 300)
        assert np.max(np.abs(np.abs(f_eval(2.0, c.components[0][:-1])) - 1)) < 1e-8

    def test_conjugation_symmetry(self):
        pts = omega_boundary_curve(2.0, 301).points()
        assert max(np.min(np.abs(pts - np.conj(z))) for z in pts) < 1e-12

    def test_closed(self):
        comp = omega_boundary_curve(2.0).components[0]
        assert comp[0] == comp[-1]

    def test_large_time_inside_disk(self):
        # at t = 4.5 the curve is a single loop strictly inside the disk;
        # it stays a fixed distance away from -1 (recorded in the decisions ledger)
        c = omega_boundary_curve(4.5, 801)
        pts = c.points()
        assert c.n_components == 1
        assert np.max(np.abs(pts)) < 1
        assert np.min(np.abs(pts + 1)) > 0.5

    def test_pinches_at_minus_one_for_t4(self):
        pts = omega_boundary_curve(4.0, 801).points()
        assert np.min(np.abs(pts + 1)) < 1e-6

    def test_rejects_bad_arguments(self):
        with pytest.raises(PreconditionError):
            omega_boundary_curve(0.0)
        with pytest.raises(PreconditionError):
            omega_boundary_curve(1.0, 4)


class TestSigma:
    @pytest.mark.parametrize("t", [0.1, 0.5, 0.9])
    def test_small_s_one_component(self, t):
        assert sigma_boundary_curve(Params(0.5, t), 256).n_components == 1

    @pytest.mark.parametrize("t", [1.0, 5.0, 9.0])
    def test_large_s_two_components(self, t):
        assert sigma_boundary_curve(Params(5.0, t), 256).n_components == 2

    def test_just_below_threshold_is_closed(self):
        c = sigma_boundary_curve(Params(3.99, 1.0), 512)
        comp = c.components[0]
        assert c.n_components == 1
        assert abs(comp[0] - comp[-1]) < 1e-12

    @pytest.mark.parametrize("s,t", [(1.0, 1.0), (5.0, 2.0)])
    def test_outer_is_reflection_of_inner(self, s, t):
        c = sigma_boundary_curve(Params(s, t), 256)
        pts = c.points()
        refl = 1 / np.conj(pts)
        assert max(np.min(np.abs(pts - w)) for w in refl) < 1e-10

    def test_regime_enforced(self):
        with pytest.raises(PreconditionError):
            sigma_boundary_curve(Params(0.4, 1.0))

    def test_serialisation(self):
        c = sigma_boundary_curve(Params(5.0, 2.0), 64)
        js = c.to_json()
        assert len(js["components"]) == 2
        lines = c.to_csv().splitlines()
        assert lines[0] == "component,theta,re,im"
        assert len(lines) == 1 + sum(len(k) for k in c.components)


class TestMembership:
    def test_special_points(self):
        p = Params(1.0, 1.0)
        assert in_sigma(p, 0) is False
        assert in_sigma(p, 1) is True
        assert in_sigma(p, None) is False
        assert in_sigma(p, complex(math.inf, 0)) is False

    def test_reflection_invariance(self):
        p = Params(3.0, 1.0)
        for z in (1.3, 0.7j, -0.4 + 0.2j, 2.0 * cmath.exp(1j)):
            assert in_sigma(p, z) == in_sigma(p, 1 / np.conj(z))

    def test_image_of_disk_is_excluded(self):
        p = Params(1.0, 1.0)
        for z in (0.2, 0.5j, -0.3 - 0.3j):
            assert not in_sigma(p, chi_st_eval(p, z))

    def test_circle_meets_sigma_on_the_support_arc(self):
        # off the arc chi_st sends the circle onto the circle, so those
        # points belong to the closure of chi_st(D)
        p = Params(1.0, 1.0)
        tmax = support_endpoints(1.0)
        assert in_sigma(p, cmath.exp(0.5j * tmax))
        assert not in_sigma(p, cmath.exp(1j * (tmax + 0.3)))
        assert not in_sigma(p, -1)

    def test_annular_region_for_large_s(self):
        p = Params(5.0, 2.0)
        r = math.exp(-1)  # the inner curve hugs |z| = e^{-t/2}
        assert in_sigma(p, 1.0) and in_sigma(p, -1.0)
        assert not in_sigma(p, 0.5 * r)

    def test_proximity_warning(self):
        p = Params(1.0, 1.0)
        edge = sigma_boundary_curve(p, 4096).components[0][100]
        with pytest.warns(BoundaryProximityWarning):
            in_sigma(p, edge)


class TestAnnulus:
    def test_decreasing(self):
        d = [annulus_deviation(Params(s, 1.0)) for s in (8.0, 16.0, 32.0)]
        assert d[0] > d[1] > d[2]
        assert d[2] < 1e-5

    def test_within_proof_bound_order(self):
        # deviation should be comparable to e^{-s/2} (times t-dependent constants)
        assert annulus_deviation(Params(32.0, 1.0)) < 10 * math.exp(-16)

    def test_scaled_equal_parameters(self):
        d = [scaled_annulus_deviation(t) for t in (8.0, 16.0, 32.0)]
        assert d[0] > d[1] > d[2]

    def test_zero_off_support_for_small_s(self):
        # for s < 4 the support is an arc, so |chi_st| = 1 somewhere
        assert annulus_deviation(Params(1.0, 1.0)) == pytest.approx(1 - math.exp(-0.5))
