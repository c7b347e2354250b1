"""Auxiliary-circle centers far from the table."""

import numpy as np
import pytest

from olb.asymptotics import outer_area_orbit
from olb.centers import (
    circle_center,
    ellipse_center_locus,
    ham_level,
    hausdorff,
    kepler_rates,
    level_curve,
    level_deviation,
    rescaled_center_orbit,
    sectorial_rate,
)
from olb.errors import AtOrigin, NotPeriodic, TooShort
from olb.periodic import find_periodic, jitter


class TestCircle:
    def test_center_distance(self, unit_circle):
        for r in (20.0, 100.0):
            c = circle_center(unit_circle, (r, 0.0))
            assert np.hypot(*c) == pytest.approx(r * r, rel=1e-3)

    def test_trace_and_rate(self, unit_circle):
        tr = rescaled_center_orbit(unit_circle, (100.0, 0.0), 50)
        assert len(tr) == 51
        np.testing.assert_allclose(tr.R, tr.r**2, rtol=1e-3)
        rate, ref = sectorial_rate(unit_circle, tr)
        np.testing.assert_allclose(rate / ref, 1.0, atol=1e-4)
        np.testing.assert_allclose(ref, tr.r[:-1] ** 3, rtol=1e-12)

    def test_ham_level(self, unit_circle):
        assert ham_level(unit_circle, (3.0, 4.0)) == pytest.approx(10.0)
        pts = np.array([[1.0, 0.0], [0.0, -2.0]])
        np.testing.assert_allclose(ham_level(unit_circle, pts), [2.0, 4.0])


class TestEllipseTrace:
    @pytest.mark.parametrize("r0,dev", [(1e2, 0.05), (1e3, 0.005)])
    def test_rescaled_on_level_set(self, ellipse, r0, dev):
        tr = rescaled_center_orbit(ellipse, (r0, 0.0), 2000)
        assert level_deviation(ellipse, tr.rescaled) < dev
        scaled = np.abs(tr.R * ellipse.width(tr.beta + np.pi / 2) - 2 * tr.r**2) / tr.r
        assert scaled.max() < 0.1 * 1e2 / r0 * 10

    def test_direction_quarter_turn(self, ellipse):
        for r0 in (1e2, 1e3):
            tr = rescaled_center_orbit(ellipse, (r0, 0.0), 200)
            off = np.abs((tr.beta - tr.alpha - np.pi / 2 + np.pi) % (2 * np.pi) - np.pi)
            assert (off * tr.r).max() < 3.0

    def test_sectorial(self, ellipse):
        tr = rescaled_center_orbit(ellipse, (1e3, 0.0), 500)
        rate, ref = sectorial_rate(ellipse, tr)
        assert np.max(np.abs(rate / ref - 1)) < 5e-3

    def test_odd_steps(self, ellipse):
        ev = rescaled_center_orbit(ellipse, (200.0, 0.0), 5)
        od = rescaled_center_orbit(ellipse, (200.0, 0.0), 5, odd=True)
        assert list(ev.steps) == [0, 2, 4, 6, 8, 10]
        assert list(od.steps) == [1, 3, 5, 7, 9, 11]
        assert not np.allclose(ev.points, od.points)

    def test_lp_trace(self, lp_table):
        tr = rescaled_center_orbit(lp_table, (1e3, 0.0), 2000)
        assert level_deviation(lp_table, tr.rescaled) < 0.01

    def test_near_start_rejected(self, ellipse):
        with pytest.raises(ValueError):
            rescaled_center_orbit(ellipse, (5.0, 0.0), 10)


class TestOuterAreaComparison:
    def test_lp_orbit_follows_level_set(self, lp_table):
        # symmetric table: the quarter turn does not change the level set
        pts = outer_area_orbit(lp_table, (1000.0, 0.0), 2000)
        H = ham_level(lp_table, pts)
        assert np.ptp(H) / H.mean() < 0.01
        curve = level_curve(lp_table, H.mean(), 4096)
        assert hausdorff(pts, curve) / 1000 < 0.01

    def test_ellipse_orbit_uses_unrotated_width(self, ellipse):
        pts = outer_area_orbit(ellipse, (1000.0, 0.0), 500)
        r = np.hypot(*pts.T)
        a = np.arctan2(pts[:, 1], pts[:, 0])
        w = r * ellipse.width(a)
        assert np.ptp(w) / w.mean() < 1e-10
        H = ham_level(ellipse, pts)
        assert np.ptp(H) / H.mean() > 0.5

    def test_kepler(self, lp_table, ellipse):
        for oval, tol in ((lp_table, 0.01), (ellipse, 0.02)):
            pts = outer_area_orbit(oval, (1000.0, 0.0), 500)
            k = kepler_rates(pts)
            assert np.ptp(k) / k.mean() < tol


class TestLocus:
    @pytest.mark.parametrize("m", [1, 2])
    def test_centers_on_polar_ellipse(self, ellipse, m):
        orb = find_periodic(ellipse, 5, m)
        assert ellipse_center_locus(ellipse, orb) < 1e-9

    def test_circle(self, unit_circle):
        assert ellipse_center_locus(unit_circle, find_periodic(unit_circle, 4, 1)) < 1e-12

    def test_jittered_rejected(self, ellipse, rng):
        orb = jitter(find_periodic(ellipse, 5, 1), ellipse, 1e-3, rng)
        with pytest.raises(NotPeriodic):
            ellipse_center_locus(ellipse, orb)

    def test_needs_conic(self, lp_table):
        with pytest.raises(ValueError):
            ellipse_center_locus(lp_table, find_periodic(lp_table, 5, 1))


def test_errors(ellipse):
    tr = rescaled_center_orbit(ellipse, (100.0, 0.0), 0)
    with pytest.raises(TooShort):
        sectorial_rate(ellipse, tr)
    with pytest.raises(TooShort):
        kepler_rates(np.zeros((1, 2)))
    with pytest.raises(AtOrigin):
        ham_level(ellipse, ellipse.origin)


@pytest.mark.parametrize("fixture", ["ellipse", "lp_table", "fourier_table"])
def test_level_one_curve_is_rotated_symmetrized_dual(fixture, request):
    from olb.geometry import dual_symmetrized

    oval = request.getfixturevalue(fixture)
    t = np.arange(256) * (2 * np.pi / 256)
    curve = level_curve(oval, 1.0, 256) - np.asarray(oval.origin)
    radial = np.hypot(*curve.T)
    dual = dual_symmetrized(oval)
    np.testing.assert_allclose(radial, dual.radius(t + np.pi / 2), atol=1e-10)
    np.testing.assert_allclose(ham_level(oval, np.asarray(oval.origin) + curve), 1.0, atol=1e-12)
