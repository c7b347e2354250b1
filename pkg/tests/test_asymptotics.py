"""Far-field behaviour: fields, flows, residual decay and the chart at infinity."""

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from olb import asymptotics as asy
from olb.errors import AtOrigin, SingularF, TooFewPoints
from olb.geometry import Oval, tangent_fan
from olb.olbmap import orbit

TWO_PI = 2 * np.pi


def _polar(p, o=(0.0, 0.0)):
    d = np.asarray(p) - o
    return np.hypot(*d), np.arctan2(d[1], d[0])


class TestFields:
    def test_circle_magnitude(self, unit_circle):
        for a in np.linspace(0, 6, 7):
            v = asy.field_X(unit_circle, 50 * np.array([np.cos(a), np.sin(a)]))
            assert np.linalg.norm(v) == pytest.approx(4.0, rel=1e-14)

    def test_clockwise_and_width(self, table):
        O = np.asarray(table.origin)
        for a in np.linspace(0.1, 6.1, 9):
            u = np.array([np.cos(a), np.sin(a)])
            v = asy.field_X(table, O + 30 * u)
            assert np.linalg.norm(v) / table.width(a) == pytest.approx(2.0, rel=1e-12)
            assert u[0] * v[1] - u[1] * v[0] < 0

    def test_degree_zero(self, ellipse):
        x = np.array([3.0, 4.0])
        np.testing.assert_allclose(asy.field_X(ellipse, 7 * x), asy.field_X(ellipse, x), atol=1e-14)

    def test_origin_shift_is_order_one_over_r(self, ellipse):
        o2 = (0.3, 0.2)
        t = np.linspace(0, 6, 25)
        for r in (100.0, 1000.0):
            worst = max(
                np.linalg.norm(asy.field_X(ellipse, p) - asy.field_X(ellipse, p, o2)) * r
                for p in r * np.column_stack([np.cos(t), np.sin(t)])
            )
            assert worst < 5.0

    def test_singular_at_origin(self, ellipse):
        with pytest.raises(AtOrigin):
            asy.field_X(ellipse, ellipse.origin)

    def test_field_y_speed(self):
        for a in (0.3, 1.2, 2.5):
            v = asy.field_Y(10 * np.array([np.cos(a), np.sin(a)]))
            assert np.linalg.norm(v) == pytest.approx(4 * abs(np.sin(a)), rel=1e-14)


class TestFlow:
    def test_circle_rotation(self, unit_circle):
        r = 40.0
        y = asy.flow_time1(unit_circle, (r, 0.0))
        rr, a = _polar(y)
        assert rr == pytest.approx(r, rel=1e-15)
        assert a == pytest.approx(-4.0 / r, abs=1e-13)

    def test_homogeneity(self, ellipse):
        x = np.array([30.0, 17.0])
        f = asy.x_field(ellipse)
        # twice as far out, twice as long to sweep the same angle
        a1 = _polar(f.flow(x, 1.0))[1]
        a2 = _polar(f.flow(2 * x, 2.0))[1]
        assert a2 == pytest.approx(a1, abs=1e-12)

    @pytest.mark.parametrize("t", [1.0, 3.5])
    def test_against_ode(self, lp_table, t):
        f = asy.x_field(lp_table)
        x0 = np.array([12.0, -5.0])
        sol = solve_ivp(lambda _, y: f(y), (0, t), x0, method="DOP853", rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(f.flow(x0, t), sol.y[:, -1], atol=1e-9)

    def test_radius_conserved(self, fourier_table):
        x = np.array([20.0, 9.0])
        assert np.hypot(*asy.flow_time1(fourier_table, x)) == np.hypot(*x)


class TestMain1:
    @pytest.mark.parametrize("r", [20.0, 100.0])
    def test_circle_closed_form(self, unit_circle, r):
        # on the circle both maps are rotations; compare chord lengths
        delta = 4 * np.arccos(1 / r) - 2 * np.pi + 4 / r
        expected = 2 * r * np.sin(abs(delta) / 2)
        assert asy.main1_residual(unit_circle, (r, 0.0)) == pytest.approx(expected, rel=1e-8, abs=1e-13)

    def test_needs_far_point(self, ellipse):
        with pytest.raises(ValueError):
            asy.main1_residual(ellipse, (5.0, 0.0))

    def test_decay_fit_synthetic(self):
        rep = asy.AsymptoticReport([10.0, 20.0, 40.0], [0.3, 0.15, 0.075], 8, (0, 0))
        C, slope = asy.decay_fit(rep)
        assert slope == pytest.approx(-1.0, abs=1e-12)
        assert C == pytest.approx(3.0)

    def test_decay_circle_second_order(self, unit_circle):
        rep = asy.main1_report(unit_circle, [50.0, 100.0, 200.0], n_dirs=4, origin=(0.0, 0.0))
        assert asy.decay_fit(rep)[1] == pytest.approx(-2.0, abs=0.05)

    def test_decay_generic_origin(self, ellipse):
        rep = asy.main1_report(ellipse, [50.0, 100.0, 200.0], n_dirs=16)
        C, slope = asy.decay_fit(rep)
        assert -1.2 < slope < -0.8
        assert rep.scaled == pytest.approx([r * s for r, s in zip(rep.radii, rep.sup_residual)])

    def test_too_few(self):
        with pytest.raises(TooFewPoints):
            asy.decay_fit(asy.AsymptoticReport([1.0, 2.0], [1.0, 0.5], 1, (0, 0)))


def test_stability_circle(unit_circle):
    s = asy.stability_scan(unit_circle, (30.0, 0.0), 200)
    assert s.r_max - s.r_min < 1e-8
    assert s.max_jump == pytest.approx(4.0, rel=0.01)


class TestInfinityChart:
    def test_circle(self, unit_circle):
        ch = asy.infinity_chart(unit_circle, n=8)
        np.testing.assert_allclose(ch.f, -2.0, atol=1e-6)
        np.testing.assert_allclose(ch.g, 0.0, atol=1e-6)

    def test_opposite_sum_is_width(self, ellipse):
        ch = asy.infinity_chart(ellipse, n=16)
        F, _ = ch.double_step()
        np.testing.assert_allclose(F, -2 * ellipse.width(ch.alphas), atol=1e-4)
        assert np.all(ch.f < 0)

    def test_odd_grid(self, unit_circle):
        ch = asy.InfinityChart(np.zeros(3), np.zeros(3), np.zeros(3), ())
        with pytest.raises(ValueError):
            ch.double_step()


class TestLazutkin:
    def test_constant_coefficients(self):
        n = 32
        ch = asy.lazutkin_change(np.full(n, -2.0), np.zeros(n))
        np.testing.assert_allclose(ch.b, 1.0, atol=1e-14)
        np.testing.assert_allclose(ch.a, -ch.alphas / 2, atol=1e-12)
        assert ch.x(TWO_PI + 1.0) == pytest.approx(-(TWO_PI + 1.0) / 2)
        assert ch.y(0.5, 1e-3) == pytest.approx(1e-3)

    def test_singular(self):
        f = np.full(8, -2.0)
        f[3] = 0.0
        with pytest.raises(SingularF):
            asy.lazutkin_change(f, np.zeros(8))

    def test_normal_form_circle(self, unit_circle):
        n = 32
        # two steps: coefficients add up to -4 on the circle
        ch = asy.lazutkin_change(np.full(n, -4.0), np.zeros(n))
        for row in asy.normal_form_check(unit_circle, ch, n=8):
            assert row.x_ratio < 10
            assert row.y_ratio < 10


class TestOuterArea:
    def test_midpoint_is_tangency(self, table, rng):
        O = np.asarray(table.origin)
        for a in rng.uniform(0, TWO_PI, 10):
            x = O + 5 * table.diameter * np.array([np.cos(a), np.sin(a)])
            z = asy.outer_area_billiard_step(table, x)
            assert np.linalg.norm((x + z) / 2 - tangent_fan(table, x).pos.position) < 1e-12

    def test_circle_preserves_radius(self, unit_circle):
        pts = asy.outer_area_orbit(unit_circle, (3.0, 1.0), 50)
        np.testing.assert_allclose(np.hypot(*pts.T), np.hypot(3.0, 1.0), rtol=1e-12)
        assert pts.shape == (51, 2)
