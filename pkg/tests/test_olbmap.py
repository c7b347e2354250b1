"""The map, its generating function and its invariant area form."""

import numpy as np
import pytest
from scipy.optimize import least_squares

from conftest import exterior_points
from olb.degenerate import confocal_residual, foci
from olb.errors import NoRoot, OrbitError, ParallelTangents, PointInsideCurve
from olb.geometry import Oval, normal, tangent_fan
from olb.olbmap import (
    area_form_factor,
    aux_circle,
    commute_gap,
    form_invariance_residual,
    generating,
    generating_residuals,
    orbit,
    step,
    step_variational,
    tangency_pairs,
)

TWO_PI = 2 * np.pi


def rot(t):
    return np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])


def line_distance(P, A, B):
    d = B - A
    return abs(d[0] * (P - A)[1] - d[1] * (P - A)[0]) / np.linalg.norm(d)


class TestAuxCircle:
    @pytest.mark.parametrize("R", [1.5, 2.0, 5.0])
    def test_circle_table_matches_residual_minimization(self, unit_circle, R):
        A = np.array([R, 0.0])
        t = np.arccos(1 / R)
        x_pos, x_neg = np.array([np.cos(t), np.sin(t)]), np.array([np.cos(t), -np.sin(t)])

        def residuals(c):
            # tangent to the unit circle at x_pos (center on its ray) and to the line A x_neg
            return [c[0] * x_pos[1] - c[1] * x_pos[0],
                    line_distance(c, A, x_neg) - (np.linalg.norm(c) - 1.0)]

        grid = [(u, v) for u in np.linspace(-60, 60, 121) for v in np.linspace(0.1, 60, 120)]
        start = min(grid, key=lambda c: np.sum(np.square(residuals(np.array(c)))))
        sol = least_squares(residuals, start, xtol=1e-15, ftol=1e-15, gtol=1e-15).x
        circle = aux_circle(unit_circle, A)
        np.testing.assert_allclose(circle.center, sol, atol=1e-8)
        assert circle.radius == pytest.approx(np.linalg.norm(sol) - 1.0, abs=1e-8)

    def test_tangency_residuals(self, ellipse, rng):
        for A in exterior_points(ellipse, rng, 100, 0.7, 6):
            c = aux_circle(ellipse, A)
            fan = tangent_fan(ellipse, A)
            assert abs(np.linalg.norm(c.center - c.tangency.position) - c.radius) < 1e-12 * max(1, c.radius)
            assert abs(line_distance(c.center, A, fan.neg.position) - c.radius) < 1e-10 * max(1, c.radius)

    def test_inside(self, ellipse):
        with pytest.raises(PointInsideCurve):
            aux_circle(ellipse, (0.5, 0.1))


class TestStep:
    @pytest.mark.parametrize("R", [1.5, 2.0, 5.0, 10.0, 100.0])
    def test_circle_rotation(self, unit_circle, R):
        for t in np.linspace(0, TWO_PI, 7):
            A = R * normal(t)
            np.testing.assert_allclose(step(unit_circle, A).image, rot(2 * np.arccos(1 / R)) @ A, atol=1e-9)

    def test_circle_radius_two_is_third_turn(self, unit_circle):
        img = step(unit_circle, (2.0, 0.0)).image
        np.testing.assert_allclose(img, 2 * normal(TWO_PI / 3), atol=1e-12)

    def test_circle_rotation_agrees_with_variational_solver(self, unit_circle):
        fan = tangent_fan(unit_circle, (3.0, 0.0))
        b = step_variational(unit_circle, *fan.angles)
        assert b == pytest.approx(step(unit_circle, (3.0, 0.0)).exit.alpha, abs=1e-9)

    def test_map_step_invariants(self, table, rng):
        for A in exterior_points(table, rng, 30, 0.7, 6):
            s = step(table, A)
            q = s.exit
            x2 = s.circle.tangency.position
            scale = max(1.0, np.linalg.norm(s.image))
            assert line_distance(s.image, A, x2) < 1e-10 * scale
            nq = normal(q.alpha)
            assert abs(s.image @ nq - table.support(q.alpha)[0]) < 1e-10 * scale
            assert abs(abs(s.circle.center @ nq - table.support(q.alpha)[0]) - s.circle.radius) < 1e-10 * max(
                1, s.circle.radius)
            d, c = x2 - A, s.circle.center - A
            assert d[0] * c[1] - d[1] * c[0] < 0  # right of the ray A x'

    def test_confocal_invariance(self, ellipse, rng):
        for A in exterior_points(ellipse, rng, 100, 0.7, 6):
            assert confocal_residual(ellipse, A) < 1e-8

    def test_double_step_bounded_by_five_diameters(self, table, rng):
        for A in exterior_points(table, rng, 30, 0.6, 30):
            assert np.linalg.norm(orbit(table, A, 1, stride=2)[1] - A) <= 5 * table.diameter

    def test_near_boundary_rejected(self, ellipse):
        with pytest.raises(PointInsideCurve):
            step(ellipse, (2.0 + 1e-7, 0.0))


class TestVariational:
    def test_circle_equal_spacing(self, unit_circle):
        assert step_variational(unit_circle, 0.4, 1.5) == pytest.approx(2.6, abs=1e-12)

    def test_agrees_with_geometric_step(self, ellipse, rng):
        for _ in range(200):
            a1 = rng.uniform(0, TWO_PI)
            a2 = a1 + rng.uniform(0.2, 2.8)
            A = _apex(ellipse, a1, a2)
            if ellipse.exterior_gap(A) < 1e-3:
                continue
            beta = step_variational(ellipse, a1, a2)
            geometric = step(ellipse, A).exit.alpha
            assert abs(np.mod(beta - geometric + np.pi, TWO_PI) - np.pi) < 1e-8

    @pytest.mark.parametrize("gap", [np.pi, np.pi + 0.1, 0.0, -0.3])
    def test_degenerate_configuration(self, ellipse, gap):
        with pytest.raises(NoRoot):
            step_variational(ellipse, 0.3, 0.3 + gap)


def _apex(oval, a1, a2):
    from olb import kernel

    x, y, _, _ = kernel.apex(oval.code, oval.kparams, a1, a2)
    return np.array([x, y])


class TestGenerating:
    @pytest.mark.parametrize("theta", [0.1, 0.5, 1.0, 1.4])
    def test_circle_closed_form(self, unit_circle, theta):
        g = generating(unit_circle, 0.3, 0.3 + 2 * theta)
        assert g.value == pytest.approx(2 * np.tan(theta), rel=1e-14)
        assert g.d12 < 0

    def test_derivatives_match_finite_differences(self, table, rng):
        h = 1e-6
        for _ in range(50):
            a1 = rng.uniform(0, TWO_PI)
            a2 = a1 + rng.uniform(0.1, np.pi - 0.1)
            g = generating(table, a1, a2)
            H = lambda u, v: generating(table, u, v).value  # noqa: E731
            d1 = (H(a1 + h, a2) - H(a1 - h, a2)) / (2 * h) / table.radius_of_curvature(a1)
            d2 = (H(a1, a2 + h) - H(a1, a2 - h)) / (2 * h) / table.radius_of_curvature(a2)
            assert d1 == pytest.approx(g.d1, rel=1e-5)
            assert d2 == pytest.approx(g.d2, rel=1e-5)
            assert g.d12 < 0

    @pytest.mark.parametrize("gap", [0.0, np.pi, 4.0, -1.0])
    def test_parallel_tangents(self, ellipse, gap):
        with pytest.raises(ParallelTangents):
            generating(ellipse, 1.0, 1.0 + gap)

    def test_generating_relation_along_orbit(self, table):
        pairs = tangency_pairs(table, (3 * table.diameter, 0.4), 300)
        assert np.max(np.abs(generating_residuals(table, pairs))) < 1e-8


class TestAreaForm:
    def test_circle_form_factor_is_two(self, unit_circle, rng):
        for A in exterior_points(unit_circle, rng, 20, 0.6, 50):
            assert area_form_factor(unit_circle, A) == pytest.approx(2.0, rel=1e-12)

    def test_form_factor_positive(self, table, rng):
        assert all(area_form_factor(table, A) > 0 for A in exterior_points(table, rng, 30, 0.6, 50))

    def test_circle_invariance(self, unit_circle):
        assert form_invariance_residual(unit_circle, (1.7, 0.4)) < 1e-8

    def test_residual_stable_under_step_halving(self, ellipse):
        A = np.array([3.0, 2.5])
        r1 = form_invariance_residual(ellipse, A, 1e-4)
        r2 = form_invariance_residual(ellipse, A, 5e-5)
        assert max(r1, r2) < 1e-6
        assert max(r1, r2) < 2 * min(r1, r2) or max(r1, r2) < 1e-9

    def test_limit_four_over_width_generic_origin(self, ellipse):
        psi, O = 0.7, np.array([0.3, 0.2])
        dev = [abs(area_form_factor(ellipse, O + r * normal(psi)) - 4 / ellipse.width(psi)) * r
               for r in (1e2, 1e3, 1e4)]
        assert max(dev) / min(dev) < 1.3

    def test_limit_about_centroid_is_second_order(self, ellipse):
        # symmetric table, centered origin: the 1/r term cancels
        psi = 0.7
        dev = [abs(area_form_factor(ellipse, r * normal(psi)) - 4 / ellipse.width(psi)) * r * r
               for r in (1e2, 1e3, 1e4)]
        assert max(dev) / min(dev) < 1.3


class TestCommute:
    def test_confocal_pair_does_not_commute(self, ellipse):
        other = Oval.ellipse(np.sqrt(5.0), np.sqrt(2.0))
        gaps = [commute_gap(ellipse, other, 6 * normal(t)) for t in np.linspace(0.1, 6, 12)]
        assert max(gaps) > 1e-3

    def test_concentric_circles_commute(self):
        a, b = Oval.circle(1.0), Oval.circle(2.0)
        assert commute_gap(a, b, (5.0, 1.0)) < 1e-10

    def test_self_commutes(self, table):
        assert commute_gap(table, table, (4 * table.diameter, 1.0)) < 1e-10


class TestOrbit:
    def test_circle_orbit_on_circle(self, unit_circle):
        pts = orbit(unit_circle, (3.0, 0.0), 500)
        np.testing.assert_allclose(np.hypot(*pts.T), 3.0, atol=1e-9)

    def test_ellipse_focal_sum(self, ellipse):
        f1, f2 = foci(ellipse)
        pts = orbit(ellipse, (5.0, 1.0), 1000)
        fs = np.linalg.norm(pts - f1, axis=1) + np.linalg.norm(pts - f2, axis=1)
        assert np.ptp(fs) < 1e-6

    def test_orbit_matches_repeated_step(self, table):
        A = np.array([2.5 * table.diameter, 0.3])
        pts = orbit(table, A, 25)
        x = A
        for i in range(1, 26):
            x = step(table, x).image
            np.testing.assert_allclose(pts[i], x, atol=1e-8 * np.linalg.norm(x))

    def test_stride_two(self, ellipse):
        A = (6.0, 0.0)
        np.testing.assert_allclose(orbit(ellipse, A, 10, stride=2), orbit(ellipse, A, 20)[::2], atol=0)

    def test_tangential_length_drift(self, table, rng):
        for A in exterior_points(table, rng, 20, 0.6, 20):
            pts = orbit(table, A, 20)
            for P, Q in zip(pts[:-1], pts[1:]):
                drift = tangent_fan(table, Q).len_neg - tangent_fan(table, P).len_pos
                assert abs(drift) <= 1.5 * table.diameter

    def test_errors_carry_index(self, ellipse):
        with pytest.raises(OrbitError) as info:
            orbit(ellipse, (0.1, 0.1), 5)
        assert info.value.index == 1
        assert isinstance(info.value.cause, PointInsideCurve)
        with pytest.raises(ValueError):
            orbit(ellipse, (5.0, 0.0), 5, stride=3)
