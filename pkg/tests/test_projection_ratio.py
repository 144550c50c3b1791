"""Radial projection, facet ratio bounds, and conical sectors."""

import math

import numpy as np
import pytest

from conftest import make_body
from lch import ball_polytope3 as bp3
from lch import projection_ratio as pr
from lch.errors import InvalidParameterError
from lch.inradius import inscribed_ball, reduce_to_touching

FOUR_PI = 4.0 * math.pi
LENS = [[0.0, 0.0, -0.5], [0.0, 0.0, 0.5]]


def lens_chart():
    body = bp3.build(1.0, LENS)
    return body, pr.chart_for_facet(body, 0)


class TestRadialProject:
    def test_fixed_points_on_the_sphere(self):
        body, chart = lens_chart()
        q = chart.center + chart.inradius * np.array([0.3, 0.8, 0.52])
        q = chart.center + chart.inradius * (q - chart.center) / np.linalg.norm(q - chart.center)
        assert np.allclose(pr.radial_project(chart, q), q, atol=1e-14)

    def test_touch_point_fixed(self):
        _, chart = lens_chart()
        assert np.allclose(pr.radial_project(chart, chart.touch_point),
                           chart.touch_point, atol=1e-14)

    def test_colinear_point(self):
        _, chart = lens_chart()
        q = chart.center + 2.0 * chart.inradius * chart.axis
        assert np.allclose(pr.radial_project(chart, q), chart.touch_point, atol=1e-14)

    def test_center_rejected(self):
        _, chart = lens_chart()
        with pytest.raises(InvalidParameterError):
            pr.radial_project(chart, chart.center)


class TestProjectedAreas:
    def test_lens_facet_projects_to_half_sphere(self):
        body, chart = lens_chart()
        area = pr.projected_facet_area(body, chart)
        assert math.isclose(area, 0.5 * math.pi, rel_tol=1e-9)

    def test_ball_projects_to_full_sphere(self):
        body = bp3.build(1.0, [[0, 0, 0]])
        chart = pr.chart_for_facet(body, 0)
        assert math.isclose(pr.projected_facet_area(body, chart),
                            FOUR_PI, rel_tol=1e-12)

    def test_projection_against_polygon_excess(self):
        # edges of touching facets project to great circles, so the
        # projected region is a geodesic polygon measured by excess
        body = make_body(seed=10, m=5, r0=0.45)
        ball = inscribed_ball(body)
        for f in body.facets:
            chart = pr.chart_for_facet(body, f.ball_index, ball)
            quad_area = pr.projected_facet_area(body, chart, f)
            excess_area = _geodesic_polygon_area(body, chart, f)
            assert abs(quad_area - excess_area) <= 1e-7 * excess_area

    def test_non_touching_facet_rejected(self):
        body = bp3.build(1.0, LENS + [[0.3, 0.0, 0.0]])
        with pytest.raises(InvalidParameterError):
            pr.chart_for_facet(body, 2)


def _geodesic_polygon_area(body, chart, facet):
    """Independent projected-area oracle via spherical polygon excess."""
    r = chart.inradius
    loops = facet.boundary_loops
    if not loops:
        return FOUR_PI * r * r
    total_turn = 0.0
    n_loops = len(loops)
    for loop in loops:
        k = len(loop)
        for idx, (eidx, forward) in enumerate(loop):
            edge = body.edges[eidx]
            if edge.full_circle:
                continue
            nxt_eidx, nxt_forward = loop[(idx + 1) % k]
            nxt = body.edges[nxt_eidx]
            vid = edge.end_vertex if forward else edge.start_vertex
            v = body.vertices[vid].position
            u_hat = (v - chart.center)
            u_hat /= np.linalg.norm(u_hat)
            t_in = _projected_tangent(edge, forward, v, u_hat, chart, outgoing=False)
            t_out = _projected_tangent(nxt, nxt_forward, v, u_hat, chart, outgoing=True)
            total_turn += math.atan2(float(np.cross(t_in, t_out) @ u_hat),
                                     float(t_in @ t_out))
    chi = 2 - n_loops
    return r * r * (2.0 * math.pi * chi - total_turn)


def _projected_tangent(edge, forward, v, u_hat, chart, outgoing):
    phi = (edge.phi_start if forward else edge.phi_end) if outgoing else \
        (edge.phi_end if forward else edge.phi_start)
    t3 = edge.tangent_at(phi, forward)
    # the projected edge runs on the great circle with pole = edge axis
    cand = np.cross(edge.circle_axis, u_hat)
    cand /= np.linalg.norm(cand)
    return cand if float(cand @ t3) >= 0.0 else -cand


class TestClaim3:
    def test_lens_tiles_inscribed_sphere(self):
        body = bp3.build(1.0, LENS)
        rep = pr.claim3_check(body)
        assert rep.passed
        assert math.isclose(rep.total, math.pi, rel_tol=1e-9)
        assert all(math.isclose(a, 0.5 * math.pi, rel_tol=1e-8)
                   for a in rep.projected_areas)

    def test_random_bodies(self):
        for seed in (1, 5, 9):
            body = make_body(seed=seed, m=6, r0=0.4)
            rep = pr.claim3_check(body)
            assert rep.passed
            assert rep.rel_defect < 1e-5

    def test_requires_touching(self):
        body = bp3.build(1.0, LENS + [[0.3, 0.0, 0.0]])
        with pytest.raises(InvalidParameterError):
            pr.claim3_check(body)
        assert pr.claim3_check(reduce_to_touching(body)).passed


class TestRatioF:
    def test_reference_value(self):
        assert math.isclose(pr.ratio_F(1.0, 0.5), 2.0, rel_tol=1e-12)

    def test_ball_limit(self):
        assert math.isclose(pr.ratio_F(1.0, 1.0 - 1e-9), 1.0, rel_tol=1e-8)

    def test_scale_invariance(self):
        assert math.isclose(pr.ratio_F(2.0, 0.25), 2.0, rel_tol=1e-12)

    def test_domain(self):
        with pytest.raises(InvalidParameterError):
            pr.ratio_F(1.0, 1.5)
        with pytest.raises(InvalidParameterError):
            pr.ratio_F(1.0, 0.0)


class TestKeyClaim:
    def test_lens_facets_at_equality(self):
        body = bp3.build(1.0, LENS)
        rep = pr.key_claim_check(body)
        assert rep.passed
        assert all(rep.at_equality)
        for ratio in rep.ratios:
            assert math.isclose(ratio, rep.bound, rel_tol=1e-8)

    def test_random_strictly_below(self):
        for seed in (3, 12):
            body = make_body(seed=seed, m=5, r0=0.4)
            rep = pr.key_claim_check(body)
            assert rep.passed
            assert not any(rep.at_equality)
            assert rep.max_ratio < rep.bound - 1e-4

    def test_theorem_c_chain(self):
        # surface area <= F * (tiled inscribed sphere) = matched lens area
        from lch.reference_bodies import lens3_from_inradius

        for seed in (2, 8):
            body = make_body(seed=seed, m=6, r0=0.45)
            rep = pr.key_claim_check(body)
            ball = inscribed_ball(body)
            lens_area = lens3_from_inradius(body.lam, ball.radius).surface_area
            assert rep.surface_area <= rep.reconstructed_bound * (1.0 + 1e-6)
            assert math.isclose(rep.reconstructed_bound, lens_area, rel_tol=1e-5)


class TestSectors:
    def test_full_cone_equals_ratio_bound_any_wedge(self):
        body = make_body(seed=7, m=5, r0=0.5)
        chart = pr.chart_for_facet(body, 0)
        bound = pr.ratio_F(1.0, chart.inradius)
        wedges = [(0.0, 0.5), (0.3, 2.0), (1.0, 1.5), (0.0, 2.0 * math.pi),
                  (2.0, 2.0 + 1e-3)]
        for wedge in wedges:
            assert abs(pr.sector_ratio(chart, 1.0, wedge) - bound) < 1e-8

    def test_monotone_in_cone_angle(self):
        _, chart = lens_chart()
        xs = np.linspace(0.1, 1.0, 10)
        ratios = [pr.sector_ratio(chart, x) for x in xs]
        assert all(b > a for a, b in zip(ratios, ratios[1:]))
        assert ratios[0] >= 1.0

    def test_half_cone_below_bound(self):
        _, chart = lens_chart()
        assert pr.sector_ratio(chart, 0.5) < 2.0

    def test_wedge_additivity(self):
        body = make_body(seed=4, m=4, r0=0.45)
        chart = pr.chart_for_facet(body, 1)
        a1, p1 = pr.sector_measures(chart, 0.7, (0.0, 0.9))
        a2, p2 = pr.sector_measures(chart, 0.7, (0.9, 2.4))
        a12, p12 = pr.sector_measures(chart, 0.7, (0.0, 2.4))
        assert math.isclose(a1 + a2, a12, rel_tol=1e-8)
        assert math.isclose(p1 + p2, p12, rel_tol=1e-12)

    def test_cumulative_excess_nonpositive_zero_at_one(self):
        body = make_body(seed=6, m=5, r0=0.4)
        chart = pr.chart_for_facet(body, 2)
        for x in np.linspace(0.1, 0.95, 9):
            assert pr.cumulative_sector_excess(chart, x, body.lam) < 0.0
        assert abs(pr.cumulative_sector_excess(chart, 1.0, body.lam)) < 1e-10

    def test_empty_sector_rejected(self):
        _, chart = lens_chart()
        with pytest.raises(InvalidParameterError):
            pr.sector_ratio(chart, 0.0)
        with pytest.raises(InvalidParameterError):
            pr.sector_measures(chart, 0.5, (1.0, 1.0))


class TestDensity:
    def test_unit_on_axis_and_increasing(self):
        body = make_body(seed=14, m=6, r0=0.35)
        chart = pr.chart_for_facet(body, 0)
        assert math.isclose(chart.density(0.0), 1.0, rel_tol=1e-12)
        ts = np.linspace(0.0, 0.5 * math.pi, 200)
        g = chart.density(ts)
        assert np.all(np.diff(g) > 0.0)

    def test_finite_difference_monotonicity(self):
        _, chart = lens_chart()
        ts = np.linspace(1e-4, 0.5 * math.pi - 1e-4, 50)
        h = 1e-4
        slopes = (chart.density(ts + h) - chart.density(ts - h)) / (2.0 * h)
        assert np.all(slopes > 0.0)

    def test_facet_points_stay_in_upper_half(self):
        # every touching facet lies within its natural radial extension
        for seed in (0, 5, 11):
            body = make_body(seed=seed, m=6, r0=0.4)
            ball = inscribed_ball(body)
            for f in body.facets:
                chart = pr.chart_for_facet(body, f.ball_index, ball)
                for loop in f.boundary_loops:
                    for eidx, _ in loop:
                        edge = body.edges[eidx]
                        for phi in np.linspace(edge.phi_start, edge.phi_end, 9):
                            x = edge.point_at(phi)
                            assert float((x - chart.center) @ chart.axis) >= -1e-9
