"""Build combinatorics and exact measures of ball polytopes."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_body, mc_facet_area
from lch import ball_polytope3 as bp3
from lch import harness
from lch.errors import DegenerateBodyError, EmptyBodyError, InvalidParameterError

FOUR_PI = 4.0 * math.pi
LENS_CENTERS = [[0.0, 0.0, -0.5], [0.0, 0.0, 0.5]]


def lens(lam=1.0):
    return bp3.build(lam, np.asarray(LENS_CENTERS) / lam)


class TestBuild:
    def test_lens_combinatorics(self):
        body = lens()
        assert len(body.facets) == 2
        assert len(body.vertices) == 0
        assert len(body.edges) == 1
        edge = body.edges[0]
        assert edge.full_circle
        assert math.isclose(edge.circle_radius, math.sqrt(3.0) / 2.0, rel_tol=1e-14)
        assert math.isclose(edge.dihedral, math.pi / 3.0, rel_tol=1e-12)

    def test_single_ball(self):
        body = bp3.build(1.0, [[0.1, -0.2, 0.3]])
        assert len(body.facets) == 1
        assert len(body.edges) == 0
        assert math.isclose(body.facets[0].area, FOUR_PI, rel_tol=1e-14)

    def test_redundant_ball_reported_and_dropped(self):
        body = bp3.build(1.0, LENS_CENTERS + [[0.0, 0.0, 0.4]])
        assert body.build_report.redundant_indices == (2,)
        assert len(body.facets) == 2
        assert math.isclose(bp3.surface_area(body), 2.0 * math.pi, rel_tol=1e-12)

    def test_redundancy_by_membership_sampling(self):
        body = bp3.build(1.0, LENS_CENTERS)
        rng = np.random.default_rng(0)
        pts = rng.uniform(-1.0, 1.0, size=(5000, 3))
        inside = np.array([bp3.membership(body, p) for p in pts])
        third = np.linalg.norm(pts - np.array([0.0, 0.0, 0.4]), axis=1) <= 1.0
        assert np.all(third[inside])  # B(0,0,0.4) really contains the lens

    def test_empty_intersection(self):
        with pytest.raises(EmptyBodyError):
            bp3.build(1.0, [[0, 0, 0], [3.0, 0, 0]])

    def test_degenerate_touching(self):
        with pytest.raises(DegenerateBodyError):
            bp3.build(1.0, [[0, 0, -1.0], [0, 0, 1.0]])

    def test_four_spheres_through_a_point_rejected(self):
        # touching construction with four coplanar-symmetric directions makes
        # four spheres meet at two common points
        u = np.array([[1, 0, 0], [0, 1, 0], [-1, 0, 0], [0, -1, 0]], dtype=float)
        with pytest.raises(DegenerateBodyError):
            bp3.build(1.0, -0.6 * u)

    def test_bad_parameters(self):
        with pytest.raises(InvalidParameterError):
            bp3.build(-1.0, LENS_CENTERS)
        with pytest.raises(InvalidParameterError):
            bp3.build(1.0, np.zeros((0, 3)))


class TestMeasures:
    def test_ball_measures(self):
        body = bp3.build(1.0, [[0, 0, 0]])
        assert math.isclose(bp3.surface_area(body), FOUR_PI, rel_tol=1e-14)
        assert math.isclose(bp3.volume(body), FOUR_PI / 3.0, rel_tol=1e-14)

    def test_lens_closed_forms(self):
        body = lens()
        assert math.isclose(bp3.surface_area(body), 2.0 * math.pi, rel_tol=1e-12)
        assert math.isclose(bp3.volume(body), 5.0 * math.pi / 12.0, rel_tol=1e-12)

    def test_lens_family_matches_closed_form(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            alpha = rng.uniform(0.05, 0.5 * math.pi)
            d = 2.0 * math.cos(alpha)
            body = bp3.build(1.0, [[0, 0, -d / 2], [0, 0, d / 2]])
            h = 1.0 - math.cos(alpha)
            assert math.isclose(bp3.surface_area(body), FOUR_PI * h, rel_tol=1e-10)
            assert math.isclose(bp3.volume(body),
                                (2.0 * math.pi / 3.0) * h * h * (3.0 - h),
                                rel_tol=1e-10)

    def test_facet_area_against_monte_carlo(self):
        body = make_body(seed=5, m=4, r0=0.45)
        for k in range(len(body.facets)):
            est, se = mc_facet_area(body, k, n=300_000, seed=k)
            assert abs(body.facets[k].area - est) <= 3.0 * se

    def test_volume_against_monte_carlo(self):
        body = make_body(seed=8, m=6, r0=0.5)
        est, se = harness.mc_volume(body, n_samples=1_000_000, seed=1)
        assert abs(bp3.volume(body) - est) <= 3.0 * se

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0.2, 5.0), st.integers(0, 10_000))
    def test_scaling_law(self, scale, seed):
        body = make_body(seed=seed % 100, m=5, r0=0.4)
        scaled = bp3.build(body.lam / scale, body.centers * scale)
        assert math.isclose(bp3.surface_area(scaled),
                            scale ** 2 * bp3.surface_area(body), rel_tol=1e-10)
        assert math.isclose(bp3.volume(scaled),
                            scale ** 3 * bp3.volume(body), rel_tol=1e-10)

    def test_adding_ball_shrinks_measures(self):
        rng = np.random.default_rng(21)
        body = make_body(seed=3, m=4, r0=0.5)
        for _ in range(10):
            u = rng.normal(size=3)
            u /= np.linalg.norm(u)
            extra = 0.4 * u  # within 2R(1 - eps) of every existing center
            grown = bp3.build(1.0, np.vstack([body.centers, extra]))
            assert bp3.surface_area(grown) <= bp3.surface_area(body) + 1e-12
            assert bp3.volume(grown) <= bp3.volume(body) + 1e-12
            if len(grown.build_report.redundant_indices) == 0:
                assert bp3.surface_area(grown) < bp3.surface_area(body) - 1e-12


class TestInvariants:
    def test_edge_dihedral_identity(self):
        body = make_body(seed=17, m=7, r0=0.35)
        for e in body.edges:
            i, j = e.pair
            d = np.linalg.norm(body.centers[i] - body.centers[j])
            lhs = math.cos(e.dihedral)
            rhs = 1.0 - 0.5 * d * d * body.lam ** 2
            assert abs(lhs - rhs) < 1e-10
            # cross-check via outward normals at an edge point
            x = e.point_at(e.phi_start + 0.3 * e.arc_angle)
            n_i = (x - body.centers[i]) / body.radius
            n_j = (x - body.centers[j]) / body.radius
            assert abs(float(n_i @ n_j) - lhs) < 1e-10

    def test_euler_formula_trivalent(self):
        for seed in range(8):
            body = make_body(seed=seed, m=6, r0=0.4)
            if body.vertices:
                v = len(body.vertices)
                e = len(body.edges)
                f = len(body.facets)
                assert v - e + f == 2

    def test_vertices_on_spheres_and_inside_balls(self):
        body = make_body(seed=30, m=8, r0=0.3)
        for v in body.vertices:
            for i in v.incident:
                d = np.linalg.norm(v.position - body.centers[i])
                assert abs(d - body.radius) < 1e-10
            for k in range(len(body.centers)):
                d = np.linalg.norm(v.position - body.centers[k])
                assert d <= body.radius + 1e-10

    def test_membership_examples(self):
        body = lens()
        assert bp3.membership(body, [0.0, 0.0, 0.0])
        assert not bp3.membership(body, [0.0, 0.0, 0.51])
        ball = bp3.build(1.0, [[0, 0, 0]])
        assert bp3.membership(ball, [1.0, 0.0, 0.0])

    def test_validate_lambda_convexity(self):
        for body in (lens(), bp3.build(1.0, [[0, 0, 0]]), make_body(seed=2, m=6, r0=0.4)):
            report = bp3.validate_lambda_convexity(body, samples=2000, seed=0)
            assert report.passed
            assert report.max_violation < 1e-9
