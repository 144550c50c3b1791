"""Radial projection onto the inscribed sphere and facet ratio bounds.

Every touching facet lies on a supporting sphere whose center sits on the
ray from the inscribed center ``o`` through the touch point.  Projecting
the facet radially onto the inscribed sphere is a star-shaped map in polar
coordinates ``(t, theta)`` about the touch axis, so projected areas reduce
to one-dimensional integrals of the radial extent ``t_max(theta)``, found
by bisection on exact sphere-ray membership tests.

The area-element pullback of the projection restricted to the supporting
sphere is ``g(t) = rho(t)^2 / (r^2 cos beta)`` with ``rho`` the ray length
and ``beta`` the incidence angle; it is 1 on the axis and strictly
increasing, which drives the per-facet ratio bound
``|F_i| / |projected F_i| <= (|boundary of matched lens|/2) / (2 pi r^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import _gl
from . import ball_polytope3 as bp3
from .errors import InvalidParameterError
from .inradius import inscribed_ball

FOUR_PI = 4.0 * math.pi
_TOUCH_TOL = 1e-9


@dataclass(frozen=True)
class RadialChart:
    """Polar chart of one touching facet about its touch axis."""

    center: np.ndarray        # inscribed center o
    inradius: float
    facet_index: int
    touch_point: np.ndarray
    axis: np.ndarray          # unit vector from o toward the touch point
    sphere_center: np.ndarray
    ball_radius: float

    @property
    def center_offset(self):
        return self.ball_radius - self.inradius  # |o - o_i|

    def ray_length(self, t):
        """Distance from o to the supporting sphere along polar angle t."""
        e = self.center_offset
        c = np.cos(t)
        return -e * c + np.sqrt(e * e * c * c + self.ball_radius ** 2 - e * e)

    def density(self, t):
        """Jacobian g(t) of the radial projection, per unit inscribed-sphere area."""
        e = self.center_offset
        c = np.cos(t)
        rho = self.ray_length(t)
        cos_beta = np.sqrt(e * e * c * c + self.ball_radius ** 2 - e * e) / self.ball_radius
        return rho * rho / (self.inradius ** 2 * cos_beta)


def chart_for_facet(polytope, facet_index, ball=None):
    """Radial chart of a facet; the facet must touch the inscribed ball."""
    if ball is None:
        ball = inscribed_ball(polytope)
    radius = polytope.radius
    o_i = polytope.centers[facet_index]
    offset = np.linalg.norm(ball.center - o_i)
    if abs(radius - offset - ball.radius) >= _TOUCH_TOL * radius:
        raise InvalidParameterError(
            f"facet {facet_index} does not touch the inscribed ball"
        )
    if offset < 1e-14:
        axis = np.array([0.0, 0.0, 1.0])  # single-ball body: any axis works
    else:
        axis = (ball.center - o_i) / offset
    return RadialChart(center=ball.center, inradius=ball.radius,
                       facet_index=facet_index,
                       touch_point=ball.center + ball.radius * axis,
                       axis=axis, sphere_center=o_i, ball_radius=radius)


def radial_project(chart, q):
    """Central projection of q onto the inscribed sphere."""
    q = np.asarray(q, dtype=float)
    d = q - chart.center
    norm = np.linalg.norm(d)
    if norm < 1e-14:
        raise InvalidParameterError("cannot project the inscribed center itself")
    return chart.center + chart.inradius * d / norm


def _chart_frame(axis):
    k = int(np.argmin(np.abs(axis)))
    e = np.zeros(3)
    e[k] = 1.0
    e1 = e - float(e @ axis) * axis
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(axis, e1)
    return e1, e2


def _facet_membership(polytope, chart, ts, thetas):
    """Ray-cast: does the supporting-sphere hit at (t, theta) lie on the facet?"""
    e1, e2 = _chart_frame(chart.axis)
    ts = np.asarray(ts)
    thetas = np.asarray(thetas)
    omega = (np.cos(ts)[:, None] * chart.axis
             + (np.sin(ts) * np.cos(thetas))[:, None] * e1
             + (np.sin(ts) * np.sin(thetas))[:, None] * e2)
    x = chart.center + chart.ray_length(ts)[:, None] * omega
    ok = np.ones(len(ts), dtype=bool)
    for k, c in enumerate(polytope.centers):
        if k == chart.facet_index:
            continue
        ok &= np.linalg.norm(x - c, axis=1) <= polytope.radius
    return ok


def _radial_extents(polytope, chart, thetas, iters=48):
    """t_max(theta) for a batch of azimuths, by vectorized bisection.

    Membership is monotone along each meridian (facets are geodesically
    convex around the touch point), so bisection between the feasible
    touch direction and the antipode is exact.
    """
    thetas = np.asarray(thetas, dtype=float)
    lo = np.zeros_like(thetas)
    hi = np.full_like(thetas, math.pi)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        good = _facet_membership(polytope, chart, mid, thetas)
        lo[good] = mid[good]
        hi[~good] = mid[~good]
    return 0.5 * (lo + hi)


def _break_azimuths(polytope, chart):
    """Azimuths where t_max(theta) can kink: projected boundary vertices."""
    e1, e2 = _chart_frame(chart.axis)
    breaks = {0.0, 2.0 * math.pi}
    facet = polytope.facets[chart.facet_index]
    for loop in facet.boundary_loops:
        for eidx, forward in loop:
            edge = polytope.edges[eidx]
            if edge.full_circle:
                continue
            for vid in (edge.start_vertex, edge.end_vertex):
                w = polytope.vertices[vid].position - chart.center
                theta = math.atan2(float(w @ e2), float(w @ e1)) % (2.0 * math.pi)
                breaks.add(theta)
    return sorted(breaks)


def projected_facet_area(polytope, chart, facet=None, rel_tol=1e-9):
    """Area of the facet's radial projection on the inscribed sphere.

    Ray-casting quadrature in polar coordinates: the azimuth circle is
    split at projected-vertex directions (the only kinks of the radial
    extent), and each smooth piece is integrated by Gauss-Legendre with
    node doubling until the relative change drops below ``rel_tol``.
    """
    if facet is None:
        facet = polytope.facets[chart.facet_index]
    if not facet.boundary_loops:
        return FOUR_PI * chart.inradius ** 2  # single ball: the whole sphere
    r2 = chart.inradius ** 2
    total = 0.0
    breaks = _break_azimuths(polytope, chart)
    for a, b in zip(breaks, breaks[1:]):
        if b - a < 1e-13:
            continue
        prev = None
        nodes = 16
        while True:
            xs, ws = _gl.nodes(nodes)
            thetas = 0.5 * (b - a) * xs + 0.5 * (a + b)
            tmax = _radial_extents(polytope, chart, thetas)
            piece = 0.5 * (b - a) * float(np.sum(ws * (1.0 - np.cos(tmax))))
            if prev is not None and abs(piece - prev) <= rel_tol * max(1.0, abs(piece)):
                break
            if nodes >= 256:
                break
            prev = piece
            nodes *= 2
        total += piece
    return r2 * total


@dataclass(frozen=True)
class Claim3Report:
    projected_areas: tuple
    total: float
    sphere_area: float
    rel_defect: float
    passed: bool


def _require_all_touching(polytope):
    ball = inscribed_ball(polytope)
    if len(ball.touching) != len(polytope.centers):
        raise InvalidParameterError(
            "all facets must touch the inscribed ball; apply reduce_to_touching first"
        )
    return ball


def claim3_check(polytope, rel_tol=1e-5):
    """Projected facet areas must tile the inscribed sphere exactly."""
    ball = _require_all_touching(polytope)
    areas = []
    for f in polytope.facets:
        chart = chart_for_facet(polytope, f.ball_index, ball)
        areas.append(projected_facet_area(polytope, chart, f))
    sphere = FOUR_PI * ball.radius ** 2
    total = float(sum(areas))
    rel = abs(total - sphere) / sphere
    return Claim3Report(projected_areas=tuple(areas), total=total,
                        sphere_area=sphere, rel_defect=rel, passed=rel <= rel_tol)


def ratio_F(lam, r):
    """The extremal facet ratio: half the matched lens boundary over 2 pi r^2.

    Scale-invariant: equals ``1 / (lam * r)``; tends to 1 in the ball limit.
    """
    if lam <= 0.0 or r <= 0.0 or r * lam > 1.0 + 1e-12:
        raise InvalidParameterError(f"need 0 < r*lam <= 1, got lam={lam}, r={r}")
    from .reference_bodies import lens3_from_inradius

    lens = lens3_from_inradius(lam, min(r, 1.0 / lam))
    return (lens.surface_area / 2.0) / (2.0 * math.pi * r * r)


@dataclass(frozen=True)
class KeyClaimReport:
    ratios: tuple
    bound: float
    at_equality: tuple      # facets flagged as full natural radial extensions
    max_ratio: float
    projected_total: float
    reconstructed_bound: float  # F * sum of projected areas (Theorem C chain)
    surface_area: float
    passed: bool


def _is_natural_extension(polytope, chart, facet, tol=1e-8):
    """True when the facet boundary lies in the equatorial plane through o."""
    scale = polytope.radius
    for loop in facet.boundary_loops:
        for eidx, forward in loop:
            edge = polytope.edges[eidx]
            for phi in np.linspace(edge.phi_start, edge.phi_end, 8):
                x = edge.point_at(phi)
                if abs(float((x - chart.center) @ chart.axis)) > tol * scale:
                    return False
    return bool(facet.boundary_loops)


def key_claim_check(polytope, tol=1e-5):
    """Per-facet ratio bound |F_i| / |projected F_i| <= F, with equality
    exactly for full natural radial extensions (lens facets)."""
    ball = _require_all_touching(polytope)
    bound = ratio_F(polytope.lam, ball.radius)
    ratios = []
    flags = []
    projected_sum = 0.0
    for f in polytope.facets:
        chart = chart_for_facet(polytope, f.ball_index, ball)
        proj = projected_facet_area(polytope, chart, f)
        projected_sum += proj
        ratios.append(f.area / proj)
        flags.append(_is_natural_extension(polytope, chart, f))
    max_ratio = max(ratios)
    area = bp3.surface_area(polytope)
    reconstructed = bound * projected_sum
    passed = (max_ratio <= bound + tol) and (area <= reconstructed * (1.0 + 1e-6))
    return KeyClaimReport(ratios=tuple(ratios), bound=bound,
                          at_equality=tuple(flags), max_ratio=max_ratio,
                          projected_total=projected_sum,
                          reconstructed_bound=reconstructed,
                          surface_area=area, passed=passed)


def sector_measures(chart, x, wedge=(0.0, math.pi / 3.0)):
    """(area, projected area) of the conical sector cut by a wedge.

    The sector collects directions within polar angle ``x * pi/2`` of the
    touch axis and azimuth inside the wedge; its supporting-sphere area is
    the projected area weighted by the density.
    """
    if not 0.0 < x <= 1.0:
        raise InvalidParameterError(f"cone fraction x must lie in (0, 1], got {x}")
    t1, t2 = wedge
    if not 0.0 < t2 - t1 <= 2.0 * math.pi:
        raise InvalidParameterError(f"wedge dihedral must lie in (0, 2*pi], got {wedge}")
    t_top = 0.5 * math.pi * x
    num, _ = quad(lambda t: chart.density(t) * math.sin(t), 0.0, t_top,
                  epsabs=0.0, epsrel=1e-12, limit=200)
    r2 = chart.inradius ** 2
    return ((t2 - t1) * r2 * num,
            (t2 - t1) * r2 * (1.0 - math.cos(t_top)))


def sector_ratio(chart, x, wedge=(0.0, math.pi / 3.0)):
    """Measure ratio |C_x| / |projected C_x| of a conical sector.

    One-dimensional polar quadrature; nondecreasing in x, equal to the
    extremal ratio at x = 1 independently of the wedge.
    """
    area, projected = sector_measures(chart, x, wedge)
    return area / projected


def cumulative_sector_excess(chart, x, lam):
    """Integral of (g - F) sin t up to the cone angle; nonpositive, zero at x=1."""
    if not 0.0 < x <= 1.0:
        raise InvalidParameterError(f"cone fraction x must lie in (0, 1], got {x}")
    bound = ratio_F(lam, chart.inradius)
    t_top = 0.5 * math.pi * x
    val, _ = quad(lambda t: (chart.density(t) - bound) * math.sin(t), 0.0, t_top,
                  epsabs=1e-13, epsrel=1e-11, limit=200)
    return val
