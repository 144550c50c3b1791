"""Convex polygons bounded by curves of constant geodesic curvature in M^2(c).

In the conformal charts fixed by ``model_space`` every supporting region
(disk, horodisk, equidistant domain) is bounded by a Euclidean circle, so
the boundary combinatorics reduces to the same circular-interval game as
in three dimensions: every other region forbids one open arc of each
candidate circle.  Conformality keeps chart angles equal to metric angles,
so turning angles are Euclidean; arc lengths integrate the conformal
factor along the chart circle.

All boundary arcs have geodesic curvature equal to the curvature bound, so
for nonzero ambient curvature the area follows from the total-turning
identity ``c * area + lam * perimeter + sum(turning angles) = 2 pi``; the
Euclidean area uses the shoelace over the vertices plus circular-segment
corrections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize

from . import model_space as ms
from . import _gl
from ._circular import TWO_PI, complement_of_forbidden, single_constraint_interval
from .errors import (
    EmptyBodyError,
    InvalidParameterError,
    NonCompactError,
    NumericError,
    TopologyError,
)

_VERTEX_TOL = 1e-9


# ---------------------------------------------------------------------------
# Supporting lambda-disks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LambdaDisk2:
    """One supporting region of boundary curvature lam in M^2(c).

    Exactly one parameter block is populated, matching ``kind``:
    ``center``/``radius`` for metric disks, ``ideal``/``level`` for
    horodisks, ``geodesic``/``offset`` for equidistant domains.
    """

    space: ms.ModelSpace
    lam: float
    kind: str
    center: tuple | None = None
    radius: float | None = None
    ideal: tuple | None = None
    level: float = 0.0
    geodesic: tuple | None = None
    offset: float | None = None


def euclidean_disk(space, lam, center):
    if space.curvature != 0.0:
        raise InvalidParameterError("euclidean disks need curvature 0")
    return LambdaDisk2(space=space, lam=lam, kind="euclidean",
                       center=tuple(np.asarray(center, dtype=float)), radius=1.0 / lam)


def geodesic_disk(space, lam, center):
    cls = ms.classify_umbilical(space, lam)
    if cls.kind not in (ms.GEODESIC_SPHERE_SPHERICAL, ms.GEODESIC_SPHERE_HYPERBOLIC):
        raise InvalidParameterError(
            f"lam={lam} does not bound geodesic disks at curvature {space.curvature}"
        )
    return LambdaDisk2(space=space, lam=lam, kind="geodesic",
                       center=tuple(np.asarray(center, dtype=float)), radius=cls.size)


def horodisk(space, lam, ideal, level=0.0):
    cls = ms.classify_umbilical(space, lam)
    if cls.kind != ms.HOROSPHERE:
        raise InvalidParameterError(f"lam={lam} is not the horocycle curvature")
    ideal = np.asarray(ideal, dtype=float)
    norm = np.linalg.norm(ideal)
    if abs(norm - 1.0) > 1e-9:
        raise InvalidParameterError("horodisk ideal point must be a unit vector")
    return LambdaDisk2(space=space, lam=lam, kind="horo",
                       ideal=tuple(ideal / norm), level=float(level))


def equidistant_domain(space, lam, g1, g2):
    """Domain bounded by the equidistant on the left of the oriented geodesic.

    The region is ``{signed left distance <= characteristic distance}``: it
    contains the base geodesic and everything to its right.
    """
    cls = ms.classify_umbilical(space, lam)
    if cls.kind != ms.EQUIDISTANT:
        raise InvalidParameterError(f"lam={lam} is not in the equidistant regime")
    return LambdaDisk2(space=space, lam=lam, kind="equidistant",
                       geodesic=(tuple(np.asarray(g1, dtype=float)),
                                 tuple(np.asarray(g2, dtype=float))),
                       offset=cls.size)


# ---------------------------------------------------------------------------
# Chart circles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChartCircle:
    center: np.ndarray
    radius: float
    side: int  # +1: region is the inside of the circle; -1: the outside


def _poincare_circle(center, rho):
    m = np.asarray(center, dtype=float)
    t = math.tanh(0.5 * rho)
    mm = float(m @ m)
    den = 1.0 - t * t * mm
    return ChartCircle(center=m * (1.0 - t * t) / den,
                       radius=t * (1.0 - mm) / den, side=+1)


def _spherical_circle(center, rho):
    n = ms.to_sphere(np.asarray(center, dtype=float))
    # Diametrical cap points along the great circle through N and the poles
    # project to a diameter of the chart circle.
    t = np.array([0.0, 0.0, 1.0]) - n[2] * n
    nt = np.linalg.norm(t)
    if nt < 1e-12:
        t = np.array([1.0, 0.0, 0.0]) - n[0] * n
        nt = np.linalg.norm(t)
    t /= nt
    a = ms.from_sphere(math.cos(rho) * n + math.sin(rho) * t)
    b = ms.from_sphere(math.cos(rho) * n - math.sin(rho) * t)
    cc = 0.5 * (a + b)
    rr = 0.5 * float(np.linalg.norm(a - b))
    side = +1
    if float(n @ np.array([0.0, 0.0, -1.0])) > math.cos(rho):
        side = -1  # cap contains the projection pole: image is a disk complement
    return ChartCircle(center=cc, radius=rr, side=side)


def _horo_circle(ideal, level):
    xi = np.asarray(ideal, dtype=float)
    tau = -math.tanh(0.5 * level)
    return ChartCircle(center=xi * 0.5 * (1.0 + tau),
                       radius=0.5 * (1.0 - tau), side=+1)


def _equidistant_circle(space, disk):
    g1 = np.asarray(disk.geodesic[0], dtype=float)
    g2 = np.asarray(disk.geodesic[1], dtype=float)
    base = _geodesic_interior_points(g1, g2, (0.3, 0.5, 0.7))
    pts = []
    for w in base:
        n_left = _geodesic_left_normal(g1, g2, w)
        pts.append(ms.exp_map(space, w, n_left, disk.offset))
    cc, rr = _circle_through(pts[0], pts[1], pts[2])
    probe = ms.exp_map(space, base[1], _geodesic_left_normal(g1, g2, base[1]),
                       disk.offset - 0.5)
    inside = float((probe - cc) @ (probe - cc)) < rr * rr
    return ChartCircle(center=cc, radius=rr, side=+1 if inside else -1)


def _circle_through(p1, p2, p3):
    a = 2.0 * np.array([p2 - p1, p3 - p1])
    b = np.array([float(p2 @ p2 - p1 @ p1), float(p3 @ p3 - p1 @ p1)])
    try:
        c = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise NumericError("equidistant boundary is numerically straight") from exc
    return c, float(np.linalg.norm(p1 - c))


def _geodesic_interior_points(g1, g2, fractions):
    """Points on the geodesic through g1, g2, spread along its chart arc."""
    kind, a, b = ms.geodesic_chart_circle(g1, g2)
    if kind == "line":
        lo, hi = -0.45, 0.45
        return [a + (lo + f * (hi - lo)) * b * 2.0 for f in fractions]
    center, radius = a, b
    # Angular window of the arc inside the unit disk: between the two ideal
    # intersection points with the unit circle.
    d = np.linalg.norm(center)
    cos_half = math.sqrt(max(0.0, d * d - radius * radius)) / d  # = 1/d by orthogonality
    base_ang = math.atan2(-center[1], -center[0])
    half = math.acos(max(-1.0, min(1.0, (d * d + radius * radius - 1.0) / (2.0 * d * radius))))
    return [center + radius * np.array([math.cos(base_ang + (2.0 * f - 1.0) * 0.8 * half),
                                        math.sin(base_ang + (2.0 * f - 1.0) * 0.8 * half)])
            for f in fractions]


def _geodesic_left_normal(g1, g2, w):
    """Unit chart direction of increasing left-distance at a geodesic point."""
    kind, a, b = ms.geodesic_chart_circle(g1, g2)
    g1 = np.asarray(g1, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    if kind == "line":
        return np.array([-b[1], b[0]])
    center = a
    radial = w - center
    radial = radial / np.linalg.norm(radial)
    tangent_at_g1 = np.array([-(g1 - center)[1], (g1 - center)[0]])
    if float(tangent_at_g1 @ (g2 - g1)) < 0.0:
        # traversal g1 -> g2 runs clockwise on this circle
        left_sign = -1.0
    else:
        left_sign = 1.0
    # Left of ccw traversal points toward the circle center; flip for cw.
    return -left_sign * radial


def chart_circle(disk):
    space = disk.space
    if disk.kind == "euclidean":
        return ChartCircle(center=np.asarray(disk.center, dtype=float),
                           radius=disk.radius, side=+1)
    if disk.kind == "geodesic":
        if space.curvature == -1.0:
            return _poincare_circle(disk.center, disk.radius)
        return _spherical_circle(disk.center, disk.radius)
    if disk.kind == "horo":
        return _horo_circle(disk.ideal, disk.level)
    if disk.kind == "equidistant":
        return _equidistant_circle(space, disk)
    raise InvalidParameterError(f"unknown disk kind {disk.kind!r}")


# ---------------------------------------------------------------------------
# Compactness of hyperbolic intersections
# ---------------------------------------------------------------------------

def _ideal_closure_forbidden(disk):
    """Forbidden open arcs of ideal directions (complement of the closure).

    Returns a list of (center_angle, half_width) pairs describing ideal
    directions NOT in the closure of the region, or None when the closure
    is empty (compact region).
    """
    if disk.kind == "geodesic":
        return None
    if disk.kind == "horo":
        ang = math.atan2(disk.ideal[1], disk.ideal[0])
        # closure is the single ideal point: forbid the complementary arc
        return [((ang + math.pi) % TWO_PI, math.pi - 1e-12)]
    circle = chart_circle(disk)
    # Ideal endpoints of the bounding equidistant arc.
    d = float(np.linalg.norm(circle.center))
    r = circle.radius
    cos_half = (d * d + 1.0 - r * r) / (2.0 * d)
    cos_half = max(-1.0, min(1.0, cos_half))
    half = math.acos(cos_half)
    toward = math.atan2(circle.center[1], circle.center[0])
    # The closure is the closed ideal arc on the domain side; the open
    # complementary arc is forbidden.  The domain side contains the ideal
    # arc away from the circle center when the domain is the outside.
    if circle.side == -1:
        return [(toward, half)]
    return [((toward + math.pi) % TWO_PI, math.pi - half)]


def _check_compact(space, disks):
    if space.curvature != -1.0:
        return
    if any(d.kind == "geodesic" for d in disks):
        return
    forbidden = []
    for d in disks:
        fb = _ideal_closure_forbidden(d)
        if fb is None:
            return
        forbidden.extend((c, h, None) for c, h in fb)
    arcs, full = complement_of_forbidden(forbidden, eps=1e-13)
    if full or arcs:
        raise NonCompactError(
            "the intersection keeps a cone of ideal directions; "
            "add disks or reduce the inradius below the characteristic distance"
        )


# ---------------------------------------------------------------------------
# The polygon
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Arc2:
    disk_index: int
    circle: ChartCircle
    phi_start: float
    phi_end: float
    full_circle: bool
    start_vertex: int | None
    end_vertex: int | None
    length: float

    @property
    def angle(self):
        return self.phi_end - self.phi_start

    def point_at(self, phi):
        return self.circle.center + self.circle.radius * np.array(
            [math.cos(phi), math.sin(phi)])

    def travel_endpoints(self):
        """(entry phi, exit phi) in traversal order (body on the left)."""
        if self.circle.side == +1:
            return self.phi_start, self.phi_end
        return self.phi_end, self.phi_start

    def tangent_at(self, phi):
        w = np.array([math.cos(phi), math.sin(phi)])
        t = np.array([-w[1], w[0]])
        return t if self.circle.side == +1 else -t


@dataclass(frozen=True)
class ArcPolygon2:
    space: ms.ModelSpace
    lam: float
    disks: tuple
    boundary: tuple        # arcs in counterclockwise traversal order
    vertices: tuple        # chart points; vertex k starts boundary[k]
    turning_angles: tuple  # angle at vertex k (between boundary[k-1] and boundary[k])

    @property
    def centers(self):
        """Disk centers (Euclidean polygons only); feeds the MEB duality."""
        if self.space.curvature != 0.0 or any(d.kind != "euclidean" for d in self.disks):
            raise InvalidParameterError("centers are only defined for Euclidean polygons")
        return np.asarray([d.center for d in self.disks])

    def membership(self, z, slack=1e-12):
        z = np.asarray(z, dtype=float)
        for d in self.disks:
            circle = chart_circle(d)
            gap = float((z - circle.center) @ (z - circle.center)) - circle.radius ** 2
            if circle.side * gap > slack:
                return False
        return True


def _arc_length(space, circle, phi0, phi1):
    c = space.curvature
    if c == 0.0:
        return circle.radius * (phi1 - phi0)
    nodes = 48
    prev = None
    while True:
        xs, ws = _gl.nodes(nodes)
        phi = 0.5 * (phi1 - phi0) * xs + 0.5 * (phi0 + phi1)
        z = circle.center[None, :] + circle.radius * np.stack(
            [np.cos(phi), np.sin(phi)], axis=1)
        s = np.sum(z * z, axis=1)
        if c == -1.0:
            factor = 2.0 / (1.0 - s)
            if np.any(s >= 1.0):
                raise InvalidParameterError("arc leaves the unit-disk chart")
        else:
            factor = 2.0 / (1.0 + s)
        val = 0.5 * (phi1 - phi0) * circle.radius * float(np.sum(ws * factor))
        if prev is not None and abs(val - prev) <= 1e-13 * max(1.0, abs(val)):
            return val
        if nodes >= 768:
            return val
        prev = val
        nodes *= 2


def build2(space, lam, disks):
    """Intersect supporting lambda-disks into an arc polygon.

    Raises ``EmptyBodyError`` for empty intersections, ``NonCompactError``
    for unbounded hyperbolic intersections of horodisks/equidistants, and
    ``TopologyError`` if the boundary fails to close into one loop.
    """
    disks = tuple(disks)
    if not disks:
        raise InvalidParameterError("need at least one disk")
    if lam <= 0.0:
        raise InvalidParameterError(f"lam must be positive, got {lam}")
    space.require_metric_layer()
    _check_compact(space, disks)
    circles = [chart_circle(d) for d in disks]
    scale = max(c.radius for c in circles)

    raw = []
    for i, ci in enumerate(circles):
        forbidden = []
        dead = False
        for j, cj in enumerate(circles):
            if j == i:
                continue
            dv = ci.center - cj.center
            a_coef = 2.0 * ci.radius * float(dv[0])
            b_coef = 2.0 * ci.radius * float(dv[1])
            const = float(dv @ dv) + ci.radius ** 2 - cj.radius ** 2
            # side=+1 wants |z - c_j|^2 <= r_j^2, side=-1 the reverse.
            kind, phi0, psi = single_constraint_interval(
                cj.side * a_coef, cj.side * b_coef, -cj.side * const)
            if kind == "empty":
                dead = True
                break
            if kind == "cut":
                forbidden.append((phi0, psi, j))
        if dead:
            continue
        arcs, full = complement_of_forbidden(forbidden)
        if full:
            raw.append((i, 0.0, TWO_PI, True, None, None))
        else:
            for (s, e, lab_s, lab_e) in arcs:
                raw.append((i, s, e, False, lab_s, lab_e))

    if not raw:
        raise EmptyBodyError("the disks have empty intersection")

    # Vertices from arc endpoints.
    positions = []
    endpoint_vertex = {}
    tol = _VERTEX_TOL * scale
    for arc_id, (i, s, e, full, lab_s, lab_e) in enumerate(raw):
        if full:
            continue
        ci = circles[i]
        for which, phi in (("s", s), ("e", e)):
            p = ci.center + ci.radius * np.array([math.cos(phi), math.sin(phi)])
            hit = None
            for vid, q in enumerate(positions):
                if np.linalg.norm(p - q) <= tol:
                    hit = vid
                    break
            if hit is None:
                hit = len(positions)
                positions.append(p)
            endpoint_vertex[(arc_id, which)] = hit

    arcs = []
    for arc_id, (i, s, e, full, lab_s, lab_e) in enumerate(raw):
        ci = circles[i]
        arcs.append(Arc2(disk_index=i, circle=ci, phi_start=s, phi_end=e,
                         full_circle=full,
                         start_vertex=endpoint_vertex.get((arc_id, "s")),
                         end_vertex=endpoint_vertex.get((arc_id, "e")),
                         length=_arc_length(space, ci, s, e)))

    # Chain into a single counterclockwise boundary loop.
    if len(arcs) == 1 and arcs[0].full_circle:
        return ArcPolygon2(space=space, lam=lam, disks=disks,
                           boundary=(arcs[0],), vertices=(), turning_angles=())
    if any(a.full_circle for a in arcs):
        raise TopologyError("mixed full-circle and open arcs on the boundary")

    start_of = {}
    for k, a in enumerate(arcs):
        entry_phi, _ = a.travel_endpoints()
        sv = a.start_vertex if a.circle.side == +1 else a.end_vertex
        ev = a.end_vertex if a.circle.side == +1 else a.start_vertex
        start_of.setdefault(sv, []).append(k)
    ordered = []
    used = set()
    cur = 0
    for _ in range(len(arcs)):
        ordered.append(cur)
        used.add(cur)
        a = arcs[cur]
        ev = a.end_vertex if a.circle.side == +1 else a.start_vertex
        nxt = [k for k in start_of.get(ev, ()) if k not in used]
        if not nxt:
            break
        cur = nxt[0]
    if len(ordered) != len(arcs):
        raise TopologyError("boundary arcs do not close into a single loop")

    loop = [arcs[k] for k in ordered]
    vertices = []
    turning = []
    for k, a in enumerate(loop):
        prev = loop[k - 1]
        _, exit_phi = prev.travel_endpoints()
        entry_phi, _ = a.travel_endpoints()
        sv = a.start_vertex if a.circle.side == +1 else a.end_vertex
        vertices.append(np.asarray(positions[sv]))
        t_in = prev.tangent_at(exit_phi)
        t_out = a.tangent_at(entry_phi)
        turning.append(math.atan2(float(t_in[0] * t_out[1] - t_in[1] * t_out[0]),
                                  float(t_in @ t_out)))
    return ArcPolygon2(space=space, lam=lam, disks=disks, boundary=tuple(loop),
                       vertices=tuple(vertices), turning_angles=tuple(turning))


def perimeter2(poly):
    return float(sum(a.length for a in poly.boundary))


def area2(poly):
    """Enclosed area: shoelace plus segment bulges (flat) or total turning."""
    c = poly.space.curvature
    if c == 0.0:
        shoelace = 0.0
        n = len(poly.vertices)
        for k in range(n):
            x0, y0 = poly.vertices[k]
            x1, y1 = poly.vertices[(k + 1) % n]
            shoelace += x0 * y1 - x1 * y0
        segments = 0.0
        for a in poly.boundary:
            theta = a.angle
            segments += 0.5 * (theta - math.sin(theta)) * a.circle.radius ** 2
        return 0.5 * shoelace + segments if n else math.pi / poly.lam ** 2
    total_turn = sum(poly.turning_angles)
    return (TWO_PI - total_turn - poly.lam * perimeter2(poly)) / c


def total_turning_defect(poly):
    """Residual of c*area + lam*perimeter + sum(turning) = 2*pi (flat: exact)."""
    c = poly.space.curvature
    return (c * area2(poly) + poly.lam * perimeter2(poly)
            + sum(poly.turning_angles) - TWO_PI)


# ---------------------------------------------------------------------------
# Flat-case checks (vertex-angle constraints, derivative, isoperimetry)
# ---------------------------------------------------------------------------

def _require_flat(poly):
    if poly.space.curvature != 0.0:
        raise InvalidParameterError("this check is defined for Euclidean polygons")


def lens_vertex_angle(lam, perimeter):
    """Vertex angle of the flat lens with the given perimeter."""
    if not 0.0 < perimeter * lam <= TWO_PI + 1e-12:
        raise InvalidParameterError(f"perimeter {perimeter} out of range for lam={lam}")
    return math.pi - 0.5 * perimeter * lam


@dataclass(frozen=True)
class ConstraintsReport:
    gamma_star: float
    max_angle: float
    angle_sum: float
    passed: bool


def constraints_check(poly, tol=1e-9):
    """Vertex angles are capped by, and sum to twice, the lens angle."""
    _require_flat(poly)
    gamma_star = lens_vertex_angle(poly.lam, perimeter2(poly))
    angles = poly.turning_angles
    max_angle = max(angles) if angles else 0.0
    angle_sum = float(sum(angles))
    passed = (max_angle <= gamma_star + tol
              and abs(angle_sum - 2.0 * gamma_star) <= tol)
    return ConstraintsReport(gamma_star=gamma_star, max_angle=max_angle,
                             angle_sum=angle_sum, passed=passed)


def initial_derivative_2d(poly):
    """Right derivative of the eroded perimeter at t = 0 (flat case)."""
    _require_flat(poly)
    return (-poly.lam * perimeter2(poly)
            - 2.0 * sum(math.tan(0.5 * g) for g in poly.turning_angles))


@dataclass(frozen=True)
class GoalReport:
    lhs: float
    rhs: float
    at_equality: bool
    passed: bool


def goal_inequality_check(poly, tol=1e-12):
    """sum tan(gamma_i/2) <= 2 tan(gamma*/2), equality only for the lens."""
    _require_flat(poly)
    gamma_star = lens_vertex_angle(poly.lam, perimeter2(poly))
    lhs = float(sum(math.tan(0.5 * g) for g in poly.turning_angles))
    rhs = 2.0 * math.tan(0.5 * gamma_star)
    equal = abs(lhs - rhs) <= 1e-9 and len(poly.turning_angles) == 2
    return GoalReport(lhs=lhs, rhs=rhs, at_equality=equal, passed=lhs <= rhs + tol)


@dataclass(frozen=True)
class Rip2DReport:
    area: float
    lens_area: float
    margin: float
    passed: bool


def rip2d_check(poly, tol=1e-9):
    """Flat reverse isoperimetric inequality against the matched lens."""
    _require_flat(poly)
    from .reference_bodies import lens2_measures

    area = area2(poly)
    lens_area = lens2_measures(poly.lam, perimeter2(poly))
    return Rip2DReport(area=area, lens_area=lens_area, margin=area - lens_area,
                       passed=area >= lens_area - tol)


# ---------------------------------------------------------------------------
# Inradius in all three geometries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InscribedDisk2:
    center: np.ndarray  # chart point
    radius: float
    touching: tuple


def _compile_depth(poly):
    """Vectorized evaluator of min signed distance over the disks.

    Takes an (N, 2) array of chart points and returns (N,) depths, with
    -inf outside the chart domain.  Disk parameters are precomputed once.
    """
    c = poly.space.curvature
    params = []
    for d in poly.disks:
        if d.kind in ("euclidean", "geodesic"):
            params.append(("ball", np.asarray(d.center, dtype=float), d.radius, None))
        elif d.kind == "horo":
            params.append(("horo", np.asarray(d.ideal, dtype=float), d.level, None))
        else:
            kind, a, b = ms.geodesic_chart_circle(d.geodesic[0], d.geodesic[1])
            sign = 1.0
            if kind == "circle":
                probe_pt = _nudge_left(d.geodesic[0], d.geodesic[1])
                s_probe = ms.signed_distance_to_geodesic(
                    d.geodesic[0], d.geodesic[1], probe_pt)
                v_probe = (float((probe_pt - a) @ (probe_pt - a)) - b * b)
                sign = math.copysign(1.0, s_probe * v_probe)
            params.append(("equi", (kind, a, b, sign), d.offset, d.geodesic))

    def depth(points):
        points = np.atleast_2d(points)
        s = np.sum(points * points, axis=1)
        out = np.full(len(points), np.inf)
        valid = np.ones(len(points), dtype=bool)
        if c == -1.0:
            valid = s < 1.0 - 1e-12
        ss = np.where(valid, s, 0.0)
        for kind, p1, p2, extra in params:
            if kind == "ball":
                delta = points - p1
                dd = np.sum(delta * delta, axis=1)
                if c == 0.0:
                    dist = np.sqrt(dd)
                elif c == -1.0:
                    den = (1.0 - float(p1 @ p1)) * (1.0 - ss)
                    dist = np.arccosh(np.maximum(1.0, 1.0 + 2.0 * dd / den))
                else:
                    pa = ms.to_sphere(p1)
                    pb = (np.concatenate([2.0 * points, (1.0 - ss)[:, None]], axis=1)
                          / (1.0 + ss)[:, None])
                    dist = np.arccos(np.clip(pb @ pa, -1.0, 1.0))
                val = p2 - dist
            elif kind == "horo":
                delta = points - p1
                dd = np.sum(delta * delta, axis=1)
                val = p2 - np.log(np.maximum(dd, 1e-300) / np.maximum(1.0 - ss, 1e-300))
            else:
                gkind, a, b, sign = p1
                if gkind == "line":
                    left = np.array([-b[1], b[0]])
                    sd = np.arcsinh(2.0 * (points - a) @ left / (1.0 - ss))
                else:
                    delta = points - a
                    value = (np.sum(delta * delta, axis=1) - b * b) / (b * (1.0 - ss))
                    sd = sign * np.arcsinh(value)
                val = p2 - sd
            out = np.minimum(out, val)
        return np.where(valid, out, -np.inf)

    def depth_scalar(x, y):
        ssq = x * x + y * y
        if c == -1.0 and ssq >= 1.0 - 1e-12:
            return -math.inf
        best = math.inf
        for kind, p1, p2, extra in params:
            if kind == "ball":
                dx, dy = x - p1[0], y - p1[1]
                dd = dx * dx + dy * dy
                if c == 0.0:
                    dist = math.sqrt(dd)
                elif c == -1.0:
                    den = (1.0 - float(p1 @ p1)) * (1.0 - ssq)
                    dist = math.acosh(max(1.0, 1.0 + 2.0 * dd / den))
                else:
                    pa = ms.to_sphere(p1)
                    w = 1.0 + ssq
                    dot = (2.0 * x * pa[0] + 2.0 * y * pa[1] + (1.0 - ssq) * pa[2]) / w
                    dist = math.acos(max(-1.0, min(1.0, dot)))
                val = p2 - dist
            elif kind == "horo":
                dx, dy = x - p1[0], y - p1[1]
                dd = dx * dx + dy * dy
                val = p2 - math.log(max(dd, 1e-300) / max(1.0 - ssq, 1e-300))
            else:
                gkind, a, b, sign = p1
                if gkind == "line":
                    sd = math.asinh(2.0 * (-b[1] * (x - a[0]) + b[0] * (y - a[1]))
                                    / (1.0 - ssq))
                else:
                    dx, dy = x - a[0], y - a[1]
                    sd = sign * math.asinh((dx * dx + dy * dy - b * b)
                                           / (b * (1.0 - ssq)))
                val = p2 - sd
            if val < best:
                best = val
        return best

    depth.scalar = depth_scalar
    return depth


def _nudge_left(g1, g2):
    g1 = np.asarray(g1, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    chord = g2 - g1
    left = np.array([-chord[1], chord[0]])
    left /= np.linalg.norm(left)
    return 0.5 * (g1 + g2) + 1e-5 * left


def _depth(poly, z):
    return float(_compile_depth(poly)(np.atleast_2d(z))[0])


def inradius2(poly, n_starts=64, seed=0):
    """Largest inscribed disk.

    Euclidean polygons use the exact enclosing-ball duality.  Curved
    polygons maximize the minimal signed distance to the supporting disks:
    a vectorized batch of probe starts, then simplex refinement of the
    best candidates (deterministic for a fixed seed).
    """
    if poly.space.curvature == 0.0 and all(d.kind == "euclidean" for d in poly.disks):
        from .inradius import inscribed_ball

        ball = inscribed_ball(poly)
        return InscribedDisk2(center=ball.center, radius=ball.radius,
                              touching=ball.touching)

    depth = _compile_depth(poly)
    pts = [np.asarray(v) for v in poly.vertices]
    for a in poly.boundary:
        pts.append(a.point_at(0.5 * (a.phi_start + a.phi_end)))
    anchor = np.mean(pts, axis=0) if pts else np.zeros(2)
    spread = max(1e-3, max(np.linalg.norm(p - anchor) for p in pts) if pts else 1.0)
    rng = np.random.default_rng(seed)
    probes = anchor + rng.uniform(-spread, spread, size=(n_starts - 1, 2))
    probes = np.vstack([[anchor], probes])
    if poly.space.curvature == -1.0:
        norms = np.linalg.norm(probes, axis=1)
        probes[norms >= 0.98] *= (0.9 / norms[norms >= 0.98])[:, None]
    scores = depth(probes)
    order = np.argsort(-scores)
    starts = [probes[k] for k in order[:2]]

    best_z, best_v = None, -math.inf
    for z0 in starts:
        res = minimize(lambda z: -depth.scalar(z[0], z[1]), z0,
                       method="Nelder-Mead",
                       options={"xatol": 1e-13, "fatol": 1e-13, "maxiter": 400})
        if -res.fun > best_v:
            best_v, best_z = -res.fun, res.x
    if best_z is None or not math.isfinite(best_v) or best_v <= 0.0:
        raise NumericError("inscribed-disk search failed to converge")
    touching = tuple(
        i for i, d in enumerate(poly.disks)
        if abs(ms.signed_distance_to_lambda_disk(poly.space, d, best_z) - best_v) <= 1e-7
    )
    return InscribedDisk2(center=np.asarray(best_z), radius=float(best_v),
                          touching=touching)


def supporting_disk(space, lam, r0, u):
    """The lambda-disk touching the circle of radius r0 at direction u.

    The disk contains the inscribed circle around the origin and its
    boundary passes through the chart point at metric distance r0 along u.
    """
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    c = space.curvature
    if c == 0.0:
        return euclidean_disk(space, lam, (r0 - 1.0 / lam) * u)
    cls = ms.classify_umbilical(space, lam)
    if cls.kind in (ms.GEODESIC_SPHERE_SPHERICAL, ms.GEODESIC_SPHERE_HYPERBOLIC):
        if r0 >= cls.size:
            raise InvalidParameterError(
                f"inradius {r0} exceeds the supporting disk radius {cls.size}"
            )
        center = ms.exp_map(space, np.zeros(2), u, r0 - cls.size)
        return geodesic_disk(space, lam, center)
    if cls.kind == ms.HOROSPHERE:
        # The supporting horoball wraps around the far side: its ideal
        # point is opposite the touch direction and its boundary level
        # is the Busemann value +r0 attained at the touch point.
        return horodisk(space, lam, -u, level=r0)
    if r0 >= cls.size:
        raise InvalidParameterError(
            f"inradius {r0} must stay below the characteristic distance {cls.size}"
        )
    q = ms.exp_map(space, np.zeros(2), u, r0 - cls.size)
    v = np.array([-u[1], u[0]])
    g1 = ms.exp_map(space, q, v, -0.4)
    g2 = ms.exp_map(space, q, v, 0.4)
    # Orient so the left side faces the touch direction.
    if float(np.array([-(g2 - g1)[1], (g2 - g1)[0]]) @ u) < 0.0:
        g1, g2 = g2, g1
    return equidistant_domain(space, lam, g1, g2)


def touching_polygon2(space, lam, r0, directions):
    """Polygon of supporting disks touching the circle of radius r0 at the
    given chart directions (the construction behind generators and lenses)."""
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    disks = [supporting_disk(space, lam, r0, u) for u in directions]
    return build2(space, lam, disks)


def lens_perimeter_direct(space, lam, s):
    """Perimeter of the inradius-s lens, without the full boundary build.

    The two supporting chart circles intersect in the lens vertices; each
    boundary arc is the piece of one circle through its touch point.
    """
    u = np.array([1.0, 0.0])
    c1 = chart_circle(supporting_disk(space, lam, s, u))
    c2 = chart_circle(supporting_disk(space, lam, s, -u))
    dv = c2.center - c1.center
    d = float(np.linalg.norm(dv))
    a = (d * d + c1.radius ** 2 - c2.radius ** 2) / (2.0 * d)
    h2 = c1.radius ** 2 - a * a
    if h2 <= 0.0:
        raise NumericError(f"lens circles fail to intersect at inradius {s}")
    e = dv / d
    perp = np.array([-e[1], e[0]])
    foot = c1.center + a * e
    h = math.sqrt(h2)
    v1 = foot + h * perp
    v2 = foot - h * perp
    touch = ms.exp_map(space, np.zeros(2), u, s) if space.curvature != 0.0 \
        else s * u
    phi_v1 = math.atan2(*(v1 - c1.center)[::-1])
    phi_v2 = math.atan2(*(v2 - c1.center)[::-1])
    phi_t = math.atan2(*(touch - c1.center)[::-1])
    lo, hi = sorted(((phi_v1 % TWO_PI), (phi_v2 % TWO_PI)))
    if lo <= (phi_t % TWO_PI) <= hi:
        arc = _arc_length(space, c1, lo, hi)
    else:
        arc = _arc_length(space, c1, hi, lo + TWO_PI)
    return 2.0 * arc


@dataclass(frozen=True)
class TheoremB2DReport:
    r_body: float
    r_lens: float
    margin: float
    passed: bool


def matched_lens_inradius(space, lam, perimeter, tol=1e-12):
    """Inradius of the lens with the given perimeter, by bisection.

    The lens perimeter grows strictly with its inradius; the upper bracket
    expands geometrically (capped just below the supporting-disk radius,
    where the lens degenerates into the full disk).
    """
    lens_perimeter = lambda s: lens_perimeter_direct(space, lam, s)
    cls = ms.classify_umbilical(space, lam)
    cap = cls.size - 1e-6 if cls.size is not None else math.inf
    if cls.kind == ms.EUCLIDEAN_SPHERE:
        cap = 1.0 / lam - 1e-12
    lo = 1e-9
    if lens_perimeter(lo) > perimeter:
        raise NumericError(f"perimeter {perimeter} is below every lens perimeter")
    hi = min(0.5, cap)
    while lens_perimeter(hi) < perimeter:
        if hi >= cap:
            raise NumericError(
                f"no lens of perimeter {perimeter}: even the near-disk lens is smaller"
            )
        hi = min(1.7 * hi, cap)
    return brentq(lambda s: lens_perimeter(s) - perimeter, lo, hi, xtol=tol)


def theoremB_2d_check(poly, tol=1e-7):
    """Reverse inradius inequality against the equal-perimeter lens."""
    disk = inradius2(poly)
    cls = ms.classify_umbilical(poly.space, poly.lam)
    if cls.kind == ms.EQUIDISTANT and disk.radius >= cls.size:
        # Beyond the characteristic distance every lens is smaller; trivially true.
        return TheoremB2DReport(r_body=disk.radius, r_lens=cls.size,
                                margin=disk.radius - cls.size, passed=True)
    r_lens = matched_lens_inradius(poly.space, poly.lam, perimeter2(poly))
    margin = disk.radius - r_lens
    return TheoremB2DReport(r_body=disk.radius, r_lens=r_lens, margin=margin,
                            passed=margin >= -tol)
