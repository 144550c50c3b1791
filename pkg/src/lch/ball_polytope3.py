"""Intersections of congruent balls in R^3 and their exact measures.

A body is described by a curvature bound ``lam`` and ball centers; every
ball has radius ``1/lam``.  The build derives the boundary combinatorics:

* each unordered pair of balls meets (if at all) in a circle; every other
  ball forbids one open arc of that circle, and the surviving closed arcs
  are the edges of the body;
* arc endpoints, deduplicated spatially, are the vertices;
* the arcs bounding each sphere's facet chain into closed oriented loops
  (facet on the left, seen from outside).

On the unit sphere of directions around a center, the facet is the
intersection of caps ``u . e_ij >= d_ij * lam / 2``, so its area follows
from the intrinsic Gauss-Bonnet identity: a boundary arc sitting on a cap
of angular radius psi has constant geodesic curvature cot(psi) and
contributes ``arc_angle * cos(psi)``; corners contribute turning angles.
Volumes come from the divergence theorem with closed-form arc integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._circular import TWO_PI, complement_of_forbidden, single_constraint_interval
from .errors import (
    DegenerateBodyError,
    EmptyBodyError,
    InvalidParameterError,
    TopologyError,
)

VERTEX_TOL = 1e-9  # relative to the ball radius


@dataclass(frozen=True)
class Vertex:
    position: np.ndarray
    incident: frozenset


@dataclass(frozen=True)
class EdgeArc:
    pair: tuple
    circle_center: np.ndarray
    circle_axis: np.ndarray  # unit vector from o_i toward o_j (i < j)
    circle_radius: float
    frame: tuple  # (E1, E2) with E1 x E2 = axis
    phi_start: float
    phi_end: float
    full_circle: bool
    start_vertex: int | None
    end_vertex: int | None
    dihedral: float
    center_distance: float  # |o_i - o_j|

    @property
    def arc_angle(self):
        return self.phi_end - self.phi_start

    @property
    def length(self):
        return self.circle_radius * self.arc_angle

    def point_at(self, phi):
        e1, e2 = self.frame
        return self.circle_center + self.circle_radius * (math.cos(phi) * e1 + math.sin(phi) * e2)

    def tangent_at(self, phi, forward):
        w = math.cos(phi) * self.frame[0] + math.sin(phi) * self.frame[1]
        t = np.cross(self.circle_axis, w)
        return t if forward else -t


@dataclass(frozen=True)
class Facet:
    ball_index: int
    # Each loop is a tuple of (edge_index, forward) pairs; forward means
    # increasing phi, which keeps this facet on the left.
    boundary_loops: tuple
    area: float
    vector_area: np.ndarray


@dataclass(frozen=True)
class BuildReport:
    redundant_indices: tuple
    duplicate_indices: tuple
    source_centers: np.ndarray  # the input list, order preserved (for I/O)


@dataclass(frozen=True)
class BallPolytope3:
    """Immutable after build; all derived combinatorics is precomputed."""

    lam: float
    centers: np.ndarray           # retained centers, shape (m, 3)
    redundant_centers: np.ndarray  # shape (k, 3); their balls contain the body
    facets: tuple
    edges: tuple
    vertices: tuple
    build_report: BuildReport = field(repr=False)

    @property
    def radius(self):
        return 1.0 / self.lam

    @property
    def all_centers(self):
        if len(self.redundant_centers) == 0:
            return self.centers
        return np.vstack([self.centers, self.redundant_centers])

    def combinatorial_signature(self):
        """Hashable summary of the boundary structure (for event detection)."""
        return (len(self.facets), len(self.edges), len(self.vertices),
                tuple(sorted(f.ball_index for f in self.facets)))


def _orthonormal_frame(axis):
    k = int(np.argmin(np.abs(axis)))
    e = np.zeros(3)
    e[k] = 1.0
    e1 = e - float(e @ axis) * axis
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(axis, e1)
    return e1, e2


def _dedupe_centers(pts, tol):
    keep, dropped = [], []
    for idx, p in enumerate(pts):
        if any(np.linalg.norm(p - pts[k]) <= tol for k in keep):
            dropped.append(idx)
        else:
            keep.append(idx)
    return keep, dropped


def _pair_edges(pts, radius):
    """Feasible arcs of every pairwise intersection circle.

    Returns a list of raw arcs
    ``(i, j, center, axis, rho, frame, phi_start, phi_end, full, lab_s, lab_e)``.
    """
    m = len(pts)
    raw = []
    for i in range(m):
        for j in range(i + 1, m):
            dv = pts[j] - pts[i]
            d = float(np.linalg.norm(dv))
            if d >= 2.0 * radius:
                raise EmptyBodyError(
                    f"balls {i} and {j} are {d:.6g} apart with radius {radius:.6g}"
                )
            axis = dv / d
            z = 0.5 * (pts[i] + pts[j])
            rho = math.sqrt(max(0.0, radius * radius - 0.25 * d * d))
            e1, e2 = _orthonormal_frame(axis)
            forbidden = []
            dead = False
            for k in range(m):
                if k == i or k == j:
                    continue
                v = z - pts[k]
                a = 2.0 * rho * float(e1 @ v)
                b = 2.0 * rho * float(e2 @ v)
                dlim = radius * radius - float(v @ v) - rho * rho
                kind, phi0, psi = single_constraint_interval(a, b, dlim)
                if kind == "empty":
                    dead = True
                    break
                if kind == "cut":
                    forbidden.append((phi0, psi, k))
            if dead:
                continue
            arcs, full = complement_of_forbidden(forbidden)
            if full:
                raw.append((i, j, z, axis, rho, (e1, e2), 0.0, TWO_PI, True, None, None))
            else:
                for (s, e, lab_s, lab_e) in arcs:
                    raw.append((i, j, z, axis, rho, (e1, e2), s, e, False, lab_s, lab_e))
    return raw


def _collect_vertices(raw, radius):
    """Cluster arc endpoints into vertices; returns (vertices, endpoint map)."""
    tol = VERTEX_TOL * radius
    positions, incidents = [], []
    endpoint_vertex = {}
    for arc_id, arc in enumerate(raw):
        i, j, z, axis, rho, (e1, e2), s, e, full, lab_s, lab_e = arc
        if full:
            continue
        for which, phi, lab in (("s", s, lab_s), ("e", e, lab_e)):
            p = z + rho * (math.cos(phi) * e1 + math.sin(phi) * e2)
            hit = None
            for vid, q in enumerate(positions):
                if np.linalg.norm(p - q) <= tol:
                    hit = vid
                    break
            if hit is None:
                hit = len(positions)
                positions.append(p)
                incidents.append(set())
            incidents[hit].update((i, j, lab))
            endpoint_vertex[(arc_id, which)] = hit
    for vid, inc in enumerate(incidents):
        if len(inc) > 3:
            raise DegenerateBodyError(
                f"{len(inc)} spheres pass within tolerance of a common point "
                f"(vertex {vid} at {positions[vid].tolist()})"
            )
    vertices = tuple(Vertex(position=p, incident=frozenset(inc))
                     for p, inc in zip(positions, incidents))
    return vertices, endpoint_vertex


def _chain_loops(directed, start_of):
    """Chain directed arcs into closed loops by matching vertices."""
    unused = set(range(len(directed)))
    by_start = {}
    for idx in unused:
        by_start.setdefault(start_of[idx][0], []).append(idx)
    loops = []
    while unused:
        first = min(unused)
        loop = []
        cur = first
        while True:
            unused.discard(cur)
            loop.append(directed[cur])
            end_v = start_of[cur][1]
            nxt = None
            for cand in by_start.get(end_v, ()):
                if cand in unused:
                    nxt = cand
                    break
            if nxt is None:
                start_v = start_of[first][0]
                if end_v == start_v:
                    break
                raise TopologyError(
                    f"open boundary loop: no arc continues from vertex {end_v}"
                )
            cur = nxt
        loops.append(tuple(loop))
    return loops


def _facet_geometry(ball_index, loops, edges, vertices, center, radius, lam):
    """Area (intrinsic Gauss-Bonnet) and vector area (Stokes) of one facet."""
    n_loops = len(loops)
    kg_total = 0.0
    turn_total = 0.0
    vec = np.zeros(3)
    for loop in loops:
        k = len(loop)
        for idx, (eidx, forward) in enumerate(loop):
            edge = edges[eidx]
            cos_psi = 0.5 * lam * edge.center_distance
            kg_total += edge.arc_angle * cos_psi
            phi_from, phi_to = ((edge.phi_start, edge.phi_end) if forward
                                else (edge.phi_end, edge.phi_start))
            w_from = math.cos(phi_from) * edge.frame[0] + math.sin(phi_from) * edge.frame[1]
            w_to = math.cos(phi_to) * edge.frame[0] + math.sin(phi_to) * edge.frame[1]
            rho = edge.circle_radius
            vec += 0.5 * (rho * np.cross(edge.circle_center, w_to - w_from)
                          + rho * rho * (phi_to - phi_from) * edge.circle_axis)
            if not edge.full_circle:
                nxt_eidx, nxt_forward = loop[(idx + 1) % k]
                nxt = edges[nxt_eidx]
                vid = edge.end_vertex if forward else edge.start_vertex
                v = vertices[vid].position
                t_in = edge.tangent_at(phi_to, forward)
                t_out = nxt.tangent_at(nxt.phi_start if nxt_forward else nxt.phi_end,
                                       nxt_forward)
                t_in /= np.linalg.norm(t_in)
                t_out /= np.linalg.norm(t_out)
                normal = (v - center) / radius
                turn_total += math.atan2(float(np.cross(t_in, t_out) @ normal),
                                         float(t_in @ t_out))
    chi = 2 - n_loops
    area = radius * radius * (TWO_PI * chi - kg_total - turn_total)
    return area, vec


def build(lam, centers):
    """Intersect balls of radius ``1/lam`` around ``centers``.

    Redundant balls (whose facet would be empty) are dropped and listed in
    the build report.  Raises ``EmptyBodyError`` for empty intersections and
    ``DegenerateBodyError`` for empty-interior or vertex-degenerate input.
    """
    if lam <= 0.0:
        raise InvalidParameterError(f"lam must be positive, got {lam}")
    pts = np.atleast_2d(np.asarray(centers, dtype=float))
    if pts.shape[0] < 1 or pts.shape[1] != 3:
        raise InvalidParameterError(f"centers must be an (m, 3) array, got {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise InvalidParameterError("centers must be finite")
    radius = 1.0 / lam

    keep, duplicates = _dedupe_centers(pts, 1e-12 * radius)
    work = pts[keep]

    from .inradius import minimal_enclosing_ball  # deferred: avoids an import cycle

    meb = minimal_enclosing_ball(work)
    if meb.radius > radius * (1.0 + 1e-12):
        raise EmptyBodyError(
            f"enclosing radius {meb.radius:.12g} of the centers exceeds the ball radius {radius:.12g}"
        )
    if meb.radius >= radius * (1.0 - 1e-12):
        raise DegenerateBodyError("the intersection has empty interior (touching balls)")

    retained_local, poly = _build_retained(lam, work, radius)
    redundant_local = [k for k in range(len(work)) if k not in retained_local]
    redundant_orig = tuple(sorted([keep[k] for k in redundant_local] + list(duplicates)))
    report = BuildReport(redundant_indices=redundant_orig,
                         duplicate_indices=tuple(duplicates),
                         source_centers=pts)
    redundant_pts = pts[list(redundant_orig)] if redundant_orig else np.zeros((0, 3))
    return BallPolytope3(lam=lam, centers=poly["centers"],
                         redundant_centers=redundant_pts,
                         facets=poly["facets"], edges=poly["edges"],
                         vertices=poly["vertices"], build_report=report)


def _build_retained(lam, work, radius):
    """Assemble combinatorics, re-running if redundant balls drop out."""
    m = len(work)
    raw = _pair_edges(work, radius) if m >= 2 else []
    if m >= 2:
        present = set()
        for arc in raw:
            present.update(arc[:2])
        retained = sorted(present)
        if len(retained) < m:
            sub = work[retained]
            retained_sub, poly = _build_retained(lam, sub, radius)
            return [retained[k] for k in retained_sub], poly
    retained = list(range(m))
    vertices, endpoint_vertex = _collect_vertices(raw, radius)

    edges = []
    for arc_id, arc in enumerate(raw):
        i, j, z, axis, rho, frame, s, e, full, _, _ = arc
        d = float(np.linalg.norm(work[j] - work[i]))
        dihedral = math.acos(min(1.0, max(-1.0, 1.0 - 0.5 * d * d * lam * lam)))
        edges.append(EdgeArc(pair=(i, j), circle_center=z, circle_axis=axis,
                             circle_radius=rho, frame=frame, phi_start=s, phi_end=e,
                             full_circle=full,
                             start_vertex=endpoint_vertex.get((arc_id, "s")),
                             end_vertex=endpoint_vertex.get((arc_id, "e")),
                             dihedral=dihedral, center_distance=d))
    edges = tuple(edges)

    facets = []
    for i in range(m):
        mine = [(eidx, edges[eidx].pair[0] == i)
                for eidx in range(len(edges)) if i in edges[eidx].pair]
        closed = [((eidx, fwd),) for eidx, fwd in mine if edges[eidx].full_circle]
        open_arcs = [(eidx, fwd) for eidx, fwd in mine if not edges[eidx].full_circle]
        start_of = {}
        for didx, (eidx, fwd) in enumerate(open_arcs):
            edge = edges[eidx]
            sv = edge.start_vertex if fwd else edge.end_vertex
            ev = edge.end_vertex if fwd else edge.start_vertex
            start_of[didx] = (sv, ev)
        loops = tuple(closed) + tuple(_chain_loops(open_arcs, start_of))
        area, vec = _facet_geometry(i, loops, edges, vertices, work[i], radius, lam)
        facets.append(Facet(ball_index=i, boundary_loops=loops, area=area,
                            vector_area=vec))
    return retained, {"centers": work, "facets": tuple(facets),
                      "edges": edges, "vertices": vertices}


def facet_area(polytope, facet):
    """Area of one facet (cached at build time by the Gauss-Bonnet formula)."""
    if not facet.boundary_loops and len(polytope.facets) > 1:
        raise TopologyError("facet has no boundary loops")
    return facet.area


def surface_area(polytope):
    """Total boundary area: the sum of the facet areas."""
    return float(sum(f.area for f in polytope.facets))


def volume(polytope):
    """Divergence-theorem volume.

    On facet i the position-flux integrand splits into ``R * area`` plus
    ``o_i`` dotted with the facet vector area, which Stokes reduces to
    closed-form circular-arc line integrals.
    """
    r = polytope.radius
    total = 0.0
    for f in polytope.facets:
        total += r * f.area + float(polytope.centers[f.ball_index] @ f.vector_area)
    return total / 3.0


def membership(polytope, x):
    """True iff x lies in every ball, retained and redundant alike."""
    x = np.asarray(x, dtype=float)
    d = np.linalg.norm(polytope.all_centers - x, axis=1)
    return bool(np.max(d) <= polytope.radius)


@dataclass(frozen=True)
class ConvexityReport:
    samples: int
    max_violation: float
    passed: bool


def validate_lambda_convexity(polytope, samples=2048, seed=0):
    """Empirical rolling-ball check: K fits inside each supporting ball.

    For sampled boundary points (with known supporting center o_i), every
    vertex and every other sampled boundary point must lie within 1/lam of
    o_i.  Violations above 1e-9 fail the report.
    """
    rng = np.random.default_rng(seed)
    r = polytope.radius
    pts = []
    support = []
    n_facets = len(polytope.facets)
    per_facet = max(1, samples // max(1, n_facets))
    for f in polytope.facets:
        o = polytope.centers[f.ball_index]
        got = 0
        for _ in range(50 * per_facet):
            if got >= per_facet:
                break
            u = rng.normal(size=3)
            u /= np.linalg.norm(u)
            p = o + r * u
            if membership(polytope, p):
                pts.append(p)
                support.append(f.ball_index)
                got += 1
    cloud = [v.position for v in polytope.vertices] + pts
    cloud = np.asarray(cloud) if cloud else np.zeros((0, 3))
    worst = 0.0
    for i in set(support):
        d = np.linalg.norm(cloud - polytope.centers[i], axis=1)
        worst = max(worst, float(np.max(d) - r))
    return ConvexityReport(samples=len(pts), max_violation=worst,
                           passed=worst <= 1e-9)
