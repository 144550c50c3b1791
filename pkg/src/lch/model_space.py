"""Constant-curvature model planes and totally umbilical hypersurfaces.

Curvature-parametrized utilities: classification of the complete totally
umbilical hypersurfaces of curvature ``lam`` in a space of constant
curvature ``c``, the characteristic distance of hyperbolic equidistants,
and the 2-D conformal-chart metric layer used by the arc-polygon module.

Chart conventions (fixed here once for the whole package):

* ``c = -1`` -- Poincare unit disk, conformal factor ``2 / (1 - |z|^2)``;
* ``c = 0``  -- identity chart;
* ``c = +1`` -- stereographic plane (projection of the unit sphere from
  the south pole), conformal factor ``2 / (1 + |z|^2)``.

In all three charts every curve of constant geodesic curvature is a
Euclidean circle or line.  Only ``|c| in {0, 1}`` carry a metric layer;
general curvature is handled by rescaling lengths by ``length_scale(c)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

# Umbilical-class tags.
EUCLIDEAN_SPHERE = "euclidean_sphere"
GEODESIC_SPHERE_SPHERICAL = "geodesic_sphere_spherical"
GEODESIC_SPHERE_HYPERBOLIC = "geodesic_sphere_hyperbolic"
HOROSPHERE = "horosphere"
EQUIDISTANT = "equidistant"

_BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class ModelSpace:
    """A simply connected space of constant curvature."""

    dim: int
    curvature: float

    def __post_init__(self):
        if self.dim < 2:
            raise InvalidParameterError(f"dim must be >= 2, got {self.dim}")

    def require_metric_layer(self):
        if self.dim != 2 or self.curvature not in (-1.0, 0.0, 1.0):
            raise InvalidParameterError(
                "metric operations are implemented for dim=2 and curvature in {-1, 0, +1}; "
                f"got dim={self.dim}, c={self.curvature}"
            )


@dataclass(frozen=True)
class UmbilicalClass:
    """One of the five classes of complete totally umbilical hypersurfaces.

    ``size`` is the geodesic radius for the sphere variants, the
    characteristic distance for equidistants, and ``None`` for horospheres.
    """

    kind: str
    size: float | None = None


def length_scale(c):
    """Factor converting lengths in the unit-curvature model to M^n(c).

    Statements about curvature ``c != 0`` are scale-covariant: a
    configuration in ``M^n(sign(c))`` maps to ``M^n(c)`` by multiplying
    every length by ``1/sqrt(|c|)`` (and curvature bounds by ``sqrt(|c|)``).
    """
    if c == 0.0:
        return 1.0
    return 1.0 / math.sqrt(abs(c))


def _clamped(x, lo=-1.0, hi=1.0):
    # Trig/hyperbolic inverses get arguments clamped to their closed
    # domains; the 1e-12 slack only guards boundary roundoff.
    if x < lo:
        return lo
    if x > hi:
        return hi
    return x


def classify_umbilical(space, lam):
    """Classify the complete totally umbilical hypersurface of curvature lam.

    Flat space gives spheres of radius ``1/lam``; positive curvature gives
    geodesic spheres; negative curvature splits at ``lam = sqrt(-c)`` into
    geodesic spheres, horospheres and equidistants.
    """
    if lam <= 0.0:
        raise InvalidParameterError(f"lam must be positive, got {lam}")
    c = space.curvature
    if c == 0.0:
        return UmbilicalClass(EUCLIDEAN_SPHERE, 1.0 / lam)
    if c > 0.0:
        sc = math.sqrt(c)
        return UmbilicalClass(GEODESIC_SPHERE_SPHERICAL, math.atan(sc / lam) / sc)
    s = math.sqrt(-c)
    if lam > s * (1.0 + _BOUNDARY_TOL):
        return UmbilicalClass(GEODESIC_SPHERE_HYPERBOLIC, math.atanh(s / lam) / s)
    if lam >= s * (1.0 - _BOUNDARY_TOL):
        return UmbilicalClass(HOROSPHERE, None)
    return UmbilicalClass(EQUIDISTANT, characteristic_distance(c, lam))


def characteristic_distance(c, lam):
    """Distance from an equidistant of curvature lam to its base hyperplane.

    Defined for ``c < 0`` and ``0 < lam < sqrt(-c)``; strictly increasing
    in lam and divergent as ``lam`` approaches ``sqrt(-c)``.
    """
    if c >= 0.0:
        raise InvalidParameterError(f"characteristic distance needs c < 0, got c={c}")
    s = math.sqrt(-c)
    if not 0.0 < lam < s:
        raise InvalidParameterError(
            f"equidistant regime needs 0 < lam < sqrt(-c) = {s}, got lam={lam}"
        )
    return math.log((s + lam) / (s - lam)) / (2.0 * s)


# ---------------------------------------------------------------------------
# 2-D conformal charts
# ---------------------------------------------------------------------------

def conformal_factor(c, z):
    """Length density of the metric at chart point z (|dz|-multiplier)."""
    z = np.asarray(z, dtype=float)
    s = float(z @ z)
    if c == 0.0:
        return 1.0
    if c == -1.0:
        return 2.0 / (1.0 - s)
    if c == 1.0:
        return 2.0 / (1.0 + s)
    raise InvalidParameterError(f"no metric layer for curvature {c}")


def _check_domain(c, p):
    p = np.asarray(p, dtype=float)
    if c == -1.0 and float(p @ p) >= 1.0:
        raise InvalidParameterError(f"point {p.tolist()} is outside the unit-disk chart")
    return p


def to_sphere(z):
    """Inverse stereographic projection (chart plane -> unit sphere)."""
    z = np.asarray(z, dtype=float)
    s = float(z @ z)
    return np.array([2.0 * z[0], 2.0 * z[1], 1.0 - s]) / (1.0 + s)


def from_sphere(P):
    """Stereographic projection from the south pole onto the chart plane."""
    P = np.asarray(P, dtype=float)
    w = 1.0 + P[2]
    if w <= 1e-15:
        raise InvalidParameterError("south pole is not in the stereographic chart")
    return np.array([P[0], P[1]]) / w


def metric_distance(space, p, q):
    """Geodesic distance between two chart points of M^2(c), c in {-1,0,+1}."""
    space.require_metric_layer()
    c = space.curvature
    p = _check_domain(c, p)
    q = _check_domain(c, q)
    if c == 0.0:
        return float(np.linalg.norm(p - q))
    if c == -1.0:
        dd = float((p - q) @ (p - q))
        den = (1.0 - float(p @ p)) * (1.0 - float(q @ q))
        return math.acosh(max(1.0, 1.0 + 2.0 * dd / den))
    return math.acos(_clamped(float(to_sphere(p) @ to_sphere(q))))


def busemann(ideal, z):
    """Busemann function of the unit-disk model, normalized to 0 at the origin.

    Horoballs centered at the ideal point are its sublevel sets; moving
    distance s along the axis toward the ideal point decreases the value by s.
    """
    ideal = np.asarray(ideal, dtype=float)
    z = np.asarray(z, dtype=float)
    zz = float(z @ z)
    if zz >= 1.0:
        raise InvalidParameterError("Busemann function needs a point inside the unit disk")
    d2 = float((ideal - z) @ (ideal - z))
    return math.log(d2 / (1.0 - zz))


def geodesic_chart_circle(g1, g2):
    """Chart representation of the hyperbolic geodesic through g1, g2.

    Returns ``("line", point, unit_direction)`` for diameters and
    ``("circle", center, radius)`` otherwise (a Euclidean circle
    orthogonal to the unit circle).
    """
    g1 = np.asarray(g1, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    cross = g1[0] * g2[1] - g1[1] * g2[0]
    chord = g2 - g1
    norm = np.linalg.norm(chord)
    if norm < 1e-15:
        raise InvalidParameterError("geodesic needs two distinct points")
    if abs(cross) < 1e-14 * max(1.0, norm):
        return "line", g1, chord / norm
    # |g_i - c|^2 = |c|^2 - 1 gives two linear equations for the center.
    A = 2.0 * np.array([g1, g2])
    b = np.array([float(g1 @ g1) + 1.0, float(g2 @ g2) + 1.0])
    center = np.linalg.solve(A, b)
    radius = math.sqrt(float(center @ center) - 1.0)
    return "circle", center, radius


def signed_distance_to_geodesic(g1, g2, z):
    """Signed hyperbolic distance from z to the geodesic through g1, g2.

    Positive on the left of the oriented chart curve g1 -> g2.
    """
    z = _check_domain(-1.0, z)
    kind, a, b = geodesic_chart_circle(g1, g2)
    den = 1.0 - float(z @ z)
    if kind == "line":
        left_normal = np.array([-b[1], b[0]])
        return math.asinh(2.0 * float(left_normal @ (z - a)) / den)
    center, radius = a, b
    value = (float((z - center) @ (z - center)) - radius * radius) / (radius * den)
    # Orientation: tangent at g1 headed toward g2, then check whether the
    # left normal points away from the circle center (the "outside" side,
    # where `value` is positive).
    g1 = np.asarray(g1, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    radial = g1 - center
    tangent = np.array([-radial[1], radial[0]])
    if float(tangent @ (g2 - g1)) < 0.0:
        tangent = -tangent
    left = np.array([-tangent[1], tangent[0]])
    sign = 1.0 if float(left @ radial) > 0.0 else -1.0
    return sign * math.asinh(value)


def mobius_translate(a, w):
    """Disk-model isometry sending 0 to ``a``, applied to chart point ``w``."""
    ac = complex(a[0], a[1])
    wc = complex(w[0], w[1])
    out = (wc + ac) / (1.0 + ac.conjugate() * wc)
    return np.array([out.real, out.imag])


def exp_map(space, base, direction, s):
    """Chart point at metric distance ``s`` from ``base`` along ``direction``.

    ``direction`` is a Euclidean unit vector at ``base``; conformality makes
    it meaningful in the metric as well.
    """
    space.require_metric_layer()
    c = space.curvature
    base = _check_domain(c, base)
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    if c == 0.0:
        return base + s * direction
    if c == -1.0:
        # The derivative of the Mobius translation at 0 is a positive real
        # scalar, so chart directions at `base` pull back unchanged.
        return mobius_translate(base, math.tanh(s / 2.0) * direction)
    P = to_sphere(base)
    zdir = np.array([direction[0], direction[1], 0.0])
    # Push the chart direction to the sphere tangent plane at P.
    J = _stereo_jacobian(base)
    T = J @ direction
    T -= float(T @ P) * P
    T /= np.linalg.norm(T)
    return from_sphere(math.cos(s) * P + math.sin(s) * T)


def _stereo_jacobian(z):
    """Jacobian of the inverse stereographic projection at chart point z."""
    z = np.asarray(z, dtype=float)
    u, v = z
    s = 1.0 + u * u + v * v
    d = np.array([
        [2.0 * (s - 2.0 * u * u), -4.0 * u * v],
        [-4.0 * u * v, 2.0 * (s - 2.0 * v * v)],
        [-4.0 * u, -4.0 * v],
    ])
    return d / (s * s)


def signed_distance_to_lambda_disk(space, disk, p):
    """Signed metric distance from p to the boundary of a lambda-disk.

    Positive strictly inside the convex region, zero on its boundary,
    negative outside.  For ball-like disks this is ``radius - d(center, p)``;
    horodisks use the Busemann function; equidistant domains use the signed
    distance to the base geodesic.
    """
    space.require_metric_layer()
    p = _check_domain(space.curvature, p)
    kind = disk.kind
    if kind in ("euclidean", "geodesic"):
        return disk.radius - metric_distance(space, disk.center, p)
    if kind == "horo":
        return disk.level - busemann(disk.ideal, p)
    if kind == "equidistant":
        return disk.offset - signed_distance_to_geodesic(disk.geodesic[0], disk.geodesic[1], p)
    raise InvalidParameterError(f"unknown lambda-disk kind {kind!r}")
