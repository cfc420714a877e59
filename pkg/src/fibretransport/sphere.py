"""The unit round sphere in a single (theta, phi) chart.

theta is the polar angle in (0, pi), phi the azimuth.  The chart excludes both
poles by a fixed margin; paths that cross the margin make the coefficient
evaluation raise rather than silently degrade.  The tangent plane at each
point is expressed in the coordinate frame (d_theta, d_phi) with metric
diag(1, sin(theta)^2).

Path generators return unit-interval chart paths with analytic velocities:
great-circle arcs (via spherical linear interpolation of the embedded
endpoints) and constant-latitude arcs.  Generated arcs keep phi inside a
single atan2 branch; the shipped presets are chosen so that no arc approaches
the phi seam or the poles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import linalg
from .bundles import POLE_MARGIN, BasePoint, BundleMetric, FibreBundle, chart_point
from .errors import ChartDomainError

SPACE = "sphere"


def sphere_point(theta: float, phi: float, space: str = SPACE) -> BasePoint:
    return chart_point(space, theta, phi)


def require_chart(theta: float) -> None:
    if not (POLE_MARGIN <= theta <= math.pi - POLE_MARGIN):
        raise ChartDomainError(
            f"theta={theta} leaves the chart (poles excluded by {POLE_MARGIN})"
        )


def tangent_bundle(space: str = SPACE) -> FibreBundle:
    return FibreBundle(base_space_id=space, base_kind="sphere",
                       fibre_kind="vector", dim=2)


def metric_matrix(x: BasePoint) -> linalg.Mat:
    th = x.coords[0]
    s = math.sin(th)
    return ((1.0, 0.0), (0.0, s * s))


def round_metric() -> BundleMetric:
    return BundleMetric(name="round-sphere", matrix_at=metric_matrix)


def christoffel(x: BasePoint, a: int, b: int, c: int) -> float:
    """Connection coefficients of the round metric in the coordinate frame.

    Index 0 is theta, index 1 is phi.  The nonzero entries are
    Gamma^0_11 = -sin(theta) cos(theta) and Gamma^1_01 = Gamma^1_10 = cot(theta).
    """
    th = x.coords[0]
    require_chart(th)
    if a == 0 and b == 1 and c == 1:
        return -math.sin(th) * math.cos(th)
    if a == 1 and ((b == 0 and c == 1) or (b == 1 and c == 0)):
        return math.cos(th) / math.sin(th)
    return 0.0


def coefficient_matrix(x: BasePoint, xdot: tuple[float, ...]) -> linalg.Mat:
    """A(r) with du/dr = A u along a path with chart velocity xdot."""
    th = x.coords[0]
    require_chart(th)
    sin_th = math.sin(th)
    cos_th = math.cos(th)
    cot = cos_th / sin_th
    vth, vph = xdot
    return (
        (0.0, sin_th * cos_th * vph),
        (-cot * vph, -cot * vth),
    )


def orthonormalizer(x: BasePoint) -> linalg.Mat:
    """Matrix sending coordinate components to orthonormal-frame components."""
    s = math.sin(x.coords[0])
    return ((1.0, 0.0), (0.0, s))


# ---------------------------------------------------------------------------
# Path generators
# ---------------------------------------------------------------------------

def _embed(theta: float, phi: float) -> tuple[float, float, float]:
    st = math.sin(theta)
    return (st * math.cos(phi), st * math.sin(phi), math.cos(theta))


@dataclass(frozen=True)
class _Slerp:
    """Great-circle interpolation between two embedded unit vectors."""

    a: tuple[float, float, float]
    b: tuple[float, float, float]
    omega: float

    def point(self, t: float) -> tuple[float, float, float]:
        so = math.sin(self.omega)
        ca = math.sin((1.0 - t) * self.omega) / so
        cb = math.sin(t * self.omega) / so
        return tuple(ca * self.a[i] + cb * self.b[i] for i in range(3))

    def deriv(self, t: float) -> tuple[float, float, float]:
        so = math.sin(self.omega)
        ca = -self.omega * math.cos((1.0 - t) * self.omega) / so
        cb = self.omega * math.cos(t * self.omega) / so
        return tuple(ca * self.a[i] + cb * self.b[i] for i in range(3))


def great_circle_arc(p0: tuple[float, float], p1: tuple[float, float],
                     space: str = SPACE, name: str = "arc"):
    """The geodesic arc between two chart points, parameterized over [0, 1].

    The endpoints must not be equal or antipodal, and the arc must stay clear
    of the poles (checked lazily by the chart guard when coefficients are
    evaluated).
    """
    from .paths import Interval, Path

    a = _embed(*p0)
    b = _embed(*p1)
    d = max(-1.0, min(1.0, sum(a[i] * b[i] for i in range(3))))
    omega = math.acos(d)
    if omega < 1e-9 or math.pi - omega < 1e-9:
        raise ChartDomainError("great-circle arc endpoints coincide or are antipodal")
    sl = _Slerp(a=a, b=b, omega=omega)

    def at(t: float) -> BasePoint:
        x, y, z = sl.point(t)
        theta = math.acos(max(-1.0, min(1.0, z)))
        phi = math.atan2(y, x)
        return chart_point(space, theta, phi)

    def velocity(t: float, side: int) -> tuple[float, float]:
        x, y, z = sl.point(t)
        dx, dy, dz = sl.deriv(t)
        rho2 = x * x + y * y
        # rho = sin(theta); inside the chart band it stays >= sin(POLE_MARGIN)
        if rho2 < math.sin(POLE_MARGIN) ** 2:
            raise ChartDomainError("great-circle arc crossed a pole")
        dtheta = -dz / math.sqrt(max(1e-300, 1.0 - z * z))
        dphi = (x * dy - y * dx) / rho2
        return (dtheta, dphi)

    return Path(space=space, domain=Interval(0.0, 1.0), point_at=at,
                kind="chart", velocity_fn=velocity, name=name)


def latitude_arc(theta: float, phi0: float, phi1: float,
                 space: str = SPACE, name: str = "latitude"):
    """Constant-latitude arc from phi0 to phi1, parameterized over [0, 1]."""
    from .paths import Interval, Path

    require_chart(theta)
    span = phi1 - phi0

    def at(t: float) -> BasePoint:
        return chart_point(space, theta, phi0 + span * t)

    def velocity(t: float, side: int) -> tuple[float, float]:
        return (0.0, span)

    return Path(space=space, domain=Interval(0.0, 1.0), point_at=at,
                kind="chart", velocity_fn=velocity, name=name)


# ---------------------------------------------------------------------------
# Closed loops
# ---------------------------------------------------------------------------

# Vertices of a geodesic triangle made of three quarter great circles.  Its
# interior covers one eighth of the sphere (enclosed area pi/2), and every
# point of the boundary keeps theta within [pi/4, 3*pi/4], far from the poles
# and from the phi seam.
OCTANT_VERTICES = (
    (math.pi / 2, math.pi / 2),
    (math.pi / 4, 0.0),
    (3 * math.pi / 4, 0.0),
)

OCTANT_AREA = math.pi / 2


def chart_deviation(x: BasePoint, y: BasePoint) -> float:
    """Chart distance identifying azimuths modulo the period."""
    dth = abs(x.coords[0] - y.coords[0])
    dph = abs(x.coords[1] - y.coords[1]) % (2 * math.pi)
    dph = min(dph, 2 * math.pi - dph)
    return max(dth, dph)


def octant_loop(space: str = SPACE, name: str = "octant"):
    """Closed geodesic triangle enclosing an eighth of the sphere.

    Domain [0, 1] with velocity kinks at 1/3 and 2/3, one quarter great
    circle per leg, and a declared self-crossing at (0, 1).
    """
    import dataclasses

    from .paths import concatenate, schedule_for, with_crossings

    b, c, a = OCTANT_VERTICES
    leg1 = great_circle_arc(b, c, space=space, name=f"{name}-leg1")
    leg2 = great_circle_arc(c, a, space=space, name=f"{name}-leg2")
    leg3 = great_circle_arc(a, b, space=space, name=f"{name}-leg3")
    third = 1.0 / 3.0
    first = concatenate(leg1, leg2,
                        schedule_for(leg1.domain, leg2.domain,
                                     0.0, third, 2 * third))
    loop = concatenate(first, leg3,
                       schedule_for(first.domain, leg3.domain,
                                    0.0, 2 * third, 1.0))
    loop = dataclasses.replace(loop, name=name)
    return with_crossings(loop, [(0.0, 1.0)], deviation=chart_deviation)


def closed_latitude(theta: float, space: str = SPACE,
                    name: str | None = None):
    """Full constant-latitude circle, phi sweeping 0 to 2*pi over [0, 1]."""
    from .paths import with_crossings

    p = latitude_arc(theta, 0.0, 2 * math.pi, space=space,
                     name=name or f"latitude-{theta:.4f}")
    return with_crossings(p, [(0.0, 1.0)], deviation=chart_deviation)
