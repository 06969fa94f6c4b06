"""Normals from a point to an ellipse.

All points are in the canonical frame of the ``Ellipse2`` (major axis on x).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .errors import (CircleDegenerate, InvalidEllipse, NotFourNormals,
                     OffSurface, PointInsideEllipse, PointOnEllipse)
from .geom import DEFAULT_TOL, Count, Ellipse2, Tolerances, cbrt, quadric_residual
from .rootfind import Poly, real_roots


class SolverPath2(enum.Enum):
    APOLLONIUS_HYPERBOLA = "ApolloniusHyperbola"
    AXIS_DEGENERATE_X0 = "AxisDegenerateX0"
    AXIS_DEGENERATE_Y0 = "AxisDegenerateY0"
    CENTER = "Center"
    CIRCLE = "Circle"


class Region2(enum.Enum):
    INSIDE = "InsideAstroida"
    OUTSIDE = "OutsideAstroida"
    ON = "OnAstroida"
    ON_VERTEX = "OnAstroidaVertex"


@dataclass(frozen=True)
class Foot2:
    point: Tuple[float, float]
    theta: float
    multiplicity: int = 1


@dataclass(frozen=True)
class NormalFan2:
    feet: Tuple[Foot2, ...]
    count: Count
    solver_path: SolverPath2

    @property
    def points(self):
        return [f.point for f in self.feet]


def _check(E):
    if not isinstance(E, Ellipse2):
        raise InvalidEllipse(f"expected Ellipse2, got {type(E).__name__}")


def _angle(E, x, y):
    th = math.atan2(y / E.b, x / E.a)
    return th + 2 * math.pi if th < 0 else th


def _g(E, X, Y, th):
    """Derivative of half the squared distance along the ellipse."""
    a, b = E.a, E.b
    s, c = math.sin(th), math.cos(th)
    return (a * a - b * b) * s * c - a * X * s + b * Y * c


def _dg(E, X, Y, th):
    a, b = E.a, E.b
    s, c = math.sin(th), math.cos(th)
    return (a * a - b * b) * (c * c - s * s) - a * X * c - b * Y * s


def _polish(E, X, Y, th, tol):
    """Newton on the stationarity condition, accepting only improving steps."""
    g = _g(E, X, Y, th)
    for _ in range(tol.max_iter):
        d = _dg(E, X, Y, th)
        if d == 0.0 or g == 0.0:
            break
        tn = th - g / d
        gn = _g(E, X, Y, tn)
        if abs(gn) >= abs(g):
            break
        th, g = tn, gn
    return th % (2 * math.pi)


def _foot(E, th, mult=1):
    return Foot2((E.a * math.cos(th), E.b * math.sin(th)), th % (2 * math.pi), mult)


def _dedupe(feet: List[Foot2], E, tol) -> List[Foot2]:
    out: List[Foot2] = []
    for f in sorted(feet, key=lambda f: f.theta):
        hit = None
        for i, g in enumerate(out):
            if math.dist(f.point, g.point) <= tol.eps_mult * E.a:
                hit = i
                break
        if hit is None:
            out.append(f)
        else:
            g = out[hit]
            out[hit] = Foot2(g.point, g.theta, g.multiplicity + f.multiplicity)
    # wrap-around duplicates at theta ~ 0 / 2pi are caught by the point test
    return sorted(out, key=lambda f: f.theta)


def apollonius_quartic(E: Ellipse2, A: Sequence[float]) -> Poly:
    """Quartic in x whose roots are the abscissae of the feet (X, Y nonzero)."""
    a, b = E.a, E.b
    X, Y = float(A[0]), float(A[1])
    eps = a * a / (b * b)
    k = eps - 1.0
    return Poly([
        -eps * eps * X * X,
        2 * eps * k * X,
        eps * eps * X * X / (a * a) + Y * Y / (b * b) - k * k,
        -2 * eps * k * X / (a * a),
        k * k / (a * a),
    ], eps_root=0.0)


def _axis_split(E, X, Y, on_x_axis, tol):
    """Closed form when A sits on a symmetry axis."""
    a, b = E.a, E.b
    feet = []
    if on_x_axis:
        vtx = [0.0, math.pi]
        star = a * a * X / (a * a - b * b)
        s = 1.0 - (star / a) ** 2
        pair = None
        if s > tol.eps_mult:
            th = math.atan2(math.sqrt(s), star / a)
            pair = [th, -th]
        near = 0 if star > 0 else 1
    else:
        vtx = [math.pi / 2, 3 * math.pi / 2]
        star = b * b * Y / (b * b - a * a)
        s = 1.0 - (star / b) ** 2
        pair = None
        if s > tol.eps_mult:
            th = math.atan2(star / b, math.sqrt(s))
            pair = [th, math.pi - th]
        near = 0 if star > 0 else 1
    mults = [1, 1]
    if abs(s) <= tol.eps_mult:
        # off-axis pair merges into the vertex it approaches
        mults[near] = 3
    feet = [_foot(E, th, m) for th, m in zip(vtx, mults)]
    if pair:
        feet += [_foot(E, th) for th in pair]
    return feet


def normal_feet_2d(E: Ellipse2, A: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> NormalFan2:
    """Feet of all normals to ``E`` passing through ``A``."""
    _check(E)
    X, Y = float(A[0]), float(A[1])
    if not (math.isfinite(X) and math.isfinite(Y)):
        raise InvalidEllipse("point must be finite")
    a, b = E.a, E.b
    x0 = abs(X) < tol.eps_deg * a
    y0 = abs(Y) < tol.eps_deg * b

    if E.is_circle(tol):
        if x0 and y0:
            return NormalFan2((), Count.infinite(), SolverPath2.CIRCLE)
        th = math.atan2(Y, X)
        feet = _dedupe([_foot(E, th), _foot(E, th + math.pi)], E, tol)
        return NormalFan2(tuple(feet), Count.finite(len(feet)), SolverPath2.CIRCLE)

    if x0 and y0:
        feet = [_foot(E, k * math.pi / 2) for k in range(4)]
        return NormalFan2(tuple(feet), Count.finite(4), SolverPath2.CENTER)
    if y0:
        feet = _dedupe(_axis_split(E, X, 0.0, True, tol), E, tol)
        return NormalFan2(tuple(feet), Count.finite(len(feet)),
                          SolverPath2.AXIS_DEGENERATE_Y0)
    if x0:
        feet = _dedupe(_axis_split(E, 0.0, Y, False, tol), E, tol)
        return NormalFan2(tuple(feet), Count.finite(len(feet)),
                          SolverPath2.AXIS_DEGENERATE_X0)

    # generic: work with axes normalized by a
    En = Ellipse2(1.0, b / a)
    Xn, Yn = X / a, Y / a
    rs = real_roots(apollonius_quartic(En, (Xn, Yn)), domain=(-1.0 - 1e-6, 1.0 + 1e-6), tol=tol)
    eps = 1.0 / (En.b * En.b)
    feet = []
    gtol = 1e-9 * max(1.0, abs(Xn), abs(Yn))
    for e in rs:
        x = max(-1.0, min(1.0, e.root))
        den = eps * Xn - (eps - 1.0) * x
        ymag = En.b * math.sqrt(max(0.0, 1.0 - x * x))
        if e.multiplicity == 1 and abs(den) > 1e-8:
            y = x * Yn / den
            # the hyperbola fixes the sign; the ellipse fixes the size
            y = math.copysign(ymag, y) if ymag > 0 else 0.0
            feet.append(_foot(E, _polish(En, Xn, Yn, _angle(En, x, y), tol)))
            continue
        # a clustered root can hide two feet sharing one abscissa, one per sign of y
        ths = [_polish(En, Xn, Yn, _angle(En, x, yy), tol) for yy in (ymag, -ymag)]
        good = [t for t in ths if abs(_g(En, Xn, Yn, t)) <= gtol]
        if len(good) == 2 and math.dist(_foot(En, good[0]).point, _foot(En, good[1]).point) > tol.eps_mult:
            feet += [_foot(E, t, max(1, e.multiplicity // 2)) for t in good]
        else:
            best = min(ths, key=lambda t: abs(_g(En, Xn, Yn, t)))
            feet.append(_foot(E, best, e.multiplicity))
    feet = _dedupe(feet, E, tol)
    return NormalFan2(tuple(feet), Count.finite(len(feet)), SolverPath2.APOLLONIUS_HYPERBOLA)


def normal_feet_2d_from_3d(E: Ellipse2, A3: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> NormalFan2:
    """Feet for a point above the plane: the normals meet its orthogonal projection."""
    return normal_feet_2d(E, (A3[0], A3[1]), tol)


def _require_noncircle(E, tol):
    _check(E)
    if E.is_circle(tol):
        raise CircleDegenerate("the evolute of a circle is its center")


def astroida_point(E: Ellipse2, t: float, tol: Tolerances = DEFAULT_TOL) -> Tuple[float, float]:
    _require_noncircle(E, tol)
    g = E.a * E.a - E.b * E.b
    return (g / E.a * math.cos(t) ** 3, g / E.b * math.sin(t) ** 3)


def astroida_residual(E: Ellipse2, A: Sequence[float]) -> float:
    """cbrt(a^2 X^2) + cbrt(b^2 Y^2) - cbrt((a^2-b^2)^2); negative inside."""
    a, b = E.a, E.b
    X, Y = float(A[0]), float(A[1])
    return (cbrt(a * a * X * X) + cbrt(b * b * Y * Y)
            - cbrt((a * a - b * b) ** 2))


def astroida_vertices(E: Ellipse2):
    g = E.a * E.a - E.b * E.b
    return [(g / E.a, 0.0), (-g / E.a, 0.0), (0.0, g / E.b), (0.0, -g / E.b)]


def astroida_region(E: Ellipse2, A: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> Region2:
    _require_noncircle(E, tol)
    if any(math.dist(A, v) <= tol.eps_on * E.a for v in astroida_vertices(E)):
        return Region2.ON_VERTEX
    r = astroida_residual(E, A)
    scale = cbrt((E.a * E.a - E.b * E.b) ** 2)
    if abs(r) <= tol.eps_on * scale:
        return Region2.ON
    return Region2.INSIDE if r < 0 else Region2.OUTSIDE


_REGION_COUNT = {Region2.INSIDE: 4, Region2.OUTSIDE: 2, Region2.ON: 3, Region2.ON_VERTEX: 2}


def count_normals_2d(E: Ellipse2, A: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> Count:
    _check(E)
    if E.is_circle(tol):
        at_center = abs(A[0]) < tol.eps_deg * E.a and abs(A[1]) < tol.eps_deg * E.a
        return Count.infinite() if at_center else Count.finite(2)
    return Count.finite(_REGION_COUNT[astroida_region(E, A, tol)])


def theorem1_points(E: Ellipse2) -> List[Tuple[float, float]]:
    """Where the evolute crosses the ellipse, if it does (needs a^2 > 2b^2)."""
    _check(E)
    a2, b2 = E.a * E.a, E.b * E.b
    # equality (and rounding just above it) gives the degenerate x0 = 0
    if not a2 - 2 * b2 > 1e-12 * a2:
        return []
    den = (a2 - b2) * (a2 + b2) ** 3
    x0 = math.sqrt(a2 * a2 * (a2 - 2 * b2) ** 3 / den)
    y0 = math.sqrt(b2 * b2 * (2 * a2 - b2) ** 3 / den)
    return [(x0, y0), (-x0, y0), (-x0, -y0), (x0, -y0)]


def _circumcircle(p, q, r):
    ax, ay = p
    bx, by = q
    cx, cy = r
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if d == 0:
        raise NotFourNormals("three feet are collinear")
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
          + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
          + (cx * cx + cy * cy) * (bx - ax)) / d
    return (ux, uy), math.hypot(ax - ux, ay - uy)


def joachimsthal_residual(E: Ellipse2, A: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> float:
    """Relative distance of the antipode of one foot from the circle through the other three."""
    fan = normal_feet_2d(E, A, tol)
    if fan.count != 4:
        raise NotFourNormals(f"point has {fan.count} normals, need 4")
    feet = list(fan.feet)
    dist = [math.dist(f.point, A) for f in feet]
    dmin = min(dist)
    # nearest foot; exact ties resolved by the smaller angle
    k = min((i for i in range(4) if dist[i] - dmin <= 1e-12 * E.a),
            key=lambda i: feet[i].theta)
    rest = [f.point for i, f in enumerate(feet) if i != k]
    center, rad = _circumcircle(*rest)
    anti = (-feet[k].point[0], -feet[k].point[1])
    return abs(math.dist(anti, center) - rad) / rad


def evolute_center_2d(E: Ellipse2, B: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> Tuple[float, float]:
    """Center of curvature of the ellipse at ``B``."""
    _check(E)
    r = quadric_residual(E, B)
    if abs(r) > tol.eps_on:
        raise OffSurface(f"point is off the ellipse (residual {r:.3e})")
    th = math.atan2(B[1] / E.b, B[0] / E.a)
    g = E.a * E.a - E.b * E.b
    return (g / E.a * math.cos(th) ** 3, -g / E.b * math.sin(th) ** 3)


def tangent_count_2d(E: Ellipse2, A: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> int:
    r = quadric_residual(E, A)
    if abs(r) <= tol.eps_on:
        return 1
    return 2 if r > 0 else 0


def tangent_points_2d(E: Ellipse2, A: Sequence[float], tol: Tolerances = DEFAULT_TOL):
    """Points of contact of the two tangents from an exterior point."""
    _check(E)
    r = quadric_residual(E, A)
    if abs(r) <= tol.eps_on:
        raise PointOnEllipse("point lies on the ellipse: one tangent line")
    if r < 0:
        raise PointInsideEllipse("point lies inside the ellipse: no tangent lines")
    a, b = E.a, E.b
    u, v = A[0] / a, A[1] / b
    q = u * u + v * v
    s = math.sqrt(q - 1.0)
    B = (a * (u - v * s) / q, b * (v + u * s) / q)
    C = (a * (u + v * s) / q, b * (v - u * s) / q)
    return B, C
