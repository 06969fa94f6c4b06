"""Curvature of the ellipsoid and its two-sheeted caustic.

The caustic is handled procedurally: as the image of the two
curvature-center maps, and through a membership test that looks for a
double root of the normal equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import NotRevolution, NotTriaxial, OffSurface, OutOfCoordinateRange
from .geom import (DEFAULT_TOL, Ellipsoid3, ShapeClass, Sheet, Tolerances, cbrt,
                   quadric_residual)
from .normals3d import Foot3, _offsets, secular_analysis


@dataclass(frozen=True)
class CurvatureData:
    K: float
    H: float
    k1: float  # smaller principal curvature
    k2: float
    R1: float  # larger principal radius, 1/k1
    R2: float
    center_max: Tuple[float, float, float]
    center_min: Tuple[float, float, float]


@dataclass(frozen=True)
class CausticPoint:
    point: Tuple[float, float, float]
    sheet: Sheet
    source: Optional[Tuple[float, float, float]] = None
    xi: Optional[float] = None


@dataclass(frozen=True)
class CausticHit:
    sheet: Sheet
    t_double: float
    margin: float
    branch: str = "secular"  # or "line" when a zero coordinate splits off
    residual: float = 0.0  # relative tangency defect, from pole offsets


def _on_surface(E, P, tol):
    r = quadric_residual(E, P)
    if abs(r) > tol.eps_on:
        raise OffSurface(f"point is off the ellipsoid (residual {r:.3e})")


def curvature(E: Ellipsoid3, P: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> CurvatureData:
    _on_surface(E, P, tol)
    a, b, c = E.axes
    x = [float(v) for v in P]
    N = [v / s for v, s in zip(x, E.axes2)]
    Q = math.fsum(n * n for n in N)
    abc = a * b * c
    K = 1.0 / (abc * Q) ** 2
    bracket = math.fsum(v * v for v in x) - math.fsum(E.axes2)
    # every surface point is closer to the center than sqrt(a^2+b^2+c^2)
    assert bracket < 0, "frame error: point farther than the bounding sphere"
    H = -bracket / (2.0 * abc * abc * Q ** 1.5)
    disc = max(H * H - K, 0.0)
    k2 = H + math.sqrt(disc)
    k1 = K / k2
    R1, R2 = 1.0 / k1, 1.0 / k2
    nn = math.sqrt(Q)
    u = [n / nn for n in N]
    c1 = tuple(v - R1 * e for v, e in zip(x, u))
    c2 = tuple(v - R2 * e for v, e in zip(x, u))
    return CurvatureData(K, H, k1, k2, R1, R2, c1, c2)


def curvature_centers(E: Ellipsoid3, P: Sequence[float],
                      tol: Tolerances = DEFAULT_TOL) -> Tuple[CausticPoint, CausticPoint]:
    cd = curvature(E, P, tol)
    src = tuple(float(v) for v in P)
    return (CausticPoint(cd.center_max, Sheet.MAX_RADIUS, src),
            CausticPoint(cd.center_min, Sheet.MIN_RADIUS, src))


def sheet_of_double_root(E: Ellipsoid3, A: Sequence[float], foot: Foot3,
                         tol: Tolerances = DEFAULT_TOL) -> Sheet:
    """Sheet whose radius matches the double root: t = -R/|N| at the foot."""
    P = foot.point
    r = quadric_residual(E, P)
    if abs(r) > tol.eps_on:
        s = math.sqrt(r + 1.0)
        P = tuple(v / s for v in P)
    cd = curvature(E, P, tol)
    nn = math.sqrt(math.fsum((v / s) ** 2 for v, s in zip(P, E.axes2)))
    t1, t2 = -cd.R1 / nn, -cd.R2 / nn
    return Sheet.MAX_RADIUS if abs(foot.t - t1) <= abs(foot.t - t2) else Sheet.MIN_RADIUS


def caustic_double_roots(E: Ellipsoid3, A: Sequence[float],
                         tol: Tolerances = DEFAULT_TOL) -> List[CausticHit]:
    """Every double root of the normal equation of ``A``, smallest gap first.

    Only coordinates whose weight is exactly zero drop out: tiny ones are
    handled by the pole-offset solver, which keeps membership continuous up to the
    coordinate planes. For a zero coordinate the split-off line branch
    contributes a double root when it just touches the surface.
    """
    if not E.is_triaxial:
        raise NotTriaxial("caustic membership needs a triaxial ellipsoid")
    a = E.a
    p = [s / (a * a) for s in E.axes2]
    X = [float(v) / a for v in A]
    w = [pj * x * x for pj, x in zip(p, X)]
    # a coordinate whose weight underflows behaves exactly like a zero one
    zero = [wj == 0.0 for wj in w]
    an = secular_analysis(p, w, tol)
    hits = []
    gaps = {m[0]: m[1] for m in an.middles}
    for r in an.roots:
        if r.multiplicity < 2:
            continue
        d = _offsets(p, r.base, r.sign, r.u)
        P = tuple(a * pj * x / dj if wj else 0.0 for pj, x, wj, dj in zip(p, X, w, d))
        # F' vanishes at the minimum by construction; confirm tangency independently
        terms = [wj / dj / dj / dj for wj, dj in zip(w, d) if wj]
        res = abs(math.fsum(terms)) / math.fsum(abs(v) for v in terms)
        if res > 1e-6:
            continue
        foot = Foot3(P, r.t * a * a, 2)
        hits.append(CausticHit(sheet_of_double_root(E, A, foot, tol), r.t * a * a,
                               gaps[r.interval], "secular", res))
    for k in range(3):
        if not zero[k]:
            continue
        # line branch through t = -p_k
        d = [pj - p[k] for pj in p]
        s = 1.0 - math.fsum(w[j] / d[j] ** 2 for j in range(3) if j != k and w[j])
        if abs(s) <= tol.eps_mult:
            P = [0.0, 0.0, 0.0]
            for j in range(3):
                if j != k:
                    P[j] = a * p[j] * X[j] / d[j] if w[j] else 0.0
            foot = Foot3(tuple(P), -p[k] * a * a, 2)
            hits.append(CausticHit(sheet_of_double_root(E, A, foot, tol), -p[k] * a * a,
                                  abs(s), "line", abs(s)))
    hits.sort(key=lambda h: h.margin)
    return hits


def on_caustic(E: Ellipsoid3, A: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> Optional[CausticHit]:
    hits = caustic_double_roots(E, A, tol)
    return hits[0] if hits else None


def _gaps(E):
    a2, b2, c2 = E.axes2
    return b2 - c2, c2 - a2, a2 - b2


def caustic_point_curvilinear(E: Ellipsoid3, xi: float, eta: float,
                              octant: Sequence[int] = (1, 1, 1),
                              tol: Tolerances = DEFAULT_TOL,
                              variant: str = "corrected") -> Optional[Tuple[float, float, float]]:
    """Caustic point with curvilinear coordinates (xi, eta), both in [-a^2, -c^2].

    ``variant="printed"`` keeps a^2 in every denominator, which does not land
    on the caustic; it exists for regression tests.
    """
    if not E.is_triaxial:
        raise NotTriaxial("curvilinear chart needs a triaxial ellipsoid")
    a2, b2, c2 = E.axes2
    slack = tol.eps_on * a2
    for v in (xi, eta):
        if not (-a2 - slack <= v <= -c2 + slack):
            raise OutOfCoordinateRange(f"coordinate {v!r} outside [-a^2, -c^2]")
    al, be, ga = _gaps(E)
    if variant == "corrected":
        dens = (a2 * be * ga, b2 * al * ga, c2 * al * be)
    elif variant == "printed":
        dens = (a2 * be * ga, a2 * al * ga, a2 * al * be)
    else:
        raise ValueError("variant must be 'corrected' or 'printed'")
    sq = [-(s + xi) ** 3 * (s + eta) / d for s, d in zip(E.axes2, dens)]
    return _signed_point(sq, octant, tol.eps_on * a2)


def _signed_point(sq, octant, slack):
    if any(v < -slack for v in sq):
        return None
    return tuple(math.copysign(math.sqrt(max(v, 0.0)), sg) for v, sg in zip(sq, octant))


def revolution_caustic_residual(E: Ellipsoid3, P: Sequence[float]) -> float:
    """Residual of the surface swept by the meridian evolute about the symmetry axis."""
    X, Y, Z = (float(v) for v in P)
    if E.shape_class is ShapeClass.PROLATE:
        ax, eq, s, r2 = E.a, E.b, X, Y * Y + Z * Z
    elif E.shape_class is ShapeClass.OBLATE:
        ax, eq, s, r2 = E.c, E.a, Z, X * X + Y * Y
    else:
        raise NotRevolution("needs an ellipsoid of revolution")
    return cbrt(ax * ax * s * s) + cbrt(eq * eq * r2) - cbrt((ax * ax - eq * eq) ** 2)
