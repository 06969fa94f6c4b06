"""Coordinate-plane sections, their intersection points, the twelve-case
topology classification, the nodal curve and the caustic/ellipsoid curves.

Everything here is in the canonical frame and needs a triaxial ellipsoid.
Squared-coordinate parametrizations produce first-octant values; public
functions take a sign triple ``octant`` to pick the reflected copy.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (CurveAbsentForShape, FamiliesAbsent, NotTriaxial,
                     OutOfRange, PoleParameter)
from .geom import DEFAULT_TOL, Ellipsoid3, Tolerances, cbrt, quadric_residual
from .rootfind import Poly, real_roots


def _require_triaxial(E):
    if not isinstance(E, Ellipsoid3) or not E.is_triaxial:
        raise NotTriaxial("needs a triaxial ellipsoid (a > b > c)")


@dataclass(frozen=True)
class AxisGaps:
    alpha: float  # b^2 - c^2
    beta: float  # c^2 - a^2
    gamma: float  # a^2 - b^2
    omega: float  # alpha^2 - beta*gamma


def axis_gaps(E: Ellipsoid3) -> AxisGaps:
    _require_triaxial(E)
    A, B, C = E.axes2
    al, be, ga = B - C, C - A, A - B
    return AxisGaps(al, be, ga, al * al - be * ga)


# --- the nine coordinate-plane curves -------------------------------------

def _curve_table(E):
    a, b, c = E.axes
    A, B, C = E.axes2
    # (kind, plane index set to zero, coefficient per coordinate)
    return {
        1: ("ellipse", 2, (a, b, 0.0)),
        2: ("ellipse", 1, (a, 0.0, c)),
        3: ("ellipse", 0, (0.0, b, c)),
        4: ("astroida", 2, ((A - B) / a, (A - B) / b, 0.0)),
        5: ("astroida", 1, ((A - C) / a, 0.0, (A - C) / c)),
        6: ("astroida", 0, (0.0, (B - C) / b, (B - C) / c)),
        7: ("ellipse", 2, ((A - C) / a, (B - C) / b, 0.0)),
        8: ("ellipse", 1, ((A - B) / a, 0.0, (B - C) / c)),
        9: ("ellipse", 0, (0.0, (A - B) / b, (A - C) / c)),
    }


def lemma2_curve(E: Ellipsoid3, which: int, t: float) -> Tuple[float, float, float]:
    """Point at angle ``t`` on coordinate-plane curve ``which`` (1..9).

    1-3 are the sections of the ellipsoid, 4-9 the sections of its caustic.
    """
    _require_triaxial(E)
    if which not in range(1, 10):
        raise ValueError("curve index must be 1..9")
    kind, zero, coef = _curve_table(E)[which]
    k = 3 if kind == "astroida" else 1
    idx = [j for j in range(3) if j != zero]
    out = [0.0, 0.0, 0.0]
    out[idx[0]] = coef[idx[0]] * math.cos(t) ** k
    out[idx[1]] = coef[idx[1]] * math.sin(t) ** k
    return tuple(out)


def lemma2_residual(E: Ellipsoid3, which: int, P: Sequence[float]) -> float:
    """Dimensionless implicit residual of curve ``which`` within its plane."""
    kind, zero, coef = _curve_table(E)[which]
    idx = [j for j in range(3) if j != zero]
    u = [abs(P[j]) / coef[j] for j in idx]
    if kind == "ellipse":
        return u[0] ** 2 + u[1] ** 2 - 1.0
    return cbrt(u[0] ** 2) + cbrt(u[1] ** 2) - 1.0


def _curve_gradient(E, which, P):
    """In-plane gradient of the implicit form, for tangency comparisons."""
    kind, zero, coef = _curve_table(E)[which]
    idx = [j for j in range(3) if j != zero]
    g = []
    for j in idx:
        x = P[j]
        if kind == "ellipse":
            g.append(2 * x / coef[j] ** 2)
        else:
            g.append(2.0 / 3.0 * math.copysign(abs(x) ** (-1.0 / 3.0), x) / coef[j] ** (2.0 / 3.0))
    return g


# --- the nine intersection families ---------------------------------------

@dataclass(frozen=True)
class FamilyResult:
    family: int
    exists: bool
    condition_value: float
    points: Tuple[Tuple[float, float, float], ...]
    squared_coords: Tuple[float, float, float]
    curves: Tuple[int, int]
    residuals: Tuple[float, float] = (math.nan, math.nan)
    variant: str = "as-printed"
    tangency_sine: Optional[float] = None
    position: Optional[str] = None  # "inside" | "on" | "outside" the ellipsoid
    position_value: Optional[float] = None  # scaled predicate whose sign should match


def _family_formulas(E) -> Dict[int, dict]:
    A, B, C = E.axes2
    al, be, ga = B - C, C - A, A - B

    def fam(curves, cond, plane, sq, **kw):
        d = {"curves": curves, "cond": cond, "plane": plane, "sq": sq}
        d.update(kw)
        return d

    x0 = A * A * (A - 2 * B) ** 3 / ((A - B) * (A + B) ** 3)
    y0 = B * B * (2 * A - B) ** 3 / ((A - B) * (A + B) ** 3)
    x1 = A * A * (A - 2 * C) ** 3 / ((A - C) * (A + C) ** 3)
    z1 = C * C * (2 * A - C) ** 3 / ((A - C) * (A + C) ** 3)
    y2 = B * B * (B - 2 * C) ** 3 / ((B - C) * (B + C) ** 3)
    z2 = C * C * (2 * B - C) ** 3 / ((B - C) * (B + C) ** 3)
    xs = A * (A - C) ** 2 * (2 * B - C) / ((A - B) * (2 * A * B - A * C - B * C))
    ys = B * (B - C) ** 2 * (2 * A - C) / ((B - A) * (2 * A * B - B * C - A * C))
    x3 = A * (A - B) ** 2 * (2 * C - B) / ((A - C) * (2 * A * C - A * B - B * C))
    z3 = C * (C - B) ** 2 * (2 * A - B) / ((C - A) * (2 * A * C - A * B - B * C))
    y4 = B * (B - A) ** 2 * (2 * C - A) / ((B - C) * (2 * B * C - A * B - A * C))
    z4 = C * (C - A) ** 2 * (2 * B - A) / ((C - B) * (2 * B * C - A * B - A * C))
    k7 = A + B - 2 * C
    x5 = (A - C) ** 3 * (2 * B - A - C) ** 3 / (A * (B - A) * k7 ** 3)
    y5_cubed = (B - C) ** 3 * (2 * A - B - C) ** 3 / (B * (A - B) * k7 ** 3)
    y5_first = (B - C) ** 3 * (2 * A - B - C) ** 3 / (B * (A - B) * k7)
    x6_printed, z6_printed = al ** 3 / (C * (A - C)), ga ** 3 / (A * (A - C))
    x6, z6 = ga ** 3 / (A * (A - C)), al ** 3 / (C * (A - C))
    k9 = B + C - 2 * A
    y7 = (B - A) ** 3 * (2 * C - B - A) ** 3 / (B * (C - B) * k9 ** 3)
    z7 = (C - A) ** 3 * (2 * B - C - A) ** 3 / (C * (B - C) * k9 ** 3)
    s8 = 1 / A + 1 / C - 3 / B
    D = 2 * B * B + 2 * C * C - A * B - A * C - 2 * B * C
    return {
        1: fam((1, 4), A - 2 * B, 2, [(x0, y0, 0.0)]),
        2: fam((2, 5), A - 2 * C, 1, [(x1, 0.0, z1)]),
        3: fam((3, 6), B - 2 * C, 0, [(0.0, y2, z2)]),
        4: fam((1, 7), ys, 2, [(xs, ys, 0.0)]),
        5: fam((2, 8), B - 2 * C, 1, [(x3, 0.0, z3)]),
        6: fam((3, 9), min(2 * B - A, A - 2 * C), 0, [(0.0, y4, z4)]),
        7: fam((4, 7), A + C - 2 * B, 2,
               [(x5, y5_cubed, 0.0), (x5, y5_first, 0.0)],
               variants=("corrected", "as-printed")),
        8: fam((5, 8), A - C, 1, [(x6, 0.0, z6), (x6_printed, 0.0, z6_printed)],
               variants=("corrected", "as-printed"), position=s8 * A),
        9: fam((6, 9), 2 * B - A - C, 0, [(0.0, y7, z7)], position=D / (A * A)),
    }


def _octant_points(sq, plane):
    r = [math.sqrt(max(v, 0.0)) for v in sq]
    idx = [j for j in range(3) if j != plane]
    pts = []
    for s0, s1 in ((1, 1), (-1, 1), (-1, -1), (1, -1)):
        p = [0.0, 0.0, 0.0]
        p[idx[0]] = s0 * r[idx[0]]
        p[idx[1]] = s1 * r[idx[1]]
        pts.append(tuple(p))
    return tuple(pts)


def lemma3_family(E: Ellipsoid3, which: int, tol: Tolerances = DEFAULT_TOL) -> FamilyResult:
    """Closed-form intersection points of two coordinate-plane curves.

    Families 7 and 8 evaluate two algebraic variants and keep the one that
    satisfies both curve equations; ``variant`` records which.
    """
    _require_triaxial(E)
    if which not in range(1, 10):
        raise ValueError("family index must be 1..9")
    f = _family_formulas(E)[which]
    c1, c2 = f["curves"]
    cond = f["cond"]
    plane = f["plane"]
    variants = f.get("variants", ("as-printed",))
    chosen = None
    for sq, name in zip(f["sq"], variants):
        real = all(v >= -tol.eps_on * E.a ** 2 for v in sq)
        pts = _octant_points(sq, plane)
        res = (lemma2_residual(E, c1, pts[0]), lemma2_residual(E, c2, pts[0])) if real else (math.nan, math.nan)
        cand = (sq, name, pts, res, real)
        if chosen is None:
            chosen = cand
        if real and max(abs(r) for r in res) <= 1e-9:
            chosen = cand
            break
    sq, name, pts, res, real = chosen
    exists = real and cond >= 0 and max(abs(r) for r in res) <= 1e-6
    tangency = position = pos_val = None
    if which == 8 and exists:
        g1 = _curve_gradient(E, c1, pts[0])
        g2 = _curve_gradient(E, c2, pts[0])
        cross = g1[0] * g2[1] - g1[1] * g2[0]
        tangency = abs(cross) / (math.hypot(*g1) * math.hypot(*g2))
    if "position" in f and exists:
        # the predicate is reported; the side itself comes from the quadric
        pos_val = f["position"]
        q = quadric_residual(E, pts[0])
        if abs(q) <= tol.eps_on:
            position = "on"
        else:
            position = "outside" if q > 0 else "inside"
    return FamilyResult(
        family=which, exists=bool(exists), condition_value=float(cond),
        points=pts if exists else (), squared_coords=tuple(float(v) for v in sq),
        curves=(c1, c2), residuals=res, variant=name, tangency_sine=tangency,
        position=position, position_value=pos_val)


@dataclass(frozen=True)
class OrderChecks:
    x1_ge_x3: Optional[bool]
    z1_le_z3: Optional[bool]
    equal_25: Optional[bool]  # x1 == x3 and z1 == z3
    s8: float  # 1/a^2 + 1/c^2 - 3/b^2
    y2_ge_y4: Optional[bool]
    z2_le_z4: Optional[bool]
    D: float
    iff_26_holds: Optional[bool]  # (y2 >= y4 and z2 <= z4) == (D >= 0)


def lemma3_order_checks(E: Ellipsoid3, tol: Tolerances = DEFAULT_TOL) -> OrderChecks:
    _require_triaxial(E)
    f = {k: lemma3_family(E, k, tol) for k in (2, 3, 5, 6)}
    A, B, C = E.axes2
    s8 = 1 / A + 1 / C - 3 / B
    D = 2 * B * B + 2 * C * C - A * B - A * C - 2 * B * C
    slack = 1e-9 * E.a
    r25 = r36 = (None, None, None)
    if f[2].exists and f[5].exists:
        (x1, _, z1), (x3, _, z3) = f[2].points[0], f[5].points[0]
        r25 = (x1 >= x3 - slack, z1 <= z3 + slack,
               abs(x1 - x3) <= slack and abs(z1 - z3) <= slack)
    if f[3].exists and f[6].exists:
        (_, y2, z2), (_, y4, z4) = f[3].points[0], f[6].points[0]
        ge, le = y2 >= y4 - slack, z2 <= z4 + slack
        r36 = (ge, le, (ge and le) == (D >= -slack))
    if r25[0] is None and r36[0] is None:
        raise FamiliesAbsent("neither families 2 and 5 nor 3 and 6 are real")
    return OrderChecks(r25[0], r25[1], r25[2], s8, r36[0], r36[1], D, r36[2])


# --- classification --------------------------------------------------------

_ROMAN = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii")


@dataclass(frozen=True)
class TopologyCase:
    theorem2_class: int
    fig11_case: str
    predicates: Dict[str, float] = field(compare=False)

    @property
    def case_index(self) -> int:
        return _ROMAN.index(self.fig11_case) + 1


def topology_predicates(a: float, b: float, c: float) -> Dict[str, float]:
    A, B, C = a * a, b * b, c * c
    return {
        "a2_minus_2c2": A - 2 * C,
        "b2_minus_2c2": B - 2 * C,
        "a2_plus_c2_minus_2b2": A + C - 2 * B,
        "a2_minus_2b2": A - 2 * B,
        "inv_sum_minus_3_over_b2": 1 / A + 1 / C - 3 / B,
        "D": 2 * B * B + 2 * C * C - A * B - A * C - 2 * B * C,
    }


def classify(E: Ellipsoid3) -> TopologyCase:
    """Which caustics meet the ellipsoid, and the finer twelve-way case."""
    _require_triaxial(E)
    pr = topology_predicates(*E.axes)
    ac, bc = pr["a2_minus_2c2"], pr["b2_minus_2c2"]
    acb, ab = pr["a2_plus_c2_minus_2b2"], pr["a2_minus_2b2"]
    s, D = pr["inv_sum_minus_3_over_b2"], pr["D"]

    def by_b(lo, mid, hi):
        if acb < 0:
            return lo
        return mid if ab <= 0 else hi

    if ac < 0:
        cls, case = 1, ("i" if acb < 0 else "ii")
    elif bc < 0:
        cls, case = 2, by_b("iii", "iv", "v")
    else:
        cls = 3
        if D >= 0:
            case = "ix"
        elif s < 0:
            case = by_b("vi", "vii", "viii")
        else:
            case = by_b("x", "xi", "xii")
    # implications stated alongside the classification
    if bc >= 0 and D >= 0:
        assert s > 0, "b^2 >= 2c^2 and D >= 0 must give 1/a^2 + 1/c^2 > 3/b^2"
    if D >= 0:
        assert acb < 0, "D >= 0 must give a^2 + c^2 < 2b^2"
    return TopologyCase(cls, case, pr)


# --- nodal curve, p/q/r and the triple point ---------------------------------

def pqr_polys(E: Ellipsoid3) -> Tuple[Poly, Poly, Poly]:
    _require_triaxial(E)
    A, B, C = E.axes2
    k = A - 2 * B + C
    p2 = (A * A * B + A * A * C + A * B * B + C * C * A + B * B * C + C * C * B - 6 * A * B * C) * k
    p1 = (11 * A * A * B * C + 11 * A * B * C * C + 3 * A * B ** 3 + 3 * B ** 3 * C
          - B * A ** 3 - C * A ** 3 - A * C ** 3 - B * C ** 3 - A * A * B * B
          - 5 * A * A * C * C - B * B * C * C - 17 * A * B * B * C)
    p0 = (A - B) * (B - C) * (A * B + B * C - 3 * A * C)
    q2 = (A + B + C) * k
    q1 = 4 * B * B + A * B + B * C - 3 * A * C
    q0 = -2 * B * B
    r1 = A * A + B * B + C * C - A * B - B * C - A * C
    r0 = (A - B) * (B - C)
    assert r0 > 0 and r1 >= 0, "r(t) must stay positive for t >= 0"
    return Poly([p0, p1, p2]), Poly([q0, q1, q2]), Poly([r0, r1], eps_root=0.0)


def nodal_range(E: Ellipsoid3) -> float:
    """Upper end of the nodal-curve parameter range (the lower end is 0)."""
    g = axis_gaps(E)
    return min(g.alpha / (g.alpha - g.beta), -g.gamma / (g.beta - g.gamma))


def nodal_squares(E: Ellipsoid3, t: float) -> Tuple[float, float, float]:
    g = axis_gaps(E)
    al, be, ga, om = g.alpha, g.beta, g.gamma, g.omega
    A, B, C = E.axes2
    den = (al * ga + om * t) * (3 * t - 2) ** 2
    if den == 0:
        raise PoleParameter("nodal curve pole")
    x2 = ((ga - al) * t + al) * ((ga - al) * t - 2 * ga) ** 2 * ((be - ga) * t + ga) ** 3 / (-be * ga * A * den)
    y2 = t * t * (t - 1) * ((ga - al) ** 2 * t + 3 * al * ga) ** 3 / (-al * ga * B * den)
    z2 = ((ga - al) * t - ga) * ((ga - al) * t + 2 * al) ** 2 * ((al - be) * t - al) ** 3 / (-al * be * C * den)
    return x2, y2, z2


def _signed(sq, octant, slack):
    if any(v < -slack for v in sq):
        return None
    return tuple(math.copysign(math.sqrt(max(v, 0.0)), s) for v, s in zip(sq, octant))


def nodal_curve_point(E: Ellipsoid3, t: float, octant: Sequence[int] = (1, 1, 1),
                      tol: Tolerances = DEFAULT_TOL) -> Optional[Tuple[float, float, float]]:
    """Point of the curve where the two caustic sheets cross."""
    tmax = nodal_range(E)
    if not (-tol.eps_on <= t <= tmax + tol.eps_on):
        raise OutOfRange(f"t={t!r} outside [0, {tmax!r}]")
    return _signed(nodal_squares(E, t), octant, tol.eps_on * E.a ** 2)


@dataclass(frozen=True)
class TriplePoint:
    exists: bool
    point: Optional[Tuple[float, float, float]]
    t0: Optional[float]
    roots_in_range: int
    D: float
    s: float  # 1/a^2 + 1/c^2 - 3/b^2
    reason: str = ""


def triple_point(E: Ellipsoid3, tol: Tolerances = DEFAULT_TOL) -> TriplePoint:
    """First-octant point on the ellipsoid and on both caustic sheets."""
    _require_triaxial(E)
    pr = topology_predicates(*E.axes)
    D, s = pr["D"], pr["inv_sum_minus_3_over_b2"]
    if D > 0 or s < 0:
        why = []
        if D > 0:
            why.append(f"D = {D:.6g} > 0")
        if s < 0:
            why.append(f"1/a^2 + 1/c^2 - 3/b^2 = {s:.6g} < 0")
        return TriplePoint(False, None, None, 0, D, s, "; ".join(why))
    p, _, _ = pqr_polys(E)
    tmax = nodal_range(E)
    rs = real_roots(p, domain=(0.0, tmax), tol=tol)
    if len(rs) == 0:
        return TriplePoint(False, None, None, 0, D, s, "p has no root in range")
    t0 = rs[0].root
    return TriplePoint(True, nodal_curve_point(E, t0, tol=tol), t0, len(rs), D, s)


# --- curvilinear coordinates and the caustic/ellipsoid curves ---------------

def eta_of_xi(E: Ellipsoid3, xi: float) -> float:
    """Second curvilinear coordinate that puts the caustic point on the ellipsoid."""
    _require_triaxial(E)
    A, B, C = E.axes2
    al, be, ga = B - C, C - A, A - B
    terms = ((A + xi) ** 3 / (be * ga), (B + xi) ** 3 / (al * ga), (C + xi) ** 3 / (al * be))
    num = 1.0 + terms[0] / A + terms[1] / B + terms[2] / C
    den = terms[0] / (A * A) + terms[1] / (B * B) + terms[2] / (C * C)
    if den == 0:
        raise PoleParameter(f"xi={xi!r} makes the denominator vanish")
    return -num / den


class Branch(enum.Enum):
    MIN = "min"  # t in [-a^2, -b^2]: the sheet of the larger radius
    MAX = "max"  # t in [-b^2, -c^2]


def _branch(branch) -> Branch:
    if isinstance(branch, Branch):
        return branch
    return Branch(str(branch).lower())


def branch_range(E: Ellipsoid3, branch) -> Tuple[float, float]:
    A, B, C = E.axes2
    return (-A, -B) if _branch(branch) is Branch.MIN else (-B, -C)


def intersection_squares(E: Ellipsoid3, t: float) -> Tuple[float, float, float]:
    A, B, C = E.axes2
    den = (A * B + A * C + B * C) * t + 3 * A * B * C
    if den == 0:
        raise PoleParameter("intersection-curve pole")
    return (A * (A + t) ** 3 * ((B + C) * t + 3 * B * C) / ((A - C) * (A - B) * den),
            B * (B + t) ** 3 * ((A + C) * t + 3 * A * C) / ((B - A) * (B - C) * den),
            C * (C + t) ** 3 * ((A + B) * t + 3 * A * B) / ((C - A) * (C - B) * den))


def intersection_curve_point(E: Ellipsoid3, t: float, branch, octant: Sequence[int] = (1, 1, 1),
                             tol: Tolerances = DEFAULT_TOL) -> Optional[Tuple[float, float, float]]:
    """Point where the ellipsoid meets a caustic sheet; None where not real."""
    _require_triaxial(E)
    lo, hi = branch_range(E, branch)
    slack = tol.eps_on * E.a ** 2
    if not (lo - slack <= t <= hi + slack):
        raise OutOfRange(f"t={t!r} outside [{lo!r}, {hi!r}]")
    try:
        sq = intersection_squares(E, t)
    except PoleParameter:
        return None
    return _signed(sq, octant, slack)


def valid_intervals(E: Ellipsoid3, branch) -> List[Tuple[float, float]]:
    """Maximal sub-ranges of a branch where all squared coordinates are >= 0."""
    _require_triaxial(E)
    A, B, C = E.axes2
    lo, hi = branch_range(E, branch)
    S = A * B + A * C + B * C
    cuts = {-A, -B, -C, -3 * B * C / (B + C), -3 * A * C / (A + C), -3 * A * B / (A + B),
            -3 * A * B * C / S}
    knots = sorted({lo, hi} | {x for x in cuts if lo < x < hi})
    good = []
    for u, v in zip(knots[:-1], knots[1:]):
        sq = intersection_squares(E, 0.5 * (u + v))
        if min(sq) >= 0:
            if good and good[-1][1] == u:
                good[-1] = (good[-1][0], v)
            else:
                good.append((u, v))
    return good


# --- encompassment --------------------------------------------------------

def max_radius_section_inside(E: Ellipsoid3, n: int = 512) -> bool:
    """Are the larger-radius centers of the z = 0 section strictly inside?"""
    from .caustics import curvature
    _require_triaxial(E)
    a, b = E.a, E.b
    for k in range(n):
        t = 2 * math.pi * (k + 0.5) / n
        C = curvature(E, (a * math.cos(t), b * math.sin(t), 0.0)).center_max
        if quadric_residual(E, C) >= 0:
            return False
    return True


# --- curve identifiers ----------------------------------------------------

@dataclass(frozen=True)
class CurveId:
    kind: str  # "lemma2" | "nodal" | "intersection"
    index: Optional[int] = None
    branch: Optional[Branch] = None

    def __str__(self):
        if self.kind == "lemma2":
            return f"lemma2:{self.index}"
        if self.kind == "intersection":
            return f"intersection:{self.branch.value}"
        return self.kind


def parse_curve_id(s: str) -> CurveId:
    head, _, tail = s.strip().lower().partition(":")
    if head == "lemma2":
        try:
            k = int(tail)
        except ValueError:
            raise CurveAbsentForShape(f"bad curve index in {s!r}") from None
        if k not in range(1, 10):
            raise CurveAbsentForShape(f"curve index must be 1..9, got {k}")
        return CurveId("lemma2", index=k)
    if head == "nodal" and not tail:
        return CurveId("nodal")
    if head == "intersection" and tail in ("min", "max"):
        return CurveId("intersection", branch=Branch(tail))
    raise CurveAbsentForShape(f"unknown curve id {s!r}")
