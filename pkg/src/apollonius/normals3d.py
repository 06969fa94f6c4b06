"""Normals from a point to an ellipsoid.

The feet are the points r(t) = (a^2 X/(a^2+t), b^2 Y/(b^2+t), c^2 Z/(c^2+t))
that lie on the surface, i.e. the roots of

    F(t) = sum_i a_i^2 X_i^2 / (a_i^2 + t)^2 = 1,

which is the normal sextic with its denominators kept. F is convex on every
interval between consecutive poles, so each outer interval holds exactly one
root and each middle interval holds two, one double or none. The generic
solver walks those intervals with bracketed solves, measuring each root as
an offset from its nearest pole so that feet near a coordinate plane stay
accurate. All points are in the canonical frame of the ``Ellipsoid3``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .errors import (AxisEqualityDegenerate, DegenerateCoordinate,
                     PoleParameter)
from .geom import (DEFAULT_TOL, Count, Ellipse2, Ellipsoid3, ShapeClass, Sheet,
                   Tolerances, quadric_residual)
from .normals2d import normal_feet_2d
from .rootfind import Poly, solve_bracketed


class SolverPath3(enum.Enum):
    GENERIC_SEXTIC = "GenericSextic"
    PLANE_SPLIT_X0 = "PlaneSplitX0"
    PLANE_SPLIT_Y0 = "PlaneSplitY0"
    PLANE_SPLIT_Z0 = "PlaneSplitZ0"
    AXIS_SPLIT = "AxisSplit"
    CENTER = "Center"
    REVOLUTION_AXIS_SEGMENT = "RevolutionAxisSegment"
    REVOLUTION_MERIDIAN = "RevolutionMeridian"
    SPHERE = "Sphere"


_PLANE_PATHS = (SolverPath3.PLANE_SPLIT_X0, SolverPath3.PLANE_SPLIT_Y0, SolverPath3.PLANE_SPLIT_Z0)


@dataclass(frozen=True)
class Foot3:
    point: Tuple[float, float, float]
    t: float
    multiplicity: int = 1


@dataclass(frozen=True)
class NormalFan3:
    feet: Tuple[Foot3, ...]
    count: Count
    solver_path: SolverPath3
    discriminant_margin: float = math.nan
    # (interval label, margin) for the two middle intervals on the generic path
    interval_margins: Tuple[Tuple[str, float], ...] = field(default=(), compare=False)

    @property
    def points(self):
        return [f.point for f in self.feet]


# --- parametric pieces ---------------------------------------------------

def _poles_ok(E, t, tol):
    for s in E.axes2:
        if abs(t + s) <= tol.eps_deg * E.a * E.a:
            raise PoleParameter(f"t={t!r} is at the pole -{s!r}")


def cubic_hyperbola(E: Ellipsoid3, A: Sequence[float], t: float,
                    tol: Tolerances = DEFAULT_TOL) -> Tuple[float, float, float]:
    _poles_ok(E, t, tol)
    return tuple(s * x / (s + t) for s, x in zip(E.axes2, A))


def asymptote(E: Ellipsoid3, A: Sequence[float], which: int, t: float,
              tol: Tolerances = DEFAULT_TOL) -> Tuple[float, float, float]:
    """Asymptote line ``which`` (1..3): coordinate ``which`` is free and equals t."""
    if which not in (1, 2, 3):
        raise ValueError("which must be 1, 2 or 3")
    k = which - 1
    p = E.axes2
    out = []
    for j in range(3):
        if j == k:
            out.append(float(t))
            continue
        den = p[j] - p[k]
        if abs(den) <= tol.eps_axis * p[0]:
            raise AxisEqualityDegenerate("asymptote undefined for equal axes")
        out.append(p[j] * A[j] / den)
    return tuple(out)


def _zero_flags(E, A, tol):
    return [abs(x) < tol.eps_deg * s for x, s in zip(A, E.axes)]


def normal_sextic(E: Ellipsoid3, A: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> Poly:
    """prod (a_i^2+t)^2 - sum a_i^2 X_i^2 prod_{j!=i} (a_j^2+t)^2, monic in t."""
    if any(_zero_flags(E, A, tol)):
        raise DegenerateCoordinate("a coordinate of A is zero; use the split solver")
    p = E.axes2
    sq = [Poly([s * s, 2 * s, 1.0], eps_root=0.0) for s in p]
    total = sq[0] * sq[1] * sq[2]
    coeffs = list(total.coeffs)
    for i in range(3):
        w = p[i] * A[i] * A[i]
        other = sq[(i + 1) % 3] * sq[(i + 2) % 3]
        for k, c in enumerate(other.coeffs):
            coeffs[k] -= w * c
    return Poly(coeffs, eps_root=0.0)


def tangency_residual(E: Ellipsoid3, A: Sequence[float], t: float,
                      tol: Tolerances = DEFAULT_TOL) -> float:
    """sum a_i^2 X_i^2 / (a_i^2 + t)^3; vanishes at a double root."""
    _poles_ok(E, t, tol)
    return math.fsum(s * x * x / (s + t) ** 3 for s, x in zip(E.axes2, A))


# --- the secular equation F(t) = 1 ---------------------------------------

@dataclass(frozen=True)
class SecularRoot:
    t: float
    multiplicity: int
    base: int  # pole index the offset is measured from
    sign: int  # t = -p[base] + sign * u
    u: float
    interval: str  # "left", "mid01", "mid12", "mid02", "right"


@dataclass(frozen=True)
class SecularAnalysis:
    roots: Tuple[SecularRoot, ...]
    # label -> (gap estimate, t at the minimum of F, F at the minimum)
    middles: Tuple[Tuple[str, float, float, float], ...]

    @property
    def margin(self) -> float:
        return min((m[1] for m in self.middles), default=math.inf)


def _offsets(p, k, s, u):
    return [(p[j] - p[k]) + s * u for j in range(len(p))]


def _phi(p, w, k, s):
    def f(u):
        return math.fsum(w[j] / d / d for j, d in enumerate(_offsets(p, k, s, u)) if w[j]) - 1.0

    def df(u):
        return -2.0 * s * math.fsum(w[j] / d / d / d for j, d in enumerate(_offsets(p, k, s, u)) if w[j])

    return f, df


def _dphi(p, w, k, s):
    """F'(t) and its u-derivative, with t = -p[k] + s u."""
    def f(u):
        return -2.0 * math.fsum(w[j] / d / d / d for j, d in enumerate(_offsets(p, k, s, u)) if w[j])

    def df(u):
        return 6.0 * s * math.fsum(w[j] / d / d / d / d for j, d in enumerate(_offsets(p, k, s, u)) if w[j])

    return f, df


def secular_analysis(p: Sequence[float], w: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> SecularAnalysis:
    """Real roots of sum w_j/(p_j+t)^2 = 1 for p descending and w >= 0.

    Middle pairs closer than ``eps_mult`` (in the units of t) are reported as
    one double root at the minimum of F.
    """
    act = [j for j in range(len(p)) if w[j] > 0]
    if not act:
        return SecularAnalysis((), ())
    W = math.fsum(w[j] for j in act)
    roots: List[SecularRoot] = []

    def root_at(k, s, lo, hi, label, mult=1):
        f, df = _phi(p, w, k, s)
        u = solve_bracketed(f, df, lo, hi, tol)
        roots.append(SecularRoot(-p[k] + s * u, mult, k, s, u, label))

    # right outer interval: F decreases from +inf to 0
    k = act[-1]
    lo, hi = math.sqrt(w[k]), math.sqrt(W)
    if hi <= lo:
        roots.append(SecularRoot(-p[k] + lo, 1, k, 1, lo, "right"))
    else:
        root_at(k, 1, lo, hi, "right")
    # left outer interval
    k = act[0]
    lo, hi = math.sqrt(w[k]), math.sqrt(W)
    if hi <= lo:
        roots.append(SecularRoot(-p[k] - lo, 1, k, -1, lo, "left"))
    else:
        root_at(k, -1, lo, hi, "left")

    middles = []
    for i, m in zip(act[:-1], act[1:]):
        label = f"mid{i}{m}"
        L = p[i] - p[m]
        # which half holds the minimum of F
        fl, _ = _dphi(p, w, i, 1)
        left_half = fl(0.5 * L) > 0
        if left_half:
            f, df = _dphi(p, w, i, 1)
            um = solve_bracketed(f, df, _start(w, i, W, L), 0.5 * L, tol)
            vm = L - um
            tm = -p[i] + um
        else:
            f, df = _dphi(p, w, m, -1)
            vm = solve_bracketed(f, df, _start(w, m, W, L), 0.5 * L, tol)
            um = L - vm
            tm = -p[m] - vm
        ds = _offsets(p, i, 1, um) if left_half else _offsets(p, m, -1, vm)
        Fm = math.fsum(w[j] / d / d for j, d in enumerate(ds) if w[j])
        F2 = 6.0 * math.fsum(w[j] / d / d / d / d for j, d in enumerate(ds) if w[j])
        if Fm > 1.0:
            # a tiny weight pins the minimum to its pole and inflates F'',
            # so the excess of F over 1 also bounds the gap from below
            gap = max(2.0 * math.sqrt(2.0 * (Fm - 1.0) / F2), Fm - 1.0)
            if gap <= tol.eps_mult:
                base, s, u = (i, 1, um) if left_half else (m, -1, vm)
                roots.append(SecularRoot(tm, 2, base, s, u, label))
            middles.append((label, gap, tm, Fm))
            continue
        # each root is solved from the pole on its side of the midpoint, so a
        # minimum within an ulp of a pole never lands on a zero offset
        h = 0.5 * L
        fi, dfi = _phi(p, w, i, 1)
        fm_, dfm = _phi(p, w, m, -1)
        if left_half or fi(h) < 0:
            top = um if left_half else h
            lo_u = 0.5 * min(math.sqrt(w[i]), top)
            rL = (i, 1, solve_bracketed(fi, dfi, lo_u, top, tol) if fi(top) < 0 else top)
        else:
            rL = (m, -1, solve_bracketed(fm_, dfm, vm, h, tol) if fm_(vm) < 0 else vm)
        if not left_half or fm_(h) < 0:
            top = vm if not left_half else h
            lo_v = 0.5 * min(math.sqrt(w[m]), top)
            rR = (m, -1, solve_bracketed(fm_, dfm, lo_v, top, tol) if fm_(top) < 0 else top)
        else:
            rR = (i, 1, solve_bracketed(fi, dfi, um, h, tol) if fi(um) < 0 else um)
        if rL[0] == rR[0]:
            gap = abs(rL[1] * rL[2] - rR[1] * rR[2])
        else:
            gap = max(0.0, L - rL[2] - rR[2])
        middles.append((label, gap, tm, Fm))
        if gap <= tol.eps_mult:
            base, s, u = (i, 1, um) if left_half else (m, -1, vm)
            roots.append(SecularRoot(tm, 2, base, s, u, label))
        else:
            for k, s, u in (rL, rR):
                roots.append(SecularRoot(-p[k] + s * u, 1, k, s, u, label))
    roots.sort(key=lambda r: r.t)
    return SecularAnalysis(tuple(roots), tuple(middles))


def _start(w, k, W, L):
    """Offset from pole k close enough that its term dominates F'."""
    return 0.25 * L * min(1.0, (w[k] / W) ** (1.0 / 3.0))


def secular_point(p, X, root: SecularRoot):
    """r(t) for a root, using pole offsets for accuracy."""
    ds = _offsets(p, root.base, root.sign, root.u)
    return tuple(p[j] * X[j] / ds[j] for j in range(len(p)))


# --- the full problem ----------------------------------------------------

def _foot_t(E, A, B):
    """Parameter t with A = B + t N(B)."""
    N = [b / s for b, s in zip(B, E.axes2)]
    nn = math.fsum(n * n for n in N)
    return math.fsum((x - b) * n for x, b, n in zip(A, B, N)) / nn


def _dedupe3(feet: List[Foot3], scale, tol) -> List[Foot3]:
    out: List[Foot3] = []
    for f in feet:
        for i, g in enumerate(out):
            if math.dist(f.point, g.point) <= tol.eps_mult * scale:
                out[i] = Foot3(g.point, g.t, max(g.multiplicity, f.multiplicity))
                break
        else:
            out.append(f)
    return sorted(out, key=lambda f: f.t)


def _fan(feet, path, margin=math.nan, inter=()):
    return NormalFan3(tuple(feet), Count.finite(len(feet)), path, margin, inter)


def _generic(E, A, tol):
    a = E.a
    p = [s / (a * a) for s in E.axes2]
    Xn = [x / a for x in A]
    w = [pj * x * x for pj, x in zip(p, Xn)]
    an = secular_analysis(p, w, tol)
    feet = []
    for r in an.roots:
        P = tuple(c * a for c in secular_point(p, Xn, r))
        if abs(quadric_residual(E, P)) > tol.eps_on:
            # a near-tangent double root sits a hair off the surface
            P = _radial(E, P)
        feet.append(Foot3(P, r.t * a * a, r.multiplicity))
    inter = tuple((m[0], m[1]) for m in an.middles)
    return _fan(feet, SolverPath3.GENERIC_SEXTIC, an.margin, inter)


def _radial(E, P):
    s = math.sqrt(quadric_residual(E, P) + 1.0)
    return tuple(x / s for x in P)


def _plane_feet(E, A, k, tol):
    """Feet in the coordinate plane x_k = 0 plus the split-off line branch."""
    idx = [j for j in range(3) if j != k]
    ax = E.axes
    E2 = Ellipse2(ax[idx[0]], ax[idx[1]])
    fan2 = normal_feet_2d(E2, (A[idx[0]], A[idx[1]]), tol)
    feet = []
    for f in fan2.feet:
        P = [0.0, 0.0, 0.0]
        P[idx[0]], P[idx[1]] = f.point
        feet.append(Foot3(tuple(P), _foot_t(E, A, P), f.multiplicity))
    p = E.axes2
    star = {j: p[j] * A[j] / (p[j] - p[k]) for j in idx}
    s = 1.0 - math.fsum(star[j] ** 2 / p[j] for j in idx)
    if s > tol.eps_mult:
        for sg in (1.0, -1.0):
            P = [0.0, 0.0, 0.0]
            P[k] = sg * ax[k] * math.sqrt(s)
            for j in idx:
                P[j] = star[j]
            feet.append(Foot3(tuple(P), -p[k], 1))
    elif abs(s) <= tol.eps_mult:
        # the line branch touches the plane: its pair merges with an in-plane foot
        P = [0.0, 0.0, 0.0]
        for j in idx:
            P[j] = star[j]
        near = min(range(len(feet)), key=lambda i: math.dist(feet[i].point, P))
        f = feet[near]
        feet[near] = Foot3(f.point, f.t, f.multiplicity + 2)
    return feet


def _revolution(E, A, tol):
    a = E.a
    if E.shape_class is ShapeClass.PROLATE:
        k, eq = 0, 1
    else:
        k, eq = 2, 0
    ax_len, eq_len = E.axes[k], E.axes[eq]
    others = [j for j in range(3) if j != k]
    rho = math.hypot(A[others[0]], A[others[1]])
    pole = [0.0, 0.0, 0.0]
    pole[k] = ax_len
    poles = [tuple(pole), tuple(-x for x in pole)]
    if rho < tol.eps_deg * a:
        h = abs(ax_len ** 2 - eq_len ** 2) / ax_len
        Ak = A[k]
        feet = [Foot3(P, _foot_t(E, A, P), 1) for P in poles]
        feet.sort(key=lambda f: f.t)
        if abs(abs(Ak) - h) <= tol.eps_mult * a:
            near = 0 if math.dist(feet[0].point, A) < math.dist(feet[1].point, A) else 1
            f = feet[near]
            feet[near] = Foot3(f.point, f.t, 3)
            return _fan(feet, SolverPath3.REVOLUTION_AXIS_SEGMENT)
        if abs(Ak) < h:
            return NormalFan3(tuple(feet), Count.infinite(), SolverPath3.REVOLUTION_AXIS_SEGMENT)
        return _fan(feet, SolverPath3.REVOLUTION_AXIS_SEGMENT)
    e = [0.0, 0.0, 0.0]
    e[others[0]], e[others[1]] = A[others[0]] / rho, A[others[1]] / rho
    if k == 0:
        fan2 = normal_feet_2d(Ellipse2(ax_len, eq_len), (A[0], rho), tol)
        pts = [(s, r) for s, r in fan2.points]
    else:
        fan2 = normal_feet_2d(Ellipse2(eq_len, ax_len), (rho, A[2]), tol)
        pts = [(s, r) for r, s in fan2.points]
    feet = []
    for (s, r), f2 in zip(pts, fan2.feet):
        P = [r * ej for ej in e]
        P[k] = s
        feet.append(Foot3(tuple(P), _foot_t(E, A, P), f2.multiplicity))
    feet.sort(key=lambda f: f.t)
    return _fan(feet, SolverPath3.REVOLUTION_MERIDIAN)


def normal_feet_3d(E: Ellipsoid3, A: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> NormalFan3:
    """Feet of every normal to ``E`` through ``A``, with the solver path used."""
    A = tuple(float(x) for x in A)
    if not all(math.isfinite(x) for x in A):
        raise ValueError("point must be finite")
    if E.shape_class is ShapeClass.SPHERE:
        r = math.sqrt(math.fsum(x * x for x in A))
        if r < tol.eps_deg * E.a:
            return NormalFan3((), Count.infinite(), SolverPath3.SPHERE)
        u = [x / r for x in A]
        feet = [Foot3(tuple(s * E.a * c for c in u), 0.0, 1) for s in (1.0, -1.0)]
        feet = [Foot3(f.point, _foot_t(E, A, f.point), 1) for f in feet]
        return _fan(sorted(feet, key=lambda f: f.t), SolverPath3.SPHERE)
    if E.shape_class.is_revolution:
        return _revolution(E, A, tol)

    zero = _zero_flags(E, A, tol)
    nz = sum(zero)
    if nz == 3:
        feet = []
        for k in range(3):
            for sg in (1.0, -1.0):
                P = [0.0, 0.0, 0.0]
                P[k] = sg * E.axes[k]
                feet.append(Foot3(tuple(P), -E.axes2[k], 1))
        feet.sort(key=lambda f: (f.t, f.point))
        return _fan(feet, SolverPath3.CENTER)
    Az = tuple(0.0 if z else x for x, z in zip(A, zero))
    if nz == 2:
        k = zero.index(False)
        feet = []
        for j in range(3):
            if j != k:
                feet += _plane_feet(E, Az, j, tol)
        return _fan(_dedupe3(feet, E.a, tol), SolverPath3.AXIS_SPLIT)
    if nz == 1:
        k = zero.index(True)
        return _fan(_dedupe3(_plane_feet(E, Az, k, tol), E.a, tol), _PLANE_PATHS[k])
    return _generic(E, A, tol)


# --- regions and tangents ------------------------------------------------

class RegionKind(enum.Enum):
    OUTSIDE_BOTH = "OutsideBoth"
    INSIDE_EXACTLY_ONE = "InsideExactlyOne"
    INSIDE_BOTH = "InsideBoth"
    ON_CAUSTIC = "OnCaustic"
    ON_NODAL_SET = "OnNodalSet"


@dataclass(frozen=True)
class Region3:
    kind: RegionKind
    sheet: Optional[Sheet] = None


# the middle interval between the two largest poles holds the larger radius
_INTERVAL_SHEET = {"mid01": Sheet.MAX_RADIUS, "mid12": Sheet.MIN_RADIUS}


def region_3d(E: Ellipsoid3, A: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> Region3:
    """Position of ``A`` relative to the two caustic sheets."""
    if not E.is_triaxial:
        raise DegenerateCoordinate("region_3d needs a triaxial ellipsoid")
    if any(_zero_flags(E, A, tol)):
        raise DegenerateCoordinate("A lies on a coordinate plane; use normal_feet_3d")
    fan = normal_feet_3d(E, A, tol)
    doubles = [f for f in fan.feet if f.multiplicity >= 2]
    if len(doubles) >= 2:
        return Region3(RegionKind.ON_NODAL_SET)
    if len(doubles) == 1:
        from .caustics import sheet_of_double_root
        return Region3(RegionKind.ON_CAUSTIC, sheet_of_double_root(E, A, doubles[0]))
    n = fan.count.value
    if n == 2:
        return Region3(RegionKind.OUTSIDE_BOTH)
    if n == 6:
        return Region3(RegionKind.INSIDE_BOTH)
    a2 = E.a * E.a
    # the interval that holds a real pair names the sheet A is inside
    pairs = [lab for lab in ("mid01", "mid12")
             if sum(1 for f in fan.feet if _interval_of(E, f.t / a2) == lab) == 2]
    sheet = _INTERVAL_SHEET.get(pairs[0]) if pairs else None
    return Region3(RegionKind.INSIDE_EXACTLY_ONE, sheet)


def _interval_of(E, tn):
    p = [s / (E.a * E.a) for s in E.axes2]
    if tn < -p[0]:
        return "left"
    if tn < -p[1]:
        return "mid01"
    if tn < -p[2]:
        return "mid12"
    return "right"


def polar_plane(E: Ellipsoid3, A: Sequence[float]):
    """Coefficients (n, d) of the polar plane n . x = d of ``A``."""
    return tuple(x / s for x, s in zip(A, E.axes2)), 1.0


def tangent_counts_3d(E: Ellipsoid3, A: Sequence[float], tol: Tolerances = DEFAULT_TOL):
    """(tangent lines, tangent planes) through ``A``."""
    r = quadric_residual(E, A)
    if abs(r) <= tol.eps_on:
        return Count.infinite(), Count.finite(1)
    if r > 0:
        return Count.infinite(), Count.infinite()
    return Count.finite(0), Count.finite(0)
