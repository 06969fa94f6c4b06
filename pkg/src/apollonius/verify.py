"""Seeded verification suites shared by the CLI and the acceptance tests.

Each suite draws its cases from a ``numpy`` generator, compares the library
against an independent oracle and returns a :class:`SuiteReport`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

import numpy as np

from .caustics import curvature_centers, on_caustic
from .geom import DEFAULT_TOL, Tolerances, cbrt, make_ellipse, make_ellipsoid
from .normals2d import astroida_residual, count_normals_2d, joachimsthal_residual
from .normals3d import normal_feet_3d, tangency_residual
from .oracles import count_stationary_2d, count_stationary_3d
from .structure import classify

FIG11 = {
    "i": (4.7, 4.4, 4.0),
    "ii": (4.9, 4.4, 4.0),
    "iii": (4.7, 4.0, 3.0),
    "iv": (5.0, 4.0, 3.0),
    "v": (5.0, 3.3, 2.5),
    "vi": (4.0, 3.0, 2.0),
    "vii": (5.0, 3.7, 2.5),
    "viii": (5.0, 2.8, 1.8),
    "ix": (5.0, 4.4, 1.6),
    "x": (4.5, 3.5, 1.4),
    "xi": (5.0, 3.7, 2.0),
    "xii": (5.0, 3.0, 1.0),
}


@dataclass
class SuiteReport:
    name: str
    passed: int = 0
    total: int = 0
    seconds: float = 0.0
    failures: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.total > 0 and self.passed == self.total

    def record(self, good: bool, **info):
        self.total += 1
        if good:
            self.passed += 1
        elif len(self.failures) < 20:
            self.failures.append(info)

    def to_json(self):
        return {"suite": self.name, "passed": self.passed, "total": self.total,
                "seconds": round(self.seconds, 3), "failures": self.failures}


# --- case generators ------------------------------------------------------

def random_ellipse_axes(rng) -> Tuple[float, float]:
    a = rng.uniform(0.5, 5.0)
    return a, a * rng.uniform(0.15, 0.95)


def random_triaxial_axes(rng) -> Tuple[float, float, float]:
    a = rng.uniform(0.5, 5.0)
    b = a * rng.uniform(0.2, 0.95)
    c = b * rng.uniform(0.1, 0.95)
    return a, b, c


def random_2d_case(rng, tol: Tolerances = DEFAULT_TOL, margin: float = 10.0):
    """Ellipse and point with the point clear of the evolute."""
    while True:
        a, b = random_ellipse_axes(rng)
        g = a * a - b * b
        # half the points near the evolute, half anywhere around the ellipse
        s = (g / a, g / b) if rng.random() < 0.5 else (1.5 * a, 1.5 * b)
        X, Y = rng.uniform(-s[0], s[0]), rng.uniform(-s[1], s[1])
        E = make_ellipse(a, b)
        if abs(astroida_residual(E, (X, Y))) > margin * tol.eps_on * cbrt(g * g):
            return E, (X, Y)


def random_3d_case(rng, tol: Tolerances = DEFAULT_TOL, margin: float = 10.0):
    """Triaxial ellipsoid and point whose root gaps exceed ``margin * eps_mult``."""
    while True:
        a, b, c = random_triaxial_axes(rng)
        A2, B2, C2 = a * a, b * b, c * c
        if rng.random() < 0.6:
            s = ((A2 - C2) / a, (A2 - C2) / b, (A2 - C2) / c)
            s = (min(s[0], 1.5 * a), min(s[1], 1.5 * b), min(s[2], 1.5 * c))
        else:
            s = (1.5 * a, 1.5 * b, 1.5 * c)
        P = tuple(float(rng.uniform(-v, v)) for v in s)
        E = make_ellipsoid(a, b, c)
        fan = normal_feet_3d(E, P, tol)
        if fan.discriminant_margin > margin * tol.eps_mult:
            return E, P, fan


def random_four_normal_case(rng, tol: Tolerances = DEFAULT_TOL):
    while True:
        E, A = random_2d_case(rng, tol)
        if count_normals_2d(E, A, tol) == 4:
            return E, A


def random_surface_point(rng, E):
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    P = v * np.array(E.axes)
    return tuple(float(x) for x in P)


# --- suites ---------------------------------------------------------------

def suite_oracle2d(n: int, seed: int, tol: Tolerances = DEFAULT_TOL) -> SuiteReport:
    rng = np.random.default_rng(seed)
    rep = SuiteReport("oracle2d")
    t0 = time.perf_counter()
    for i in range(n):
        E, A = random_2d_case(rng, tol)
        got = count_normals_2d(E, A, tol).value
        want = count_stationary_2d(E.a, E.b, *A)
        rep.record(got == want, case=i, axes=E.axes, point=A, got=got, oracle=want)
    rep.seconds = time.perf_counter() - t0
    return rep


def suite_oracle3d(n: int, seed: int, tol: Tolerances = DEFAULT_TOL) -> SuiteReport:
    rng = np.random.default_rng(seed)
    rep = SuiteReport("oracle3d")
    t0 = time.perf_counter()
    for i in range(n):
        E, P, fan = random_3d_case(rng, tol)
        want = count_stationary_3d(*E.axes, *P)
        rep.record(fan.count.value == want, case=i, axes=E.axes, point=P,
                   got=fan.count.value, oracle=want)
    rep.seconds = time.perf_counter() - t0
    return rep


def suite_joachimsthal(n: int, seed: int, tol: Tolerances = DEFAULT_TOL,
                       bound: float = 1e-9) -> SuiteReport:
    rng = np.random.default_rng(seed)
    rep = SuiteReport("joachimsthal")
    t0 = time.perf_counter()
    for i in range(n):
        E, A = random_four_normal_case(rng, tol)
        r = joachimsthal_residual(E, A, tol)
        rep.record(r <= bound, case=i, axes=E.axes, point=A, residual=r)
    rep.seconds = time.perf_counter() - t0
    return rep


def caustic_check(E, P, tol: Tolerances = DEFAULT_TOL, rel: float = 1e-6):
    """Both curvature centers of ``P`` give a double root on the matching sheet."""
    out = []
    for cp in curvature_centers(E, P, tol):
        hit = on_caustic(E, cp.point, tol)
        if hit is None:
            out.append((False, math.inf, math.inf))
            continue
        if hit.branch == "line" or min(abs(s + hit.t_double) for s in E.axes2) <= tol.eps_deg * E.a * E.a:
            # next to a pole only the offset form of the residual is meaningful
            res = hit.residual
        else:
            terms = [s * x * x / (s + hit.t_double) ** 3 for s, x in zip(E.axes2, cp.point)]
            scale = math.fsum(abs(v) for v in terms) or 1.0
            res = abs(tangency_residual(E, cp.point, hit.t_double, tol)) / scale
        good = hit.sheet is cp.sheet and hit.margin <= tol.eps_mult and res <= rel
        out.append((good, hit.margin, res))
    return out


def suite_caustic(n: int, seed: int, tol: Tolerances = DEFAULT_TOL) -> SuiteReport:
    rng = np.random.default_rng(seed)
    rep = SuiteReport("caustic")
    t0 = time.perf_counter()
    for i in range(n):
        E = make_ellipsoid(*random_triaxial_axes(rng))
        P = random_surface_point(rng, E)
        checks = caustic_check(E, P, tol)
        rep.record(all(c[0] for c in checks), case=i, axes=E.axes, point=P,
                   margins=[c[1] for c in checks], residuals=[c[2] for c in checks])
    rep.seconds = time.perf_counter() - t0
    return rep


def suite_fig11(n: int = 0, seed: int = 0, tol: Tolerances = DEFAULT_TOL) -> SuiteReport:
    rep = SuiteReport("fig11")
    t0 = time.perf_counter()
    for case, axes in FIG11.items():
        got = classify(make_ellipsoid(*axes)).fig11_case
        rep.record(got == case, axes=axes, expected=case, got=got)
    rep.seconds = time.perf_counter() - t0
    return rep


SUITES: Dict[str, Tuple[Callable[..., SuiteReport], int]] = {
    "oracle2d": (suite_oracle2d, 100),
    "oracle3d": (suite_oracle3d, 20),
    "joachimsthal": (suite_joachimsthal, 100),
    "caustic": (suite_caustic, 100),
    "fig11": (suite_fig11, 12),
}
