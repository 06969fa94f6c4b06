import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from apollonius.caustics import (caustic_double_roots, caustic_point_curvilinear, curvature,
                                 curvature_centers, on_caustic, revolution_caustic_residual)
from apollonius.errors import NotRevolution, NotTriaxial, OffSurface, OutOfCoordinateRange
from apollonius.geom import Ellipsoid3, ShapeClass, Sheet, make_ellipsoid
from apollonius.structure import lemma2_residual
from apollonius.verify import caustic_check

E432 = make_ellipsoid(4, 3, 2)


def surf(E, u, v):
    a, b, c = E.axes
    return np.array([a * math.cos(v) * math.cos(u), b * math.cos(v) * math.sin(u), c * math.sin(v)])


def test_vertex_curvature():
    cd = curvature(E432, (4, 0, 0))
    assert math.isclose(cd.K, 4 / 9, rel_tol=1e-14)
    assert math.isclose(cd.k1, 4 / 9, rel_tol=1e-14) and math.isclose(cd.k2, 1.0, rel_tol=1e-14)
    assert math.isclose(cd.R1, 9 / 4, rel_tol=1e-14) and math.isclose(cd.R2, 1.0, rel_tol=1e-14)


def test_sphere_curvature():
    S = Ellipsoid3(2.0, 2.0, 2.0, ShapeClass.SPHERE)
    cd = curvature(S, (0, 0, 2))
    assert math.isclose(cd.k1, 0.5) and math.isclose(cd.k2, 0.5)


def test_off_surface():
    with pytest.raises(OffSurface):
        curvature(E432, (1, 1, 1))


@pytest.mark.parametrize("P, cmax, cmin", [
    ((4, 0, 0), (7 / 4, 0, 0), (3, 0, 0)),
    ((0, 0, 2), (0, 0, -6), (0, 0, -5 / 2)),
])
def test_vertex_centers(P, cmax, cmin):
    c1, c2 = curvature_centers(E432, P)
    assert c1.sheet is Sheet.MAX_RADIUS and c2.sheet is Sheet.MIN_RADIUS
    assert np.allclose(c1.point, cmax, atol=1e-14) and np.allclose(c2.point, cmin, atol=1e-14)


def test_on_caustic_absent():
    assert on_caustic(E432, (0.01, 0.02, 0.03)) is None
    assert on_caustic(E432, (10, 10, 10)) is None
    with pytest.raises(NotTriaxial):
        on_caustic(make_ellipsoid(4, 4, 3), (1, 1, 1))


def _fd_principal(E, u, v, h=1e-4):
    P = lambda uu, vv: surf(E, uu, vv)
    Pu = (P(u + h, v) - P(u - h, v)) / (2 * h)
    Pv = (P(u, v + h) - P(u, v - h)) / (2 * h)
    Puu = (P(u + h, v) - 2 * P(u, v) + P(u - h, v)) / h ** 2
    Pvv = (P(u, v + h) - 2 * P(u, v) + P(u, v - h)) / h ** 2
    Puv = (P(u + h, v + h) - P(u + h, v - h) - P(u - h, v + h) + P(u - h, v - h)) / (4 * h * h)
    n = np.cross(Pu, Pv)
    n /= np.linalg.norm(n)
    I = np.array([[Pu @ Pu, Pu @ Pv], [Pu @ Pv, Pv @ Pv]])
    II = np.array([[Puu @ n, Puv @ n], [Puv @ n, Pvv @ n]])
    return np.sort(np.abs(np.linalg.eigvals(np.linalg.solve(I, II)).real))


axes3 = st.tuples(st.floats(1, 5), st.floats(0.3, 0.9), st.floats(0.3, 0.9))
uv = st.tuples(st.floats(0, 2 * math.pi), st.floats(-1.3, 1.3))


@given(axes3, uv)
def test_curvature_invariants_and_fd(ax, p):
    a, rb, rc = ax
    E = make_ellipsoid(a, a * rb, a * rb * rc)
    P = surf(E, *p)
    cd = curvature(E, P)
    assert 0 < cd.k1 <= cd.k2
    assert math.isclose(cd.k1 * cd.k2, cd.K, rel_tol=1e-12)
    assert math.isclose(cd.k1 + cd.k2, 2 * cd.H, rel_tol=1e-12)
    fd = _fd_principal(E, *p)
    assert np.allclose(fd, [cd.k1, cd.k2], rtol=1e-6, atol=1e-6 * cd.k2)


@given(axes3, uv)
def test_centers_are_on_caustic(ax, p):
    a, rb, rc = ax
    E = make_ellipsoid(a, a * rb, a * rb * rc)
    for good, margin, res in caustic_check(E, tuple(surf(E, *p))):
        assert good, (margin, res)


@pytest.mark.parametrize("u, v", [(0.4, 0.3), (2.0, -0.7), (4.1, 1.0)])
def test_principal_radius_tangent_to_caustic(u, v):
    h = 1e-5
    for k in range(2):
        C = lambda uu, vv: np.array(curvature_centers(E432, tuple(surf(E432, uu, vv)))[k].point)
        Cu = (C(u + h, v) - C(u - h, v)) / (2 * h)
        Cv = (C(u, v + h) - C(u, v - h)) / (2 * h)
        n = np.cross(Cu, Cv)
        n /= np.linalg.norm(n)
        d = surf(E432, u, v) - C(u, v)
        assert abs(n @ d) / np.linalg.norm(d) <= 1e-4


def test_z0_section_center_on_astroida():
    P = (4 * math.cos(0.8), 3 * math.sin(0.8), 0.0)
    inplane = [c for c in curvature_centers(E432, P) if abs(c.point[2]) < 1e-12]
    assert len(inplane) == 2  # both centers stay in the symmetry plane
    assert min(abs(lemma2_residual(E432, 4, c.point)) for c in inplane) <= 1e-9


def test_double_roots_of_center():
    c1, _ = curvature_centers(E432, (2.0, 1.5, math.sqrt(2)))
    hits = caustic_double_roots(E432, c1.point)
    assert hits and hits[0].sheet is Sheet.MAX_RADIUS and hits[0].margin <= 1e-7


def test_curvilinear_special_values():
    P = caustic_point_curvilinear(E432, -9, -9)
    assert P is not None and P[1] == 0
    P = caustic_point_curvilinear(E432, -16, -5)
    assert P is not None and P[0] == 0
    with pytest.raises(OutOfCoordinateRange):
        caustic_point_curvilinear(E432, -17, -5)
    with pytest.raises(ValueError):
        caustic_point_curvilinear(E432, -10, -5, variant="other")


@given(st.floats(-16, -4), st.floats(-16, -4))
def test_curvilinear_points_on_caustic(xi, eta):
    P = caustic_point_curvilinear(E432, xi, eta)
    if P is None or min(abs(x) for x in P) < 1e-6:
        return
    hit = on_caustic(E432, P)
    assert hit is not None and hit.margin <= 1e-7


def test_curvilinear_printed_variant_misses():
    P = caustic_point_curvilinear(E432, -12, -6, variant="printed")
    assert P is not None and on_caustic(E432, P) is None
    assert on_caustic(E432, caustic_point_curvilinear(E432, -12, -6)) is not None


def test_revolution_residual():
    Ep = make_ellipsoid(4.1, 3, 3)
    g = 4.1 ** 2 - 9
    assert abs(revolution_caustic_residual(Ep, (g / 4.1, 0, 0))) <= 1e-12
    assert abs(revolution_caustic_residual(Ep, (0, g / 3, 0))) <= 1e-12
    for t in np.linspace(0.1, 3.0, 7):
        c1, c2 = curvature_centers(Ep, (4.1 * math.cos(t), 3 * math.sin(t) * 0.6, 3 * math.sin(t) * 0.8))
        assert abs(revolution_caustic_residual(Ep, c1.point)) <= 1e-8
        assert math.hypot(c2.point[1], c2.point[2]) <= 1e-8 * 4.1
    Eo = make_ellipsoid(4, 4, 3)
    assert abs(revolution_caustic_residual(Eo, (0, 0, 7 / 3))) <= 1e-12
    with pytest.raises(NotRevolution):
        revolution_caustic_residual(E432, (0, 0, 0))
