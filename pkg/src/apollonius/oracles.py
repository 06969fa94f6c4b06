"""Brute-force stationary-point oracles for squared distance to a quadric.

These never touch the quartic/sextic machinery: they scan the surface
parametrization for zeros of the distance gradient and refine with Newton.
Used by the tests and the ``verify`` command.
"""

from __future__ import annotations

import numpy as np


def stationary_angles_2d(a, b, X, Y, n=4096, newton_iter=60):
    """Angles theta where d/dtheta |P(theta) - A|^2 vanishes, P = (a cos, b sin)."""
    k = a * a - b * b
    th = np.linspace(0.0, 2 * np.pi, n, endpoint=False)

    def g(t):
        return k * np.sin(t) * np.cos(t) - a * X * np.sin(t) + b * Y * np.cos(t)

    def dg(t):
        return k * np.cos(2 * t) - a * X * np.cos(t) - b * Y * np.sin(t)

    def ddg(t):
        return -2 * k * np.sin(2 * t) + a * X * np.sin(t) - b * Y * np.cos(t)

    gv = g(th)
    nxt = np.roll(gv, -1)
    starts = list(th[np.signbit(gv) != np.signbit(nxt)] + 0.5 * (2 * np.pi / n))

    # two roots inside one sample cell: g has an extremum there that crosses zero
    dv = dg(th)
    for i in np.nonzero(np.signbit(dv) != np.signbit(np.roll(dv, -1)))[0]:
        lo, hi = th[i], th[i] + 2 * np.pi / n
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if np.signbit(dg(mid)) == np.signbit(dv[i]):
                lo = mid
            else:
                hi = mid
        te = 0.5 * (lo + hi)
        ge = g(te)
        if np.signbit(ge) != np.signbit(gv[i]) and np.signbit(ge) != np.signbit(nxt[i]):
            starts += [te - 1e-9, te + 1e-9, 0.5 * (th[i] + te), 0.5 * (te + hi)]

    roots = []
    for t0 in starts:
        t = float(t0)
        for _ in range(newton_iter):
            d = dg(t)
            if d == 0:
                break
            step = g(t) / d
            step = max(-1e-2, min(1e-2, step))
            t -= step
            if abs(step) < 1e-15:
                break
        if abs(g(t)) <= 1e-10 * max(a * a, 1e-300):
            roots.append(t % (2 * np.pi))
    return _dedupe_angles(roots, a, b, 1e-7 * a)


def _dedupe_angles(roots, a, b, tol):
    pts = []
    out = []
    for t in sorted(roots):
        p = np.array([a * np.cos(t), b * np.sin(t)])
        if all(np.linalg.norm(p - q) > tol for q in pts):
            pts.append(p)
            out.append(t)
    return out


def count_stationary_2d(a, b, X, Y, n=4096):
    return len(stationary_angles_2d(a, b, X, Y, n))


def _chart(a, b, c, X, Y, Z, nu, nv, vmax):
    """Stationary points of the squared distance on the z-pole chart, |v| <= vmax."""
    u = np.linspace(0.0, 2 * np.pi, nu, endpoint=False)
    v = np.linspace(-np.pi / 2, np.pi / 2, nv + 1)[1:-1]
    U, V = np.meshgrid(u, v, indexing="ij")

    def grad_hess(U, V):
        cu, su, cv, sv = np.cos(U), np.sin(U), np.cos(V), np.sin(V)
        dx, dy, dz = a * cv * cu - X, b * cv * su - Y, c * sv - Z
        Pu = (-a * cv * su, b * cv * cu, 0.0 * U)
        Pv = (-a * sv * cu, -b * sv * su, c * cv)
        Puu = (-a * cv * cu, -b * cv * su, 0.0 * U)
        Puv = (a * sv * su, -b * sv * cu, 0.0 * U)
        Pvv = (-a * cv * cu, -b * cv * su, -c * sv)
        d = (dx, dy, dz)

        def dot(p, q):
            return p[0] * q[0] + p[1] * q[1] + p[2] * q[2]

        gu, gv = dot(d, Pu), dot(d, Pv)
        huu = dot(Pu, Pu) + dot(d, Puu)
        huv = dot(Pu, Pv) + dot(d, Puv)
        hvv = dot(Pv, Pv) + dot(d, Pvv)
        return gu, gv, huu, huv, hvv

    gu, gv, *_ = grad_hess(U, V)

    def changes(f):
        s = np.signbit(f)
        s2 = np.roll(s, -1, axis=0)
        c1 = s[:, :-1] != s2[:, :-1]
        c2 = s[:, :-1] != s[:, 1:]
        c3 = s[:, :-1] != s2[:, 1:]
        return c1 | c2 | c3

    flag = changes(gu) & changes(gv)
    # dilate by one cell so roots on cell edges are not lost
    dil = flag.copy()
    dil |= np.roll(flag, 1, axis=0) | np.roll(flag, -1, axis=0)
    dil[:, 1:] |= flag[:, :-1]
    dil[:, :-1] |= flag[:, 1:]
    iu, iv = np.nonzero(dil)
    du, dv = 2 * np.pi / nu, v[1] - v[0]
    su = u[iu] + 0.5 * du
    sv = v[iv] + 0.5 * dv
    # a coarse uniform seed set as a safety net
    cu_, cv_ = np.meshgrid(np.linspace(0, 2 * np.pi, 16, endpoint=False),
                           np.linspace(-1.3, 1.3, 9), indexing="ij")
    su = np.concatenate([su, cu_.ravel()])
    sv = np.concatenate([sv, cv_.ravel()])

    for _ in range(80):
        gu, gv, huu, huv, hvv = grad_hess(su, sv)
        det = huu * hvv - huv * huv
        safe = np.abs(det) > 1e-300
        det = np.where(safe, det, 1.0)
        stu = np.where(safe, (hvv * gu - huv * gv) / det, 0.0)
        stv = np.where(safe, (huu * gv - huv * gu) / det, 0.0)
        m = np.maximum(np.abs(stu), np.abs(stv))
        scale = np.where(m > 0.05, 0.05 / np.maximum(m, 1e-300), 1.0)
        su = su - scale * stu
        sv = np.clip(sv - scale * stv, -np.pi / 2 + 1e-9, np.pi / 2 - 1e-9)
    gu, gv, *_ = grad_hess(su, sv)
    ok = (np.hypot(gu, gv) <= 1e-10 * a * a) & (np.abs(sv) <= vmax)
    su, sv = su[ok], sv[ok]
    return np.stack([a * np.cos(sv) * np.cos(su), b * np.cos(sv) * np.sin(su), c * np.sin(sv)], axis=1)


def stationary_points_3d(a, b, c, X, Y, Z, nu=512, nv=256):
    """Distinct stationary points of |P - A|^2 over the ellipsoid surface.

    Two charts are used, one with poles on the z axis and one with poles on
    the x axis, each trusted only away from its own poles.
    """
    vmax = np.pi / 3 + 0.05
    p1 = _chart(a, b, c, X, Y, Z, nu, nv, vmax)
    p2 = _chart(b, c, a, Y, Z, X, nu, nv, vmax)[:, [2, 0, 1]]
    pts = np.concatenate([p1, p2]) if len(p2) else p1
    out = []
    tol = 1e-7 * a
    for p in pts:
        if all(np.linalg.norm(p - q) > tol for q in out):
            out.append(p)
    return np.array(out).reshape(-1, 3)


def count_stationary_3d(a, b, c, X, Y, Z, nu=512, nv=256):
    return len(stationary_points_3d(a, b, c, X, Y, Z, nu, nv))
