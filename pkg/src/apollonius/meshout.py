"""Caustic meshes, curve polylines and deterministic file writers."""

from __future__ import annotations

import io
import json
import math
import os
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .caustics import curvature
from .errors import CurveAbsentForShape, IoFailure, NotTriaxial
from .geom import DEFAULT_TOL, Ellipsoid3, Sheet, Tolerances
from .structure import (CurveId, intersection_curve_point, lemma2_curve, nodal_curve_point,
                        nodal_range, parse_curve_id, valid_intervals)

MIN_AREA = 1e-12
MAX_ASPECT = 1e4


@dataclass(frozen=True)
class Mesh:
    vertices: np.ndarray  # (n, 3)
    triangles: np.ndarray  # (m, 3), zero-based
    sheet: Optional[Sheet] = None

    def __post_init__(self):
        if len(self.triangles) and (self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices)):
            raise ValueError("triangle index out of range")


@dataclass(frozen=True)
class Polyline:
    points: np.ndarray  # (n, 3)
    curve_id: str
    params: np.ndarray

    @property
    def max_step(self) -> float:
        if len(self.points) < 2:
            return 0.0
        return float(np.max(np.linalg.norm(np.diff(self.points, axis=0), axis=1)))


def _triangle_quality(V, T):
    p, q, r = V[T[:, 0]], V[T[:, 1]], V[T[:, 2]]
    area = 0.5 * np.linalg.norm(np.cross(q - p, r - p), axis=1)
    edges = np.stack([np.linalg.norm(q - p, axis=1), np.linalg.norm(r - q, axis=1),
                      np.linalg.norm(p - r, axis=1)], axis=1)
    longest = edges.max(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        # longest edge over its altitude
        aspect = np.where(area > 0, longest ** 2 / (2 * area), np.inf)
    return area, aspect


def sample_caustic_mesh(E: Ellipsoid3, sheet: Union[Sheet, str], res_u: int, res_v: int,
                        tol: Tolerances = DEFAULT_TOL) -> Mesh:
    """Image of a cell-centered (u, v) grid under one curvature-center map.

    ``u`` wraps around, ``v`` stays off the poles. Triangles that collapse
    at the cuspidal edges are dropped rather than repaired.
    """
    if not isinstance(E, Ellipsoid3) or not E.is_triaxial:
        raise NotTriaxial("caustic meshes need a triaxial ellipsoid")
    if res_u < 8 or res_v < 8:
        raise ValueError("resolution must be at least 8 in each direction")
    sheet = _sheet(sheet)
    a, b, c = E.axes
    us = 2 * np.pi * (np.arange(res_u) + 0.5) / res_u
    vs = -np.pi / 2 + np.pi * (np.arange(res_v) + 0.5) / res_v
    V = np.empty((res_u * res_v, 3))
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            P = (a * math.cos(v) * math.cos(u), b * math.cos(v) * math.sin(u), c * math.sin(v))
            cd = curvature(E, P, tol)
            V[i * res_v + j] = cd.center_max if sheet is Sheet.MAX_RADIUS else cd.center_min
    tris = []
    for i in range(res_u):
        i2 = (i + 1) % res_u
        for j in range(res_v - 1):
            p, q, r, s = i * res_v + j, i2 * res_v + j, i2 * res_v + j + 1, i * res_v + j + 1
            tris.append((p, q, r))
            tris.append((p, r, s))
    T = np.array(tris, dtype=np.int64).reshape(-1, 3)
    area, aspect = _triangle_quality(V, T)
    keep = (area >= MIN_AREA * a * a) & (aspect <= MAX_ASPECT)
    return Mesh(V, T[keep], sheet)


def _sheet(s) -> Sheet:
    if isinstance(s, Sheet):
        return s
    key = str(s).lower()
    if key in ("max", "maxradius"):
        return Sheet.MAX_RADIUS
    if key in ("min", "minradius"):
        return Sheet.MIN_RADIUS
    raise ValueError(f"unknown sheet {s!r}")


def sample_curve(E: Ellipsoid3, curve: Union[CurveId, str], n: int,
                 tol: Tolerances = DEFAULT_TOL) -> Polyline:
    """``n`` samples over the curve's natural parameter domain.

    Closed plane curves use ``t = 2*pi*k/n``; the nodal and intersection
    curves cover their first-octant arc endpoint to endpoint.
    """
    cid = parse_curve_id(curve) if isinstance(curve, str) else curve
    if not isinstance(E, Ellipsoid3) or not E.is_triaxial:
        raise CurveAbsentForShape(f"{cid} needs a triaxial ellipsoid")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if cid.kind == "lemma2":
        ts = 2 * np.pi * np.arange(n) / max(n, 1)
        pts = [lemma2_curve(E, cid.index, t) for t in ts]
        return Polyline(np.array(pts, dtype=float).reshape(-1, 3), str(cid), ts)
    if cid.kind == "nodal":
        lo, hi = 0.0, nodal_range(E)
        f = lambda t: nodal_curve_point(E, t, tol=tol)
    else:
        pieces = valid_intervals(E, cid.branch)
        if not pieces:
            raise CurveAbsentForShape(f"{cid} is empty for axes {E.axes}")
        lo, hi = max(pieces, key=lambda p: p[1] - p[0])
        f = lambda t: intersection_curve_point(E, t, cid.branch, tol=tol)
    ts, pts = [], []
    for t in np.linspace(lo, hi, n) if n > 1 else [lo] * n:
        P = f(float(t))
        if P is not None:
            ts.append(float(t))
            pts.append(P)
    if n and not pts:
        raise CurveAbsentForShape(f"{cid} has no real points for axes {E.axes}")
    return Polyline(np.array(pts, dtype=float).reshape(-1, 3), str(cid), np.array(ts))


# --- writers ----------------------------------------------------------------

def _fmt(x) -> str:
    return "%.17g" % float(x)


def write_text(text: str, sink):
    try:
        if isinstance(sink, (str, os.PathLike)):
            with open(sink, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sink.write(text)
    except (OSError, io.UnsupportedOperation) as exc:
        raise IoFailure(str(exc)) from exc


def obj_text(mesh: Mesh) -> str:
    lines = ["v %s %s %s" % tuple(_fmt(x) for x in v) for v in mesh.vertices]
    lines += ["f %d %d %d" % tuple(int(i) + 1 for i in t) for t in mesh.triangles]
    return "".join(line + "\n" for line in lines)


def write_obj(mesh: Mesh, sink):
    write_text(obj_text(mesh), sink)


def csv_text(poly: Polyline) -> str:
    rows = ["t,x,y,z"]
    for t, p in zip(poly.params, poly.points):
        rows.append(",".join(_fmt(v) for v in (t, *p)))
    return "".join(r + "\n" for r in rows)


def write_csv(poly: Polyline, sink):
    write_text(csv_text(poly), sink)


def fan_dict(fan, extra: Optional[dict] = None) -> dict:
    """JSON-ready view of a normal fan; 2D feet report ``theta`` as ``t``."""
    feet = []
    for f in fan.feet:
        t = f.t if hasattr(f, "t") else f.theta
        rec = {"t": float(t)}
        for name, v in zip("xyz", f.point):
            rec[name] = float(v)
        rec["multiplicity"] = int(f.multiplicity)
        feet.append(rec)
    feet.sort(key=lambda r: r["t"])
    out = {"count": fan.count.to_json(), "solver_path": fan.solver_path.value, "feet": feet}
    if extra:
        out.update(extra)
    return out


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def write_json(fan, sink, extra: Optional[dict] = None):
    write_text(json_text(fan_dict(fan, extra)), sink)
