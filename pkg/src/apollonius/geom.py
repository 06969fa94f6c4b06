"""Validated ellipse/ellipsoid types, tolerances and residual evaluators."""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, fields, replace
from typing import Optional, Sequence, Union

import numpy as np

from .errors import NonPositiveAxis, OffSurface

Point2 = tuple  # (x, y)
Point3 = tuple  # (x, y, z)


@dataclass(frozen=True)
class Tolerances:
    """Numerical knobs shared by every module.

    ``eps_root``, ``eps_mult``, ``eps_deg`` and ``eps_axis`` are relative
    (to the root magnitude or to the relevant semi-axis); ``eps_on`` bounds the
    dimensionless quadric residual.
    """

    eps_root: float = 1e-12
    eps_mult: float = 1e-7
    eps_deg: float = 1e-10
    eps_on: float = 1e-9
    eps_axis: float = 1e-9
    max_iter: int = 64

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (v > 0) or not math.isfinite(v):
                raise ValueError(f"tolerance {f.name} must be positive and finite, got {v!r}")
        if not self.eps_mult > self.eps_root:
            raise ValueError("eps_mult must exceed eps_root")

    def with_overrides(self, **kw) -> "Tolerances":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw)

    @classmethod
    def from_env(cls, environ=None, base: Optional["Tolerances"] = None) -> "Tolerances":
        """Apply ``APOLLONIUS_TOL_<NAME>`` overrides, e.g. ``APOLLONIUS_TOL_MULT=1e-6``."""
        environ = os.environ if environ is None else environ
        base = base or cls()
        kw = {}
        for f in fields(cls):
            key = "APOLLONIUS_TOL_" + f.name.replace("eps_", "").upper()
            if key in environ:
                kw[f.name] = int(environ[key]) if f.name == "max_iter" else float(environ[key])
        return base.with_overrides(**kw)


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class Count:
    """Number of normals: ``value`` is ``None`` for infinitely many."""

    value: Optional[int]

    @classmethod
    def finite(cls, k: int) -> "Count":
        if k < 0:
            raise ValueError("count must be nonnegative")
        return cls(int(k))

    @classmethod
    def infinite(cls) -> "Count":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def to_json(self):
        return "inf" if self.value is None else self.value

    def __str__(self):
        return str(self.to_json())

    def __eq__(self, other):
        if isinstance(other, Count):
            return self.value == other.value
        if isinstance(other, int):
            return self.value == other
        if other == "inf" or other == math.inf:
            return self.value is None
        return NotImplemented

    def __hash__(self):
        return hash(self.value)


class ShapeClass(enum.Enum):
    TRIAXIAL = "triaxial"
    PROLATE = "prolate"  # a > b = c, symmetry axis x
    OBLATE = "oblate"  # a = b > c, symmetry axis z
    SPHERE = "sphere"

    @property
    def is_revolution(self) -> bool:
        return self in (ShapeClass.PROLATE, ShapeClass.OBLATE)


class Sheet(enum.Enum):
    """Caustic sheet, named by which principal radius generates it."""

    MAX_RADIUS = "MaxRadius"
    MIN_RADIUS = "MinRadius"


def _check_axes(values):
    for v in values:
        if not (isinstance(v, (int, float, np.floating, np.integer)) and math.isfinite(v) and v > 0):
            raise NonPositiveAxis(f"semi-axes must be positive and finite, got {tuple(values)!r}")


@dataclass(frozen=True)
class Ellipse2:
    """Ellipse x^2/a^2 + y^2/b^2 = 1 with a >= b.

    ``swapped`` records that the caller's first axis was the shorter one, so
    caller coordinates (u, v) correspond to canonical (v, u).
    """

    a: float
    b: float
    swapped: bool = False

    def __post_init__(self):
        _check_axes((self.a, self.b))
        if self.a < self.b:
            raise NonPositiveAxis("Ellipse2 requires a >= b; use make_ellipse to canonicalize")

    @property
    def axes(self):
        return (self.a, self.b)

    def is_circle(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return self.a - self.b <= tol.eps_axis * self.a

    def to_canonical(self, p):
        return (float(p[1]), float(p[0])) if self.swapped else (float(p[0]), float(p[1]))

    to_original = to_canonical


def make_ellipse(a: float, b: float) -> Ellipse2:
    _check_axes((a, b))
    if a >= b:
        return Ellipse2(float(a), float(b), False)
    return Ellipse2(float(b), float(a), True)


@dataclass(frozen=True)
class Ellipsoid3:
    """Ellipsoid with canonical ordering a >= b >= c.

    ``permutation[i]`` is the index of the caller's axis that became canonical
    axis ``i``.
    """

    a: float
    b: float
    c: float
    shape_class: ShapeClass = ShapeClass.TRIAXIAL
    permutation: tuple = (0, 1, 2)

    def __post_init__(self):
        _check_axes((self.a, self.b, self.c))
        if not (self.a >= self.b >= self.c):
            raise NonPositiveAxis("Ellipsoid3 requires a >= b >= c; use make_ellipsoid")

    @property
    def axes(self):
        return (self.a, self.b, self.c)

    @property
    def axes2(self):
        return (self.a * self.a, self.b * self.b, self.c * self.c)

    @property
    def is_triaxial(self) -> bool:
        return self.shape_class is ShapeClass.TRIAXIAL

    def to_canonical(self, p):
        return tuple(float(p[j]) for j in self.permutation)

    def to_original(self, p):
        out = [0.0, 0.0, 0.0]
        for i, j in enumerate(self.permutation):
            out[j] = float(p[i])
        return tuple(out)

    def scaled(self, lam: float) -> "Ellipsoid3":
        return replace(self, a=self.a * lam, b=self.b * lam, c=self.c * lam)


def classify_shape(a, b, c, tol: Tolerances = DEFAULT_TOL) -> ShapeClass:
    ab = (a - b) <= tol.eps_axis * a
    bc = (b - c) <= tol.eps_axis * a
    if ab and bc:
        return ShapeClass.SPHERE
    if ab:
        return ShapeClass.OBLATE
    if bc:
        return ShapeClass.PROLATE
    return ShapeClass.TRIAXIAL


def make_ellipsoid(a: float, b: float, c: float, tol: Tolerances = DEFAULT_TOL) -> Ellipsoid3:
    _check_axes((a, b, c))
    vals = (float(a), float(b), float(c))
    # stable sort keeps the caller's order among equal axes
    perm = tuple(sorted(range(3), key=lambda i: -vals[i]))
    ca, cb, cc = (vals[i] for i in perm)
    return Ellipsoid3(ca, cb, cc, classify_shape(ca, cb, cc, tol), perm)


Quadric = Union[Ellipse2, Ellipsoid3]


def quadric_residual(E: Quadric, P: Sequence[float]) -> float:
    """Sum of coord^2/axis^2 minus one; negative inside, zero on the surface."""
    axes = E.axes
    if len(P) != len(axes):
        raise ValueError(f"point has {len(P)} coordinates, quadric needs {len(axes)}")
    return math.fsum((p / s) ** 2 for p, s in zip(P, axes)) - 1.0


def outward_normal(E: Quadric, P: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> tuple:
    """Unnormalized outward normal (x/a^2, y/b^2[, z/c^2])."""
    r = quadric_residual(E, P)
    if abs(r) > tol.eps_on:
        raise OffSurface(f"point is off the quadric (residual {r:.3e})")
    return tuple(float(p) / (s * s) for p, s in zip(P, E.axes))


def project_radially(E: Quadric, P: Sequence[float]) -> tuple:
    """Scale P along the ray from the center onto the quadric."""
    s = math.sqrt(quadric_residual(E, P) + 1.0)
    return tuple(float(p) / s for p in P)


def cbrt(x: float) -> float:
    """Real cube root (math.cbrt needs Python 3.11)."""
    return float(np.cbrt(x))
