"""Real-root isolation for low-degree real polynomials.

Isolation works by recursion on derivatives: the real roots of p' split the
line into intervals on which p is monotone, so each interval holds at most
one simple root and is bracketed by a sign change. Critical points where p
is numerically zero become multiple roots, with multiplicity one more than
the critical point's own multiplicity in p'. Refinement is a safeguarded
Newton/bisection hybrid that keeps the bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .errors import DegenerateZeroPolynomial
from .geom import DEFAULT_TOL, Tolerances

_EPS = 2.220446049250313e-16


def _trim(coeffs: Sequence[float], rel: float) -> Tuple[float, ...]:
    c = [float(x) for x in coeffs]
    if not c:
        return (0.0,)
    big = max(abs(x) for x in c)
    if big == 0.0:
        return (0.0,)
    while len(c) > 1 and abs(c[-1]) <= rel * big:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Poly:
    """Real polynomial, coefficients in ascending degree."""

    coeffs: Tuple[float, ...]

    def __init__(self, coeffs: Iterable[float], eps_root: float = DEFAULT_TOL.eps_root):
        object.__setattr__(self, "coeffs", _trim(list(coeffs), eps_root))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return all(x == 0.0 for x in self.coeffs)

    def __call__(self, t: float) -> float:
        return _horner(self.coeffs, t)

    def deriv(self) -> "Poly":
        return Poly(_deriv(self.coeffs), eps_root=0.0)

    def scaled(self, lam: float) -> "Poly":
        """The polynomial t -> p(lam * t)."""
        return Poly([c * lam**i for i, c in enumerate(self.coeffs)], eps_root=0.0)

    def __mul__(self, other: "Poly") -> "Poly":
        out = [0.0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return Poly(out, eps_root=0.0)

    @classmethod
    def from_roots(cls, roots: Iterable[float], lead: float = 1.0) -> "Poly":
        p = cls([lead], eps_root=0.0)
        for r in roots:
            p = p * cls([-r, 1.0], eps_root=0.0)
        return p


def _horner(c, t):
    acc = 0.0
    for x in reversed(c):
        acc = acc * t + x
    return acc


def _deriv(c):
    return [i * c[i] for i in range(1, len(c))] or [0.0]


def _abs_eval(c, t):
    """Sum |c_i| |t|^i, the scale of rounding error in Horner evaluation."""
    at = abs(t)
    acc = 0.0
    for x in reversed(c):
        acc = acc * at + abs(x)
    return acc


@dataclass(frozen=True)
class RootEntry:
    root: float
    multiplicity: int
    lo: float
    hi: float


@dataclass(frozen=True)
class RootSet:
    entries: Tuple[RootEntry, ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def roots(self) -> List[float]:
        return [e.root for e in self.entries]

    @property
    def multiplicities(self) -> List[int]:
        return [e.multiplicity for e in self.entries]

    @property
    def total_multiplicity(self) -> int:
        return sum(e.multiplicity for e in self.entries)


def _bracketed_root(c, dc, u, v, fu, fv, tol: Tolerances):
    """Safeguarded Newton on a sign-change bracket [u, v]; returns (root, lo, hi)."""
    if fu > 0:
        # orient so that f(lo) < 0 < f(hi)
        lo, hi, neg_is_left = u, v, False
    else:
        lo, hi, neg_is_left = u, v, True
    x = 0.5 * (u + v)
    dx_old = abs(v - u)
    dx = dx_old
    for _ in range(tol.max_iter):
        fx = _horner(c, x)
        if fx == 0.0:
            return x, x, x
        if (fx < 0) == neg_is_left:
            lo = x
        else:
            hi = x
        if hi - lo <= tol.eps_root * max(1.0, abs(x)) * 0.5:
            break
        d = _horner(dc, x)
        newton_ok = d != 0.0
        if newton_ok:
            step = fx / d
            xn = x - step
            newton_ok = lo < xn < hi and abs(step) < 0.5 * dx_old
        dx_old = dx
        if newton_ok:
            dx = abs(step)
            x = xn
        else:
            dx = 0.5 * (hi - lo)
            x = 0.5 * (lo + hi)
        if dx <= _EPS * max(1.0, abs(x)):
            break
    return x, lo, hi


def _taylor_bound(c, t, delta):
    """Sum over k>=2 of |p^(k)(t)|/k! * delta^k."""
    total = 0.0
    d = list(c)
    fact = 1.0
    for k in range(1, len(c)):
        d = _deriv(d)
        fact *= k
        if k >= 2:
            total += abs(_horner(d, t)) / fact * delta**k
    return total


def _numeric_radius(c, t, noise, mult):
    """Distance from t within which |p| stays below the evaluation noise."""
    d = list(c)
    fact = 1.0
    for k in range(1, mult + 1):
        d = _deriv(d)
        fact *= k
    pk = abs(_horner(d, t)) / fact
    if pk == 0.0:
        return 0.0
    return (noise / pk) ** (1.0 / mult)


def _isolate(c, lo, hi, tol: Tolerances) -> List[RootEntry]:
    deg = len(c) - 1
    if deg <= 0:
        return []
    if deg == 1:
        r = -c[0] / c[1]
        return [RootEntry(r, 1, r, r)] if lo <= r <= hi else []
    dc = _deriv(c)
    crit = _isolate(dc, lo, hi, tol)

    multiple = []  # (root, multiplicity, absorb radius)
    for e in crit:
        t = e.root
        delta = 0.5 * tol.eps_mult * max(1.0, abs(t))
        noise = 8.0 * _EPS * deg * _abs_eval(c, t)
        if abs(_horner(c, t)) <= noise + _taylor_bound(c, t, delta):
            m = e.multiplicity + 1
            rad = max(2.0 * delta, 2.0 * _numeric_radius(c, t, noise, m))
            multiple.append((t, m, rad))

    def absorbed(r):
        return any(abs(r - t) <= rad for t, _, rad in multiple)

    knots = [lo] + [e.root for e in crit if lo < e.root < hi] + [hi]
    simple = []
    for u, v in zip(knots[:-1], knots[1:]):
        fu, fv = _horner(c, u), _horner(c, v)
        if fu == 0.0:
            if not absorbed(u):
                simple.append(RootEntry(u, 1, u, u))
            continue
        if fv == 0.0:
            if v == hi and not absorbed(v):
                simple.append(RootEntry(v, 1, v, v))
            continue
        if (fu < 0) != (fv < 0):
            r, a, b = _bracketed_root(c, dc, u, v, fu, fv, tol)
            if not absorbed(r):
                simple.append(RootEntry(r, 1, a, b))

    entries = simple + [
        RootEntry(t, m, max(lo, t - 0.5 * tol.eps_mult * max(1.0, abs(t))),
                  min(hi, t + 0.5 * tol.eps_mult * max(1.0, abs(t))))
        for t, m, _ in multiple if lo <= t <= hi
    ]
    entries.sort(key=lambda e: e.root)
    return _merge(entries, tol, deg)


def _merge(entries, tol: Tolerances, deg: int) -> List[RootEntry]:
    out: List[RootEntry] = []
    for e in entries:
        if out and abs(e.root - out[-1].root) <= tol.eps_mult * max(1.0, abs(e.root)):
            prev = out[-1]
            m = prev.multiplicity + e.multiplicity
            # keep the representative from the higher-multiplicity member
            root = prev.root if prev.multiplicity >= e.multiplicity else e.root
            out[-1] = RootEntry(root, m, min(prev.lo, e.lo), max(prev.hi, e.hi))
        else:
            out.append(e)
    total = sum(e.multiplicity for e in out)
    if total > deg:
        raise ArithmeticError(f"root isolation produced multiplicity {total} > degree {deg}")
    return out


def cauchy_bound(coeffs: Sequence[float]) -> float:
    lead = coeffs[-1]
    return 1.0 + max(abs(x / lead) for x in coeffs[:-1]) if len(coeffs) > 1 else 1.0


def real_roots(p, domain: Optional[Tuple[float, float]] = None,
               tol: Tolerances = DEFAULT_TOL) -> RootSet:
    """All real roots of ``p`` in ``domain`` (default: the whole line).

    Roots closer than ``eps_mult * max(1, |t|)`` are reported once with
    their multiplicities summed.
    """
    coeffs = p.coeffs if isinstance(p, Poly) else tuple(float(x) for x in p)
    c = _trim(coeffs, tol.eps_root)
    big = max(abs(x) for x in c)
    if big == 0.0:
        raise DegenerateZeroPolynomial("all coefficients vanish")
    c = [x / big for x in c]
    bound = cauchy_bound(c) * (1.0 + 1e-9)
    lo, hi = (-bound, bound) if domain is None else (float(domain[0]), float(domain[1]))
    if domain is not None:
        lo, hi = max(lo, -bound), min(hi, bound)
        if lo > hi:
            return RootSet(())
    return RootSet(tuple(_isolate(c, lo, hi, tol)))


# --- square-free signature ------------------------------------------------

def _normalize(c):
    big = max(abs(x) for x in c)
    return [x / big for x in c] if big else list(c)


def _polydiv(n, d):
    n = list(n)
    q = [0.0] * max(1, len(n) - len(d) + 1)
    lead = d[-1]
    for k in range(len(n) - len(d), -1, -1):
        f = n[k + len(d) - 1] / lead
        q[k] = f
        for j, dj in enumerate(d):
            n[k + j] -= f * dj
    r = n[: len(d) - 1] or [0.0]
    return q, r


def _numeric_gcd(f, g, thresh):
    """Euclid with remainders truncated when they fall below ``thresh``."""
    f, g = _normalize(f), _normalize(g)
    while True:
        if len(g) == 1:
            return [1.0] if abs(g[0]) > 0 else f
        _, r = _polydiv(f, g)
        scale = max(abs(x) for x in f)
        r = list(r)
        while len(r) > 1 and abs(r[-1]) <= thresh * scale:
            r.pop()
        if all(abs(x) <= thresh * scale for x in r):
            return g
        f, g = g, _normalize(r)


def square_free_multiplicity(p, tol: Tolerances = DEFAULT_TOL) -> List[Tuple[int, int]]:
    """Numeric Yun decomposition: list of (factor degree, multiplicity).

    Only factors of positive degree are listed, in increasing multiplicity.
    """
    coeffs = p.coeffs if isinstance(p, Poly) else tuple(float(x) for x in p)
    c = list(_trim(coeffs, tol.eps_root))
    if all(x == 0.0 for x in c):
        raise DegenerateZeroPolynomial("all coefficients vanish")
    c = _normalize(c)
    if len(c) == 1:
        return []
    thresh = tol.eps_mult
    a = _numeric_gcd(c, _deriv(c), thresh)
    b, _ = _polydiv(c, a)
    cc, _ = _polydiv(_deriv(c), a)
    d = [x - y for x, y in zip(cc + [0.0] * (len(b) - len(cc)), _deriv(b) + [0.0] * len(b))]
    d = d[: max(len(cc), len(b) - 1)]
    out = []
    i = 1
    while len(b) > 1:
        a = _numeric_gcd(b, d, thresh) if any(abs(x) > thresh for x in d) else b
        if len(a) > 1:
            out.append((len(a) - 1, i))
        b, _ = _polydiv(b, a)
        cc, _ = _polydiv(d, a)
        db = _deriv(b)
        n = max(len(cc), len(db))
        d = [(cc[k] if k < len(cc) else 0.0) - (db[k] if k < len(db) else 0.0) for k in range(n)]
        i += 1
        if i > len(c):
            break
    return out


def solve_bracketed(f: Callable[[float], float], df: Callable[[float], float],
                    lo: float, hi: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Root of a continuous ``f`` with a sign change on [lo, hi].

    Newton steps are taken when they stay inside the bracket and shrink it
    fast enough; otherwise the bracket is bisected, geometrically when it
    spans several orders of magnitude of a positive range. Convergence is
    relative to |x|, which keeps tiny offsets from a pole accurate.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo < 0) == (fhi < 0):
        raise ValueError("no sign change on the bracket")
    neg_left = flo < 0
    x = 0.5 * (lo + hi)
    for _ in range(4 * tol.max_iter):
        fx = f(x)
        if fx == 0.0:
            return x
        if (fx < 0) == neg_left:
            lo = x
        else:
            hi = x
        if hi - lo <= 2 * _EPS * max(abs(lo), abs(hi)):
            break
        d = df(x)
        xn = x - fx / d if d != 0.0 else None
        if xn is not None and abs(xn - x) <= 2 * _EPS * abs(x):
            return xn
        if xn is not None and lo < xn < hi and abs(xn - x) < 0.5 * (hi - lo):
            x = xn
        elif lo > 0 and hi > 4 * lo:
            x = math.sqrt(lo * hi)
        elif hi < 0 and lo < 4 * hi:
            x = -math.sqrt(lo * hi)
        else:
            x = 0.5 * (lo + hi)
        if x in (lo, hi):
            break
    return x
