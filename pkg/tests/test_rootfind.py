import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from apollonius.errors import DegenerateZeroPolynomial
from apollonius.geom import make_ellipsoid
from apollonius.normals3d import normal_sextic
from apollonius.oracles import count_stationary_3d
from apollonius.rootfind import (Poly, cauchy_bound, real_roots, solve_bracketed,
                                 square_free_multiplicity)


def _sig(rs):
    return [(round(e.root, 9), e.multiplicity) for e in rs]


@pytest.mark.parametrize("coeffs, expected", [
    ([-1, 0, 1], [(-1, 1), (1, 1)]),
    ([4, 0, -3, 1], [(-1, 1), (2, 2)]),  # (t-2)^2 (t+1)
    ([1, 0, 1], []),
    ([0, 0, 0, 1], [(0, 3)]),
    ([-6, 11, -6, 1], [(1, 1), (2, 1), (3, 1)]),
])
def test_small_cases(coeffs, expected):
    assert _sig(real_roots(Poly(coeffs))) == expected


def test_zero_polynomial():
    with pytest.raises(DegenerateZeroPolynomial):
        real_roots(Poly([0, 0, 0]))
    with pytest.raises(DegenerateZeroPolynomial):
        square_free_multiplicity(Poly([0.0]))


def test_domain_restriction():
    p = Poly.from_roots([-3, -1, 0.5, 2])
    assert [round(r, 12) for r in real_roots(p, domain=(-1.5, 1.0)).roots] == [-1, 0.5]


def test_isolation_intervals_disjoint_and_bracketing():
    p = Poly.from_roots([-2, -1.9, 0.1, 0.3, 5, 7])
    rs = real_roots(p)
    for e in rs:
        assert e.lo <= e.root <= e.hi
    for e1, e2 in zip(rs.entries, rs.entries[1:]):
        assert e1.hi <= e2.lo and e1.root < e2.root


@pytest.mark.parametrize("coeffs, expected", [
    ([-1, 0, 1], [(2, 1)]),
    ([4, 0, -3, 1], [(1, 1), (1, 2)]),
])
def test_square_free_signature(coeffs, expected):
    assert square_free_multiplicity(Poly(coeffs)) == expected


def test_sextic_matches_stationary_points():
    E, A = make_ellipsoid(4, 3, 2), (0.3, 0.2, 0.1)
    rs = real_roots(normal_sextic(E, A))
    assert len(rs) == 6 and all(m == 1 for m in rs.multiplicities)
    assert len(rs) == count_stationary_3d(4, 3, 2, *A)


root_sets = st.lists(st.floats(-20, 20), min_size=1, max_size=6).filter(
    lambda rs: all(abs(x - y) >= 1e-3 for i, x in enumerate(rs) for y in rs[i + 1:]))


@given(root_sets, st.lists(st.integers(1, 2), min_size=6, max_size=6), st.floats(0.2, 5))
def test_recovers_constructed_roots(rs, mults, lead):
    full = [r for r, m in zip(rs, mults) for _ in range(m)][:6]
    want = sorted(set(full))
    p = Poly.from_roots(full, lead)
    got = real_roots(p)
    assert len(got) == len(want)
    for e, r in zip(got, want):
        assert abs(e.root - r) <= 1e-6 * (1 + abs(r))
        assert e.multiplicity == full.count(r)


@given(root_sets)
def test_residual_at_roots(rs):
    p = Poly.from_roots(rs)
    for r in real_roots(p).roots:
        scale = max(abs(c) for c in p.coeffs) * max(1, abs(r)) ** p.degree
        assert abs(p(r)) <= 1e-9 * scale


@given(st.lists(st.floats(-5, 5), min_size=2, max_size=5, unique=True).filter(
    lambda rs: min(abs(x - y) for i, x in enumerate(rs) for y in rs[i + 1:]) > 1e-2),
    st.floats(0.1, 10))
def test_substitution_scaling(rs, lam):
    p = Poly.from_roots(rs)
    a = real_roots(p).roots
    b = real_roots(p.scaled(lam)).roots
    assert np.allclose(sorted(x / lam for x in a), b, rtol=1e-8, atol=1e-9)


def test_cauchy_bound_contains_roots():
    p = Poly.from_roots([-30, 1, 2])
    assert cauchy_bound(p.coeffs) >= 30


def test_solve_bracketed():
    r = solve_bracketed(lambda x: x ** 3 - 2, lambda x: 3 * x * x, 0.0, 2.0)
    assert math.isclose(r, 2 ** (1 / 3), rel_tol=1e-14)
    with pytest.raises(ValueError):
        solve_bracketed(lambda x: x * x + 1, lambda x: 2 * x, -1.0, 1.0)
