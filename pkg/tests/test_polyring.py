import cmath

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from abeldet.errors import InvalidParameter, NoRoots, UnsupportedChart
from abeldet.polyring import (BivarPoly, HomogeneousTop, critical_data, discriminant_sigma,
                              gradient, is_generic, monomial_basis, resultant_y,
                              univariate_roots)

x, y = BivarPoly.x(), BivarPoly.y()

complexes = st.builds(complex, st.floats(-2, 2), st.floats(-2, 2))


def random_top(rng, n):
    return HomogeneousTop(n, rng.normal(size=n + 2) + 1j * rng.normal(size=n + 2))


# monomial basis

def test_monomial_basis_order_n2():
    b = monomial_basis(2)
    assert [(e.l, e.m) for e in b] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert (b[1].l, b[1].m) == (0, 0)
    assert (b[2].l, b[2].m) == (0, 1)
    assert (b[3].l, b[3].m) == (1, 0)
    assert b[4].d == 2


@pytest.mark.parametrize("n", range(1, 7))
def test_monomial_basis_round_trip(n):
    b = monomial_basis(n)
    assert len(b) == n * n
    for j in range(1, n * n + 1):
        assert b.index(b[j].l, b[j].m) == j


def test_monomial_basis_rejects_zero():
    with pytest.raises(InvalidParameter):
        monomial_basis(0)


# arithmetic and gradient

def test_gradient_examples():
    gx, gy = gradient(x ** 2 + y ** 2)
    assert gx == 2 * x and gy == 2 * y
    gx, gy = gradient(x ** 3 + y ** 3 - 3 * x - 6 * y)
    assert gx == 3 * x ** 2 - 3 and gy == 3 * y ** 2 - 6
    gx, gy = gradient(BivarPoly.constant(5))
    assert gx.is_zero and gy.is_zero


def test_zero_polynomial_has_no_degree():
    z = x - x
    assert z.is_zero and z.degree is None and dict(z.coeffs) == {}


def test_prune_relative_threshold():
    p = BivarPoly({(1, 0): 1.0, (0, 1): 1e-16})
    assert (0, 1) not in p.coeffs and p.degree == 1


@given(complexes, complexes)
def test_evaluation_matches_sympy(a, b):
    p = (x + 2 * y) ** 3 - 1j * x * y + 4
    X, Y = sp.symbols("X Y")
    q = (X + 2 * Y) ** 3 - sp.I * X * Y + 4
    ref = complex(q.subs({X: a, Y: b}).evalf())
    assert abs(p(a, b) - ref) <= 1e-12 * max(1, abs(ref))


# univariate roots

def test_roots_simple_examples():
    r = univariate_roots([1, 0, 1]).roots
    assert np.allclose(sorted(r, key=lambda z: z.imag), [-1j, 1j], atol=1e-12)
    r = univariate_roots([-1, 0, 0, 1]).roots
    cube = [cmath.exp(2j * cmath.pi * k / 3) for k in range(3)]
    for w in cube:
        assert np.min(np.abs(r - w)) < 1e-12


def test_roots_cluster_flag():
    # (x-1)^2 (x-2)
    rs = univariate_roots([-2, 5, -4, 1], 1e-12)
    roots, mult = rs.distinct()
    assert rs.has_clusters
    i1 = np.argmin(np.abs(roots - 1))
    i2 = np.argmin(np.abs(roots - 2))
    assert mult[i1] == 2 and abs(roots[i1] - 1) < 1e-7
    assert mult[i2] == 1 and abs(roots[i2] - 2) < 1e-12


def test_roots_degree_zero():
    with pytest.raises(NoRoots):
        univariate_roots([3.0])


@settings(max_examples=40, deadline=None)
@given(st.lists(complexes, min_size=2, max_size=8))
def test_roots_match_numpy(zs):
    zs = np.array(zs)
    # keep roots separated so the comparison is well conditioned
    if len(zs) > 1 and np.min(np.abs(zs[:, None] - zs[None, :]) + np.eye(len(zs)) * 9) < 1e-2:
        return
    c = np.poly(zs)[::-1]
    r = univariate_roots(c).roots
    for z in zs:
        assert np.min(np.abs(r - z)) < 1e-8


# resultants

def test_resultant_examples():
    # Sylvester matrix with the rows of p first
    assert np.allclose(resultant_y(y ** 2 - x, y - 1), [1, -1])
    assert np.allclose(resultant_y(y - x, y + x), [0, 2])
    assert np.allclose(resultant_y(y ** 2 + 1, y ** 2 + 1), 0)


def test_resultant_matches_sympy():
    X, Y = sp.symbols("X Y")
    p = y ** 3 + x * y ** 2 - 2 * y + x ** 2 + 1
    q = 2 * y ** 2 - x * y + 3
    P = Y ** 3 + X * Y ** 2 - 2 * Y + X ** 2 + 1
    Q = 2 * Y ** 2 - X * Y + 3
    ref = sp.Poly(sp.resultant(P, Q, Y), X).all_coeffs()[::-1]
    got = resultant_y(p, q)
    assert np.allclose(got[: len(ref)], [complex(c) for c in ref], atol=1e-10)
    assert np.allclose(got[len(ref):], 0, atol=1e-10)


def test_resultant_zero_input():
    with pytest.raises(InvalidParameter):
        resultant_y(x - x, y)


def test_resultant_vanishing_oracle():
    rng = np.random.default_rng(3)
    for _ in range(10):
        cp = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
        cq = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
        p = BivarPoly.from_array(cp)
        q = BivarPoly.from_array(cq)
        res = resultant_y(p, q)
        for x0 in univariate_roots(res).roots:
            yp = univariate_roots([p(x0, 0), *[sum(cp[i, j] * x0 ** i for i in range(2))
                                               for j in (1, 2)]]).roots
            qv = np.array([q(x0, w) for w in yp])
            assert np.min(np.abs(qv)) < 1e-6 * max(1, np.abs(cq).sum() * 10)


# discriminant

def test_discriminant_examples():
    assert abs(discriminant_sigma(HomogeneousTop(1, [1, 0, 1])) + 4) < 1e-13
    assert abs(discriminant_sigma(HomogeneousTop.fermat(2)) + 27) < 1e-12
    # (x-y)(x-2y)(x-3y)
    H = HomogeneousTop(2, [1, -6, 11, -6])
    assert abs(discriminant_sigma(H) - 4) < 1e-11


@pytest.mark.parametrize("n", range(1, 7))
def test_fermat_discriminant(n):
    ref = (-1) ** (n * (n + 1) // 2) * (n + 1) ** (n + 1)
    assert abs(discriminant_sigma(HomogeneousTop.fermat(n)) - ref) < 1e-11 * abs(ref)


def test_discriminant_matches_sympy():
    X = sp.symbols("X")
    h = [2, -1 + 1j, 0.5, 3j, 1]
    f = sum(sp.nsimplify(c.real if isinstance(c, complex) else c) * X ** (4 - s)
            + (sp.I * sp.nsimplify(c.imag) * X ** (4 - s) if isinstance(c, complex) else 0)
            for s, c in enumerate(h))
    ref = complex(sp.discriminant(f, X))
    got = discriminant_sigma(HomogeneousTop(3, h))
    assert abs(got - ref) < 1e-11 * abs(ref)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_discriminant_homogeneity(n):
    rng = np.random.default_rng(n)
    for _ in range(5):
        H = random_top(rng, n)
        b = complex(rng.normal(), rng.normal())
        s1, s2 = discriminant_sigma(H * b), discriminant_sigma(H)
        assert abs(s1 - b ** (2 * n) * s2) < 1e-12 * abs(s1)


def test_discriminant_detects_square_factor():
    # (x - 2y)^2 (x + y)
    H = HomogeneousTop.from_poly((x - 2 * y) ** 2 * (x + y))
    assert abs(discriminant_sigma(H)) < 1e-12
    assert not is_generic(H)
    assert is_generic(HomogeneousTop.fermat(3))


def test_discriminant_chart():
    with pytest.raises(UnsupportedChart):
        discriminant_sigma(HomogeneousTop(2, [0, 1, 0, 1]))


# critical data

def test_critical_circle():
    cd = critical_data(x ** 2 + y ** 2)
    assert len(cd.values) == 1
    assert np.allclose(cd.points[0], [0, 0]) and abs(cd.values[0]) < 1e-14


def test_critical_perturbed_fermat():
    h = x ** 3 + y ** 3 - 3 * x - 6 * y
    cd = critical_data(h)
    r2 = np.sqrt(2)
    ref = sorted([-2 - 4 * r2, -2 + 4 * r2, 2 - 4 * r2, 2 + 4 * r2])
    assert np.allclose(sorted(cd.values.real), ref, atol=1e-10)
    assert np.allclose(cd.values.imag, 0, atol=1e-10)
    for (px, py), v in zip(cd.points, cd.values):
        assert abs(px ** 2 - 1) < 1e-10 and abs(py ** 2 - 2) < 1e-10
        assert abs(h(px, py) - v) < 1e-10


@pytest.mark.parametrize("n", [1, 2, 3])
def test_critical_fermat_degenerate(n):
    cd = critical_data(BivarPoly.fermat(n))
    assert np.allclose(cd.values, 0)
    assert int(cd.multiplicity.max()) == n * n or len(cd.values) == n * n


def test_critical_consistency_random():
    rng = np.random.default_rng(11)
    for n in (2, 3):
        top = random_top(rng, n).as_poly()
        low = BivarPoly.from_array(0.3 * (rng.normal(size=(n + 1, n + 1))
                                          + 1j * rng.normal(size=(n + 1, n + 1)))).homogeneous_part(0)
        h = top + low
        for d in range(1, n + 1):
            h = h + BivarPoly.from_array(0.3 * rng.normal(size=(d + 1, d + 1))).homogeneous_part(d)
        cd = critical_data(h)
        assert len(cd.values) == n * n
        gx, gy = gradient(h)
        for (px, py), v in zip(cd.points, cd.values):
            assert abs(gx(px, py)) < 1e-8 and abs(gy(px, py)) < 1e-8
            assert abs(h(px, py) - v) < 1e-8
