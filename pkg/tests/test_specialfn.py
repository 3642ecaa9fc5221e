import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from abeldet.closedform import C_of_H
from abeldet.errors import PoleError
from abeldet.polyring import HomogeneousTop, discriminant_sigma, monomial_basis
from abeldet.specialfn import (RootOfUnity, beta, build_G, det_G, fermat_C, fermat_IP, fermat_Ij,
                               gamma, gamma_double_product, gamma_product_shifted,
                               gamma_product_unit, gauss_legendre_check, identity_suite,
                               roots_of_unity_product, sigma_value, vandermonde_det)


def gamma_quad(a):
    val, _ = integrate.quad(lambda u: u ** (a - 1) * math.exp(-u), 0, np.inf, limit=200)
    return val


def test_gamma_small_values():
    assert abs(gamma(1) - 1) < 1e-14
    assert abs(gamma(0.5) - math.sqrt(math.pi)) < 1e-14
    for n in range(1, 8):
        assert abs(gamma(n + 2) - math.factorial(n + 1)) < 1e-13 * math.factorial(n + 1)


@pytest.mark.parametrize("a", [0.5, 1.3, 2.7, 4.0])
def test_gamma_against_defining_integral(a):
    assert abs(gamma(a) - gamma_quad(a)) < 1e-9 * gamma_quad(a)


@given(st.floats(0.01, 19.9))
def test_gamma_real_domain(z):
    ref = math.gamma(z)
    assert abs(gamma(z) - ref) < 1e-12 * ref


@settings(max_examples=50)
@given(st.floats(0.05, 5), st.floats(-3, 3))
def test_gamma_complex_matches_scipy(re, im):
    z = complex(re, im)
    ref = special.gamma(z)
    assert abs(gamma(z) - ref) < 1e-12 * abs(ref)


def test_gamma_reflection_negative():
    assert abs(gamma(-0.5) + 2 * math.sqrt(math.pi)) < 1e-13


@pytest.mark.parametrize("z", [0, -1, -3])
def test_gamma_poles(z):
    with pytest.raises(PoleError):
        gamma(z)


def test_beta_examples():
    assert abs(beta(1, 1) - 1) < 1e-14
    val, _ = integrate.quad(lambda u: u ** -0.5 * (1 - u) ** 0.5, 0, 1)
    assert abs(beta(0.5, 1.5) - math.pi / 2) < 1e-14
    assert abs(val - math.pi / 2) < 1e-10


@settings(max_examples=30)
@given(st.floats(0.2, 5), st.floats(0.2, 5))
def test_beta_matches_quadrature(a, b):
    # algebraic endpoint weight u**(a-1) (1-u)**(b-1)
    ref, _ = integrate.quad(lambda u: 1.0, 0, 1, weight="alg", wvar=(a - 1, b - 1))
    assert abs(beta(a, b) - ref) < 1e-10 * ref


def test_root_of_unity():
    for n in range(1, 8):
        eps = RootOfUnity(n)
        assert abs(eps.value ** (n + 1) - 1) < 1e-14
        p = np.array(eps.powers)
        d = np.abs(p[:, None] - p[None, :]) + np.eye(n + 1)
        assert d.min() > 1e-3
        assert eps ** (n + 1) == eps ** 0


def test_fermat_Ij_examples():
    assert abs(fermat_Ij(1, 1) - math.pi / 4) < 1e-14
    assert abs(fermat_Ij(2, 1) - beta(1 / 3, 4 / 3) / 3) < 1e-15


@pytest.mark.parametrize("n", range(1, 6))
def test_fermat_Ij_against_quadrature(n):
    for j in range(1, n * n + 1):
        e = monomial_basis(n)[j]
        ref, _ = integrate.quad(lambda u: u ** e.l * (1 - u ** (n + 1)) ** ((e.m + 1) / (n + 1)),
                                0, 1, epsabs=0, epsrel=1e-13, limit=200)
        val = fermat_Ij(n, j)
        assert abs(val - ref) < 1e-10 * ref
        assert 0 < val < 1


def test_fermat_IP_n1():
    ip = fermat_IP(1)
    assert abs(ip.closed - math.pi / 4) < 1e-15
    assert abs(ip.direct - math.pi / 4) < 1e-14


@pytest.mark.parametrize("n", range(1, 6))
def test_fermat_IP_routes(n):
    assert fermat_IP(n).residual < 1e-10


def test_sigma_values():
    assert abs(sigma_value(1).direct - 4) < 1e-13 and sigma_value(1).closed == 4
    assert abs(sigma_value(2).direct + 27) < 1e-12 and sigma_value(2).closed == -27


@pytest.mark.parametrize("n", range(1, 7))
def test_sigma_routes_and_discriminant(n):
    sv = sigma_value(n)
    assert sv.residual < 1e-12
    Sigma = discriminant_sigma(HomogeneousTop.fermat(n))
    assert abs(Sigma - (-1) ** n * sv.closed) < 1e-11 * abs(Sigma)


def test_G_small():
    assert np.allclose(build_G(1).entries, [[1]])
    G = build_G(2)
    eps = RootOfUnity(2).value
    assert abs(G.entries[0, 1] - eps) < 1e-15
    assert set(np.unique(G.exponents())) <= {0, 1, 2}


@pytest.mark.parametrize("n", range(1, 6))
def test_G_entries_and_periodicity(n):
    G = build_G(n)
    b = monomial_basis(n)
    eps = cmath.exp(2j * math.pi / (n + 1))
    for j in range(1, n * n + 1):
        for r in range(1, n * n + 1):
            e = b[r].l * (b[j].l + 1) + b[r].m * (b[j].m + 1)
            assert abs(G.entries[j - 1, r - 1] - eps ** e) < 1e-12
    for s in range(1, n):
        assert np.allclose(G.entries[s * n:(s + 1) * n, :n], G.entries[:n, :n])


@pytest.mark.parametrize("n", range(1, 7))
def test_det_G_routes(n):
    d = det_G(n)
    assert d.residual < 1e-10
    assert all(r < 1e-10 for r in d.recurrence)
    assert vandermonde_det(n).residual < 1e-12


def test_det_G_n1():
    d = det_G(1)
    assert abs(d.direct - 1) < 1e-15 and abs(d.closed - 1) < 1e-15


@pytest.mark.parametrize("n", range(1, 7))
def test_roots_of_unity_product(n):
    assert abs(roots_of_unity_product(n) - (n + 1)) < 1e-12


def test_gauss_legendre_duplication():
    assert gauss_legendre_check(1, 0.5) < 1e-11


@pytest.mark.parametrize("n", range(1, 7))
def test_gamma_products(n):
    assert gauss_legendre_check(n, 1 / (n + 1)) < 1e-12
    assert gauss_legendre_check(n, (n + 2) / (n + 1)) < 1e-12
    assert gamma_product_unit(n).residual < 1e-12
    assert gamma_product_shifted(n).residual < 1e-12
    assert gamma_double_product(n).residual < 1e-11


def test_gauss_legendre_pole():
    with pytest.raises(PoleError):
        gauss_legendre_check(2, 0.0)


def test_fermat_C():
    assert fermat_C(1) == math.pi
    assert abs(fermat_C(2).value - 729 * fermat_IP(2).closed) < 1e-12 * abs(fermat_C(2).value)
    for n in range(1, 5):
        ref = C_of_H(HomogeneousTop.fermat(n))
        assert fermat_C(n).sign_against(ref, rtol=1e-9) is not None


@pytest.mark.parametrize("n", range(1, 7))
def test_identity_suite(n):
    rows = identity_suite(n)
    assert len(rows) == 14
    for r in rows:
        assert r.residual < 1e-12, r
