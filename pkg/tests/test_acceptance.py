"""Acceptance criteria, each at its stated tolerance and time budget.

Every test prints one ``criterion k (...): PASS`` line; the pytest terminal
summary lists PASS or FAIL for all of them.
"""
import cmath
import math
import time

import numpy as np
import pytest

from abeldet.closedform import C_of_H, build_A, build_E, canonical_q, gradient_ideal_degenerate
from abeldet.cycles import fermat_basis, transport_t
from abeldet.periods import VerifyConfig, basis_at, period_matrix, prepare_basis, verify
from abeldet.polyring import BivarPoly, HomogeneousTop, critical_data, discriminant_sigma
from abeldet.specialfn import (det_G, fermat_IP, fermat_Ij, fermat_discriminant,
                               gamma_double_product, gamma_product_shifted, gamma_product_unit,
                               gauss_legendre_check, roots_of_unity_product, sigma_value,
                               vandermonde_det)

from oracles import degenerate_top, random_top, rank_oracle_degenerate

x, y = BivarPoly.x(), BivarPoly.y()
OFF_FERMAT = {
    "a=0.3,b=0.6": x ** 3 + y ** 3 - 0.3 * x - 0.6 * y,
    "a=0.2+0.1i,b=0.5": x ** 3 + y ** 3 - (0.2 + 0.1j) * x - 0.5 * y,
}


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


def up_to_sign(a, b):
    return min(rel(a, b), rel(a, -b))


def test_circle_constant(criterion):
    c = criterion(1, "x^2+y^2 gives constant pi")
    t0 = time.perf_counter()
    rep = verify(x ** 2 + y ** 2)
    pm = period_matrix(x ** 2 + y ** 2, 1, fermat_basis(1), 1e-12)
    elapsed = time.perf_counter() - t0
    err = up_to_sign(pm.det, math.pi)
    assert rep.passed
    assert err < 1e-9
    assert elapsed < 1.0
    c.passed(f"|det/pi|-1 = {err:.1e}, {elapsed:.2f} s")


@pytest.mark.parametrize("n", [2, 3])
def test_fermat_closure(criterion, n):
    c = criterion(2, "Fermat det = sigma^n IP = C(H), n=2,3")
    t0 = time.perf_counter()
    d = period_matrix(BivarPoly.fermat(n), 1, fermat_basis(n), 1e-12).det
    elapsed = time.perf_counter() - t0
    sigma = sigma_value(n).closed
    e1 = up_to_sign(d, sigma ** n * fermat_IP(n).closed)
    e2 = up_to_sign(d, C_of_H(HomogeneousTop.fermat(n)).value)
    assert e1 < 1e-6 and e2 < 1e-6
    assert elapsed < 60
    c.passed(f"n={n}: vs sigma^n IP {e1:.1e}, vs C(H) {e2:.1e}, {elapsed:.2f} s")


@pytest.mark.parametrize("n", [2, 3])
def test_corollary_factorization(criterion, n):
    c = criterion(3, "det = prod I_j1 * det G")
    d = period_matrix(BivarPoly.fermat(n), 1, fermat_basis(n), 1e-12).det
    eps = cmath.exp(2j * math.pi / (n + 1))
    I = 1 + 0j
    for j in range(1, n * n + 1):
        l, m = divmod(j - 1, n)
        I *= (1 - eps ** (m + 1)) * (1 - eps ** (l + 1)) * fermat_Ij(n, j)
    err = rel(d, I * det_G(n).closed)
    assert err < 1e-7
    c.passed(f"n={n}: relative error {err:.1e}")


def test_identity_suite(criterion):
    c = criterion(4, "two-route identities")
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(1, 7):
        checks = [sigma_value(n).residual, fermat_discriminant(n).residual,
                  det_G(n).residual, max(det_G(n).recurrence, default=0.0),
                  vandermonde_det(n).residual,
                  abs(roots_of_unity_product(n) - (n + 1)) / (n + 1)]
        if n <= 4:
            checks += [fermat_IP(n).residual,
                       gauss_legendre_check(n, 1 / (n + 1)),
                       gauss_legendre_check(n, (n + 2) / (n + 1)),
                       gamma_product_unit(n).residual, gamma_product_shifted(n).residual,
                       gamma_double_product(n).residual]
        worst = max(worst, max(checks))
    elapsed = time.perf_counter() - t0
    assert worst < 1e-9
    assert elapsed < 10
    c.passed(f"worst residual {worst:.1e}, {elapsed:.2f} s")


@pytest.mark.parametrize("label", list(OFF_FERMAT))
def test_off_fermat(criterion, label):
    c = criterion(5, "off-Fermat verification")
    h = OFF_FERMAT[label]
    t0 = time.perf_counter()
    rep = verify(h, VerifyConfig(fit_tol=1e-6, root_tol=1e-5, sign_tol=1e-4))
    elapsed = time.perf_counter() - t0
    assert rep.error is None, rep.error
    assert rep.fit_residual < 1e-6
    assert rep.root_distance < 1e-5
    assert rep.sign is not None and abs(rep.ratio - rep.sign) < 1e-4
    assert elapsed < 300
    c.passed(f"{label}: fit {rep.fit_residual:.1e}, roots {rep.root_distance:.1e}, "
             f"ratio-sign {abs(rep.ratio - rep.sign):.1e}, {elapsed:.1f} s")


def test_single_valued(criterion):
    c = criterion(6, "det single-valued around a critical value")
    h = OFF_FERMAT["a=0.3,b=0.6"]
    crit = critical_data(h).values
    a = crit[np.argmin(np.abs(crit - 0.24))]
    others = np.abs(crit - a)
    radius = 0.5 * np.min(others[others > 1e-6])
    base = prepare_basis(h)
    t_base = a + radius
    start = transport_t(base, [1.0, t_base])
    loop = t_base - radius + radius * np.exp(2j * np.pi * np.linspace(0, 1, 97))
    loop[-1] = t_base
    after = transport_t(start, loop)
    p0 = period_matrix(h, t_base, start, 1e-12)
    p1 = period_matrix(h, t_base, after, 1e-12)
    det_change = rel(p0.det, p1.det)
    col_change = np.max(np.abs(p1.entries - p0.entries), axis=0) / np.max(np.abs(p0.entries), axis=0)
    assert det_change < 1e-5
    assert np.max(col_change) > 1e-2
    c.passed(f"det change {det_change:.1e}, largest period change {np.max(col_change):.2f}")


def test_structural(criterion):
    c = criterion(7, "structural properties")
    rng = np.random.default_rng(2024)
    spread = 0.0
    for n in range(2, 6):
        for k in range(1, n):
            r = []
            for _ in range(20):
                H = random_top(rng, n)
                r.append(build_A(k, H, canonical_q(n, k)).det() / build_E(H, k).det())
            r = np.array(r)
            spread = max(spread, np.max(np.abs(r - r[0])) / abs(r[0]))
    assert spread < 1e-8
    agree = 0
    for i in range(100):
        n = 2 + i % 3
        H = random_top(rng, n)
        for k in range(1, n):
            assert gradient_ideal_degenerate(H, k) == rank_oracle_degenerate(H, k)
        agree += 1
    for n in range(2, 5):
        for k in range(1, n):
            H = degenerate_top(rng, n, k)
            assert gradient_ideal_degenerate(H, k) and rank_oracle_degenerate(H, k)
            agree += 1
    hom = 0.0
    for n in range(1, 6):
        for _ in range(5):
            H = random_top(rng, n)
            b = complex(rng.uniform(0.5, 2), rng.uniform(-1, 1))
            hom = max(hom, rel(discriminant_sigma(H * b), b ** (2 * n) * discriminant_sigma(H)))
            for k in range(1, n):
                hom = max(hom, rel(build_E(H * b, k).det(), b ** (2 * k) * build_E(H, k).det()))
            hom = max(hom, up_to_sign(C_of_H(H * b).value, b ** (-n * n) * C_of_H(H).value))
    assert hom < 1e-12
    c.passed(f"ratio spread {spread:.1e}, oracle agreement {agree}/{agree}, "
             f"homogeneity {hom:.1e}")


def test_tolerance_halving(criterion):
    c = criterion(8, "halving tolerances moves periods less than their error estimates")
    cases = [(x ** 2 + y ** 2, [1.0]), (BivarPoly.fermat(2), [1.0]),
             (BivarPoly.fermat(3), [1.0])]
    cfg = VerifyConfig()
    cases += [(h, [1.0, cfg.sample_points(2)[3]]) for h in OFF_FERMAT.values()]
    worst = 0.0
    for h, ts in cases:
        n = h.degree - 1
        base = prepare_basis(h)
        fine = prepare_basis(h, steps=2 * cfg.steps)
        for t in ts:
            b0, b1 = basis_at(h, base, t), basis_at(h, fine, t)
            p0 = period_matrix(h, t, b0, cfg.quad_tol)
            p1 = period_matrix(h, t, b1, cfg.quad_tol / 2)
            diff = np.abs(p1.entries - p0.entries)
            assert np.all(diff <= p0.errors), (n, t)
            worst = max(worst, float(np.max(diff / p0.errors)))
    c.passed(f"largest change / error estimate {worst:.2f}")
