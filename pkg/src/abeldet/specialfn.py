"""Gamma and Beta functions and the closed-form quantities of the Fermat curve.

Everything here concerns ``H = x**(n+1) + y**(n+1)`` and the root of unity
``eps = exp(2*pi*i/(n+1))``.  Quantities with two independent evaluation
routes return a :class:`TwoRoutes` pair so callers can compare them.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .closedform import C_of_H, SignAmbiguous
from .errors import InvalidParameter, PoleError
from .polyring import HomogeneousTop, discriminant_sigma, monomial_basis

_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.6150291621406,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(z):
    """Gamma function by the Lanczos approximation (g = 7, 9 terms).

    Uses the reflection formula for ``Re z < 1/2``.  Relative accuracy is
    about 1e-15 for real arguments in (0, 20).  Real input gives a float.
    """
    real_in = isinstance(z, (int, float)) or (isinstance(z, np.floating))
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == round(z.real):
        raise PoleError(f"Gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        val = math.pi / (cmath.sin(math.pi * z) * gamma(1 - z))
    else:
        z -= 1
        a = _LANCZOS[0]
        t = z + _LANCZOS_G + 0.5
        for i in range(1, len(_LANCZOS)):
            a += _LANCZOS[i] / (z + i)
        val = math.sqrt(2 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * a
    val = complex(val)
    return val.real if real_in else val


def beta(a, b):
    """``B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)``."""
    return gamma(a) * gamma(b) / gamma(a + b)


class TwoRoutes(NamedTuple):
    direct: complex
    closed: complex

    @property
    def residual(self) -> float:
        """Relative difference between the two routes."""
        scale = max(abs(self.direct), abs(self.closed), 1e-300)
        return abs(self.direct - self.closed) / scale


@dataclass(frozen=True)
class RootOfUnity:
    n: int

    @cached_property
    def value(self) -> complex:
        return cmath.exp(2j * math.pi / (self.n + 1))

    @cached_property
    def powers(self) -> tuple[complex, ...]:
        return tuple(cmath.exp(2j * math.pi * k / (self.n + 1))
                     for k in range(self.n + 1))

    def __pow__(self, k: int) -> complex:
        return self.powers[k % (self.n + 1)]


def _check_n(n):
    if n < 1:
        raise InvalidParameter("n must be >= 1")


def fermat_Ij(n: int, j: int) -> float:
    """``int_0^1 x**l (1 - x**(n+1))**((m+1)/(n+1)) dx`` through the Beta function."""
    _check_n(n)
    e = monomial_basis(n)[j]
    return beta((e.l + 1) / (n + 1), (e.m + 1) / (n + 1) + 1) / (n + 1)


def fermat_IP(n: int) -> TwoRoutes:
    """Product of the ``n**2`` integrals: direct product vs closed form."""
    _check_n(n)
    direct = math.prod(fermat_Ij(n, j) for j in range(1, n * n + 1))
    ratio = Fraction(math.factorial(n + 1) ** n,
                     math.prod(math.factorial(m + n + 1) for m in range(1, n)))
    closed = (float(ratio) * (2 * math.pi) ** (n * (n + 1) / 2)
              * (n + 1) ** (-(n * n + 4 * n + 3) / 2))
    return TwoRoutes(direct, closed)


def sigma_value(n: int) -> TwoRoutes:
    """Squared Vandermonde product of the ``(n+1)``-th roots of unity."""
    _check_n(n)
    eps = RootOfUnity(n)
    direct = 1.0 + 0j
    for k in range(1, n + 2):
        for l in range(1, k):
            direct *= (eps ** k - eps ** l) ** 2
    closed = (-1) ** (n * (n - 1) // 2) * (n + 1) ** (n + 1)
    return TwoRoutes(direct, complex(closed))


def fermat_discriminant(n: int) -> TwoRoutes:
    """Discriminant of the Fermat top form vs ``(-1)**n * sigma``."""
    return TwoRoutes(discriminant_sigma(HomogeneousTop.fermat(n)),
                     (-1) ** n * sigma_value(n).closed)


@dataclass(frozen=True)
class GMatrix:
    """``g_{jr} = eps**(l(r)(l(j)+1) + m(r)(m(j)+1))``."""

    n: int
    entries: np.ndarray

    def Q(self, s: int) -> np.ndarray:
        """Leading ``ns x ns`` submatrix."""
        if not 1 <= s <= self.n:
            raise InvalidParameter(f"s={s} outside 1..{self.n}")
        return self.entries[: self.n * s, : self.n * s]

    def exponents(self) -> np.ndarray:
        b = monomial_basis(self.n)
        l, m = b.ls, b.ms
        return (np.outer(l + 1, l) + np.outer(m + 1, m)) % (self.n + 1)


def build_G(n: int) -> GMatrix:
    _check_n(n)
    b = monomial_basis(n)
    l, m = b.ls, b.ms
    expo = (np.outer(l + 1, l) + np.outer(m + 1, m)) % (n + 1)
    powers = np.array(RootOfUnity(n).powers)
    return GMatrix(n, powers[expo])


@dataclass(frozen=True)
class DetG:
    direct: complex
    closed: complex
    recurrence: tuple[float, ...]   # relative residual of the recurrence for s = 2..n

    @property
    def residual(self) -> float:
        return TwoRoutes(self.direct, self.closed).residual


def det_G(n: int) -> DetG:
    """``det G`` by LU and by ``(n+1)**(-2n) sigma**n``; also checks the block recurrence

    ``det Q_s = (prod_{l<s} (eps**s - eps**l))**n * det Q * det Q_{s-1}``.
    """
    _check_n(n)
    G = build_G(n)
    eps = RootOfUnity(n)
    direct = complex(np.linalg.det(G.entries))
    sig = (-1) ** (n * (n - 1) // 2) * (n + 1) ** (n + 1)
    closed = complex(Fraction(sig ** n, (n + 1) ** (2 * n)))
    detQ = complex(np.linalg.det(G.Q(1)))
    prev = detQ
    rec = []
    for s in range(2, n + 1):
        cur = complex(np.linalg.det(G.Q(s)))
        factor = math.prod(eps ** s - eps ** l for l in range(1, s)) ** n
        pred = factor * detQ * prev
        rec.append(abs(cur - pred) / max(abs(cur), abs(pred), 1e-300))
        prev = cur
    return DetG(direct, closed, tuple(rec))


def vandermonde_det(n: int) -> TwoRoutes:
    """``det Q`` by LU vs ``prod_{1<=l<k<=n} (eps**k - eps**l)``."""
    _check_n(n)
    eps = RootOfUnity(n)
    direct = complex(np.linalg.det(build_G(n).Q(1)))
    closed = math.prod((eps ** k - eps ** l for k in range(1, n + 1)
                        for l in range(1, k)), start=1 + 0j)
    return TwoRoutes(direct, closed)


def roots_of_unity_product(n: int) -> complex:
    """``prod_{l=1}^{n} (1 - eps**l)``, which equals ``n + 1``."""
    _check_n(n)
    eps = RootOfUnity(n)
    return math.prod((1 - eps ** l for l in range(1, n + 1)), start=1 + 0j)


def gauss_legendre_check(n: int, z) -> float:
    """Relative residual of the Gauss multiplication formula with ``n + 1`` factors."""
    _check_n(n)
    lhs = math.prod((gamma(complex(z) + l / (n + 1)) for l in range(n + 1)), start=1 + 0j)
    rhs = ((2 * math.pi) ** (n / 2) * (n + 1) ** (0.5 - (n + 1) * complex(z))
           * gamma((n + 1) * complex(z)))
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def gamma_product_unit(n: int) -> TwoRoutes:
    """``prod_{l<n} Gamma((l+1)/(n+1))`` vs ``(2pi)**(n/2) (n+1)**(-1/2)``."""
    direct = math.prod(gamma((l + 1) / (n + 1)) for l in range(n))
    return TwoRoutes(direct, (2 * math.pi) ** (n / 2) * (n + 1) ** -0.5)


def gamma_product_shifted(n: int) -> TwoRoutes:
    """``prod_{l<n} Gamma((l+1)/(n+1) + 1)`` vs its closed form."""
    direct = math.prod(gamma((l + 1) / (n + 1) + 1) for l in range(n))
    closed = ((2 * math.pi) ** (n / 2) * (n + 1) ** (0.5 - (n + 2))
              * math.factorial(n + 1))
    return TwoRoutes(direct, closed)


def gamma_double_product(n: int) -> TwoRoutes:
    """``prod_{l,m<n} Gamma((l+m+2)/(n+1) + 1)`` vs its closed form."""
    direct = math.prod(gamma((l + m + 2) / (n + 1) + 1)
                       for l in range(n) for m in range(n))
    closed = ((2 * math.pi) ** ((n * n - n) / 2)
              * (n + 1) ** (-3 * (n * n - 1) / 2)
              * math.prod(math.factorial(m + n + 1) for m in range(1, n)))
    return TwoRoutes(direct, closed)


def fermat_C(n: int) -> SignAmbiguous:
    """``sigma**n * IP``, the Fermat value of the determinant constant."""
    _check_n(n)
    sig = sigma_value(n).closed
    return SignAmbiguous(sig ** n * fermat_IP(n).closed, "sigma**n * IP")


class IdentityCheck(NamedTuple):
    name: str
    n: int
    residual: float


def identity_suite(n: int) -> list[IdentityCheck]:
    """Run every two-route identity at a given ``n``."""
    _check_n(n)
    rows = [
        IdentityCheck("sigma-closed-form", n, sigma_value(n).residual),
        IdentityCheck("fermat-discriminant", n, fermat_discriminant(n).residual),
        IdentityCheck("integral-product-closed-form", n, fermat_IP(n).residual),
        IdentityCheck("detG-closed-form", n, det_G(n).residual),
        IdentityCheck("detQ-recurrence", n, max(det_G(n).recurrence, default=0.0)),
        IdentityCheck("vandermonde-detQ", n, vandermonde_det(n).residual),
        IdentityCheck("roots-of-unity-product", n,
                      abs(roots_of_unity_product(n) - (n + 1)) / (n + 1)),
        IdentityCheck("gauss-multiplication-z=1/(n+1)", n,
                      gauss_legendre_check(n, 1 / (n + 1))),
        IdentityCheck("gauss-multiplication-z=(n+2)/(n+1)", n,
                      gauss_legendre_check(n, (n + 2) / (n + 1))),
        IdentityCheck("gauss-multiplication-z=0.3+0.2i", n,
                      gauss_legendre_check(n, 0.3 + 0.2j)),
        IdentityCheck("gamma-product-unit", n, gamma_product_unit(n).residual),
        IdentityCheck("gamma-product-shifted", n, gamma_product_shifted(n).residual),
        IdentityCheck("gamma-double-product", n, gamma_double_product(n).residual),
    ]
    fc, ch = fermat_C(n), C_of_H(HomogeneousTop.fermat(n))
    sign = fc.sign_against(ch, rtol=1.0)
    rows.append(IdentityCheck("fermat-constant-vs-closed-form", n,
                              abs(fc.value - sign * ch.value) / abs(fc.value)))
    return rows
