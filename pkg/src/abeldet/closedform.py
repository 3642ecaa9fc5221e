"""Closed-form side of the determinant formula.

``C(H) = c_n * Sigma(H)**(1/2 - n) * prod_{k=1}^{n-1} det E_{n,k}(H)``,
defined up to sign.  ``Sigma**(1/2)`` is taken on the principal branch.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InvalidParameter, NongenericInput, RangeError
from .polyring import (BivarPoly, HomogeneousTop, discriminant_sigma,
                       is_generic, monomial_basis)

DEGENERACY_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class SignAmbiguous:
    """A value known only up to multiplication by -1."""

    value: complex
    note: str = ""

    def sign_against(self, other, rtol: float = 1e-12) -> int | None:
        """Return +1 or -1 if ``other`` matches ``+value`` or ``-value``, else None."""
        other = complex(other.value if isinstance(other, SignAmbiguous) else other)
        scale = max(abs(self.value), abs(other), 1e-300)
        for s in (1, -1):
            if abs(s * self.value - other) <= rtol * scale:
                return s
        return None

    def __eq__(self, other):
        if not isinstance(other, (SignAmbiguous, int, float, complex)):
            return NotImplemented
        return self.sign_against(other) is not None

    __hash__ = None

    def __abs__(self):
        return abs(self.value)

    def both(self) -> tuple[complex, complex]:
        return self.value, -self.value


@dataclass(frozen=True)
class BlockMatrixE:
    n: int
    k: int
    entries: np.ndarray

    def det(self) -> complex:
        return complex(np.linalg.det(self.entries))


@dataclass(frozen=True)
class DefOneMatrix:
    n: int
    k: int
    q: tuple[BivarPoly, ...]
    entries: np.ndarray

    def det(self) -> complex:
        return complex(np.linalg.det(self.entries))


def _check_k(n: int, k: int):
    if n < 2:
        raise InvalidParameter("the block matrices need n >= 2")
    if not 1 <= k <= n - 1:
        raise InvalidParameter(f"k={k} outside 1..{n - 1}")


def build_E(H: HomogeneousTop, k: int) -> BlockMatrixE:
    """The ``2k x 2k`` matrix ``[[A, B], [C, D]]`` of triangular blocks linear in ``H``."""
    n = H.n
    _check_k(n, k)
    h = H.coeffs
    A = np.zeros((k, k), dtype=complex)
    B = np.zeros((k, k), dtype=complex)
    C = np.zeros((k, k), dtype=complex)
    D = np.zeros((k, k), dtype=complex)
    for i in range(k):
        for c in range(k):
            if c >= i:
                s = c - i
                A[i, c] = (n + 1 - s) * h[s]
                C[i, c] = (s + 1) * h[s + 1]
            else:
                s = i - c
                B[i, c] = (s + 1) * h[n - s]
                D[i, c] = (n + 1 - s) * h[n + 1 - s]
        B[i, i] = h[n]
        D[i, i] = (n + 1) * h[n + 1]
    return BlockMatrixE(n, k, np.block([[A, B], [C, D]]))


def _row(p: BivarPoly, d: int) -> np.ndarray:
    """Coefficients of a degree-``d`` form at ``x**(d-e) y**e``, ``e = 0..d``."""
    return np.array([p.coeffs.get((d - e, e), 0) for e in range(d + 1)], dtype=complex)


def build_A(k: int, H: HomogeneousTop, q: Sequence[BivarPoly]) -> DefOneMatrix:
    """The ``(n+k) x (n+k)`` matrix whose rows are coefficient vectors of

    ``d(y q_j)/dy`` for ``j <= n-k``, then ``x**(n-j) y**(j-n+k-1) dH/dx`` and
    ``x**(k-j+n) y**(j-n-1) dH/dy``.  Column ``s`` holds the monomial
    ``x**(n+k-s) y**(s-1)``.
    """
    n = H.n
    _check_k(n, k)
    q = tuple(q)
    d = n + k - 1
    if len(q) != n - k:
        raise InvalidParameter(f"expected {n - k} polynomials q, got {len(q)}")
    for p in q:
        if p.is_zero or not p.is_homogeneous(d):
            raise InvalidParameter(f"each q_j must be homogeneous of degree {d}")
    Hp = H.as_poly()
    Hx, Hy = Hp.dx(), Hp.dy()
    x, y = BivarPoly.x(), BivarPoly.y()
    rows = [_row((y * p).dy(), d) for p in q]
    for j in range(n - k + 1, n + 1):
        rows.append(_row(x ** (n - j) * y ** (j - n + k - 1) * Hx, d))
    for j in range(n + 1, n + k + 1):
        rows.append(_row(x ** (k - j + n) * y ** (j - n - 1) * Hy, d))
    return DefOneMatrix(n, k, q, np.array(rows))


def canonical_q(n: int, k: int) -> tuple[BivarPoly, ...]:
    """The canonical monomials ``e_j`` of degree ``n+k-1``, in index order."""
    return tuple(BivarPoly({(e.l, e.m): 1}) for e in monomial_basis(n)
                 if e.d == n + k - 1)


def c_constant(n: int) -> complex:
    """The universal constant ``c_n``.

    The sign factor ``(-1)**(n(3n-1)/4)`` is read as ``exp(i*pi*n(3n-1)/4)``,
    always one of 1, i, -1, -i.
    """
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    ratio = Fraction(math.factorial(n + 1) ** n,
                     math.prod(math.factorial(m + n + 1) for m in range(1, n)))
    try:
        mag = (float(ratio) * (2 * math.pi) ** (n * (n + 1) / 2)
               * (n + 1) ** ((n * n + n - 4) / 2))
    except OverflowError as exc:
        raise RangeError(f"c_n overflows double precision at n={n}") from exc
    if not math.isfinite(mag) or mag == 0:
        raise RangeError(f"c_n is out of double range at n={n}")
    # n(3n-1) is even, so the phase is a power of i
    phase = (1, 1j, -1, -1j)[(n * (3 * n - 1) // 2) % 4]
    return complex(phase * mag)


def C_of_H(H: HomogeneousTop) -> SignAmbiguous:
    """Closed-form constant of the determinant polynomial, up to sign.

    Raises
    ------
    NongenericInput
        If the discriminant vanishes (numerically).
    """
    sigma = discriminant_sigma(H)
    if not is_generic(H):
        raise NongenericInput(f"discriminant {sigma} vanishes: H has a repeated zero line")
    n = H.n
    power = cmath.sqrt(sigma) / sigma ** n
    prod = 1.0 + 0j
    for k in range(1, n):
        prod *= build_E(H, k).det()
    return SignAmbiguous(c_constant(n) * power * prod,
                         "principal branch of sqrt(Sigma)")


def gradient_ideal_degenerate(H: HomogeneousTop, k: int,
                              rtol: float = DEGENERACY_RTOL) -> bool:
    """True iff ``det E_{n,k}(H)`` vanishes to within ``rtol * scale**(2k)``.

    Equivalently, some nonzero combination of the canonical monomials of
    degree ``n+k-1`` lies in the gradient ideal of ``H``.
    """
    E = build_E(H, k)
    scale = np.max(np.abs(E.entries))
    return bool(abs(E.det()) < rtol * scale ** (2 * k))
