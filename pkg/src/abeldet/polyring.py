"""Complex polynomial arithmetic in one and two variables.

Bivariate polynomials are stored as sparse maps ``(i, j) -> coefficient`` of
the monomial ``x**i * y**j``.  Univariate polynomials are plain 1-d arrays in
ascending order, ``c[k]`` being the coefficient of ``x**k``.

Resultant sign convention: the Sylvester matrix lists the rows of ``p``
first, each row holding coefficients from the highest power of ``y`` down,
so ``resultant_y(p, q) == lc(p)**deg(q) * prod(q(x, roots of p))``.  For
``p = y - x`` and ``q = y + x`` this gives ``2*x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .errors import (DegenerateInput, InvalidParameter, NoRoots,
                     SolverFailure, UnsupportedChart)

PRUNE_RTOL = 1e-14
ROOT_TOL = 1e-12
GENERIC_RTOL = 1e-10
_EPS = np.finfo(float).eps


class BivarPoly:
    """Polynomial in ``x`` and ``y`` with complex coefficients.

    Coefficients smaller than ``PRUNE_RTOL`` times the largest one are
    dropped on construction, so the stored map never holds zeros.  Instances
    are immutable.

    Parameters
    ----------
    coeffs : mapping
        ``{(i, j): c}`` for the term ``c * x**i * y**j``.
    """

    __slots__ = ("_coeffs", "_degree")

    def __init__(self, coeffs: Mapping[tuple[int, int], complex] | None = None):
        raw: dict[tuple[int, int], complex] = {}
        for (i, j), c in (coeffs or {}).items():
            i, j = int(i), int(j)
            if i < 0 or j < 0:
                raise InvalidParameter(f"negative exponent ({i}, {j})")
            raw[(i, j)] = raw.get((i, j), 0) + complex(c)
        scale = max((abs(c) for c in raw.values()), default=0.0)
        kept = {k: c for k, c in raw.items()
                if c != 0 and abs(c) > PRUNE_RTOL * scale}
        self._coeffs = MappingProxyType(dict(sorted(kept.items())))
        self._degree = max((i + j for i, j in kept), default=None)

    def __reduce__(self):
        # the read-only view itself cannot be pickled
        return (BivarPoly, (dict(self._coeffs),))

    # construction helpers -------------------------------------------------
    @classmethod
    def constant(cls, c: complex) -> "BivarPoly":
        return cls({(0, 0): c})

    @classmethod
    def x(cls) -> "BivarPoly":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "BivarPoly":
        return cls({(0, 1): 1})

    @classmethod
    def from_array(cls, a) -> "BivarPoly":
        a = np.asarray(a, dtype=complex)
        return cls({(i, j): a[i, j] for i, j in zip(*np.nonzero(a))})

    @classmethod
    def fermat(cls, n: int) -> "BivarPoly":
        """``x**(n+1) + y**(n+1)``."""
        return cls({(n + 1, 0): 1, (0, n + 1): 1})

    # basic properties -----------------------------------------------------
    @property
    def coeffs(self) -> Mapping[tuple[int, int], complex]:
        return self._coeffs

    @property
    def degree(self) -> int | None:
        """Total degree, ``None`` for the zero polynomial."""
        return self._degree

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def x_degree(self) -> int:
        return max((i for i, _ in self._coeffs), default=0)

    @property
    def y_degree(self) -> int:
        return max((j for _, j in self._coeffs), default=0)

    def scale(self) -> float:
        return max((abs(c) for c in self._coeffs.values()), default=0.0)

    def to_array(self, shape: tuple[int, int] | None = None) -> np.ndarray:
        """Dense coefficient array ``a[i, j]`` of ``x**i * y**j``."""
        if shape is None:
            shape = (self.x_degree + 1, self.y_degree + 1)
        a = np.zeros(shape, dtype=complex)
        for (i, j), c in self._coeffs.items():
            a[i, j] = c
        return a

    def __call__(self, x, y):
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        out = np.zeros(np.broadcast(x, y).shape, dtype=complex)
        for (i, j), c in self._coeffs.items():
            out = out + c * x**i * y**j
        return out[()] if out.ndim == 0 else out

    # arithmetic -----------------------------------------------------------
    @staticmethod
    def _lift(other) -> "BivarPoly":
        if isinstance(other, BivarPoly):
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return BivarPoly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, 0) + c
        return BivarPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly({k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict[tuple[int, int], complex] = {}
        for (i1, j1), c1 in self._coeffs.items():
            for (i2, j2), c2 in other._coeffs.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return BivarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise InvalidParameter("negative power of a polynomial")
        result = BivarPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return dict(self._coeffs) == dict(other._coeffs)

    __hash__ = None

    def allclose(self, other: "BivarPoly", rtol: float = 1e-12) -> bool:
        keys = set(self._coeffs) | set(other._coeffs)
        scale = max(self.scale(), other.scale(), 1e-300)
        return all(abs(self._coeffs.get(k, 0) - other._coeffs.get(k, 0))
                   <= rtol * scale for k in keys)

    # calculus and structure ---------------------------------------------
    def dx(self) -> "BivarPoly":
        return BivarPoly({(i - 1, j): i * c
                          for (i, j), c in self._coeffs.items() if i > 0})

    def dy(self) -> "BivarPoly":
        return BivarPoly({(i, j - 1): j * c
                          for (i, j), c in self._coeffs.items() if j > 0})

    def homogeneous_part(self, d: int) -> "BivarPoly":
        return BivarPoly({k: c for k, c in self._coeffs.items()
                          if k[0] + k[1] == d})

    def is_homogeneous(self, d: int | None = None) -> bool:
        if self.is_zero:
            return True
        degs = {i + j for i, j in self._coeffs}
        return len(degs) == 1 and (d is None or degs == {d})

    def top(self) -> "HomogeneousTop":
        """Top-degree homogeneous part, as a :class:`HomogeneousTop`."""
        if self._degree is None or self._degree < 1:
            raise InvalidParameter("top part needs degree >= 1")
        return HomogeneousTop.from_poly(self.homogeneous_part(self._degree))

    def linear_substitute(self, a, b, c, d) -> "BivarPoly":
        """Return ``p(a*x + b*y, c*x + d*y)``."""
        X = BivarPoly({(1, 0): a, (0, 1): b})
        Y = BivarPoly({(1, 0): c, (0, 1): d})
        out = BivarPoly()
        xp = [BivarPoly.constant(1)]
        yp = [BivarPoly.constant(1)]
        for _ in range(self.x_degree):
            xp.append(xp[-1] * X)
        for _ in range(self.y_degree):
            yp.append(yp[-1] * Y)
        for (i, j), coef in self._coeffs.items():
            out = out + coef * xp[i] * yp[j]
        return out

    def __repr__(self):
        return f"BivarPoly({dict(self._coeffs)!r})"


@dataclass(frozen=True)
class HomogeneousTop:
    """Degree ``n+1`` form ``sum_s h_s x**(n+1-s) y**s``."""

    n: int
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameter("n must be >= 1")
        object.__setattr__(self, "coeffs",
                           tuple(complex(c) for c in self.coeffs))
        if len(self.coeffs) != self.n + 2:
            raise InvalidParameter(
                f"expected {self.n + 2} coefficients, got {len(self.coeffs)}")
        if not any(self.coeffs):
            raise InvalidParameter("top part must not vanish")

    @classmethod
    def from_poly(cls, p: BivarPoly) -> "HomogeneousTop":
        d = p.degree
        if d is None or not p.is_homogeneous(d) or d < 2:
            raise InvalidParameter("need a homogeneous polynomial of degree >= 2")
        return cls(d - 1, tuple(p.coeffs.get((d - s, s), 0) for s in range(d + 1)))

    @classmethod
    def fermat(cls, n: int) -> "HomogeneousTop":
        return cls(n, (1,) + (0,) * n + (1,))

    def as_poly(self) -> BivarPoly:
        d = self.n + 1
        return BivarPoly({(d - s, s): c for s, c in enumerate(self.coeffs)})

    def scale(self) -> float:
        return max(abs(c) for c in self.coeffs)

    def __getitem__(self, s: int) -> complex:
        return self.coeffs[s]

    def __mul__(self, b):
        return HomogeneousTop(self.n, tuple(b * c for c in self.coeffs))

    __rmul__ = __mul__

    def __add__(self, other: "HomogeneousTop"):
        if other.n != self.n:
            raise InvalidParameter("degree mismatch")
        return HomogeneousTop(self.n, tuple(a + b for a, b in
                                            zip(self.coeffs, other.coeffs)))

    def dehomogenized(self) -> np.ndarray:
        """Ascending coefficients of ``H(x, 1)``."""
        return np.array(self.coeffs[::-1], dtype=complex)


# ---------------------------------------------------------------------------
# canonical monomials


@dataclass(frozen=True)
class Monomial:
    j: int
    l: int
    m: int

    @property
    def d(self) -> int:
        return self.l + self.m


@dataclass(frozen=True)
class MonomialBasis:
    """The ``n**2`` monomials ``x**l y**m`` (``0 <= l, m < n``) in lexicographic order."""

    n: int
    entries: tuple[Monomial, ...] = field(repr=False)

    def index(self, l: int, m: int) -> int:
        if not (0 <= l < self.n and 0 <= m < self.n):
            raise InvalidParameter(f"({l}, {m}) outside 0..{self.n - 1}")
        return l * self.n + m + 1

    def __getitem__(self, j: int) -> Monomial:
        """Entry with 1-based index ``j``."""
        if not 1 <= j <= len(self.entries):
            raise InvalidParameter(f"j={j} outside 1..{len(self.entries)}")
        return self.entries[j - 1]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def ls(self) -> np.ndarray:
        return np.array([e.l for e in self.entries])

    @property
    def ms(self) -> np.ndarray:
        return np.array([e.m for e in self.entries])


def monomial_basis(n: int) -> MonomialBasis:
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    entries = tuple(Monomial(l * n + m + 1, l, m)
                    for l in range(n) for m in range(n))
    return MonomialBasis(n, entries)


def gradient(p: BivarPoly) -> tuple[BivarPoly, BivarPoly]:
    return p.dx(), p.dy()


# ---------------------------------------------------------------------------
# univariate roots


@dataclass(frozen=True)
class RootSet:
    """Roots of a univariate polynomial.

    Attributes
    ----------
    roots : ndarray
        All roots, repeated by multiplicity.  Members of a cluster are
        replaced by the cluster centroid.
    errors : ndarray
        Radius of a disc around each root guaranteed (up to rounding) to
        contain a true root.
    multiplicity : ndarray
        Size of the cluster each root belongs to.
    clusters : tuple of tuple of int
        Index groups of roots treated as one multiple root.
    """

    roots: np.ndarray
    errors: np.ndarray
    multiplicity: np.ndarray
    clusters: tuple[tuple[int, ...], ...]

    def distinct(self) -> tuple[np.ndarray, np.ndarray]:
        reps = [c[0] for c in self.clusters]
        return self.roots[reps], self.multiplicity[reps]

    @property
    def has_clusters(self) -> bool:
        return any(len(c) > 1 for c in self.clusters)


def _horner(c: np.ndarray, z: np.ndarray):
    """Value, derivative and absolute-value bound of an ascending polynomial."""
    p = np.zeros_like(z) + c[-1]
    dp = np.zeros_like(z)
    az = np.abs(z)
    bound = np.zeros(z.shape) + abs(c[-1])
    for ck in c[-2::-1]:
        dp = dp * z + p
        p = p * z + ck
        bound = bound * az + abs(ck)
    return p, dp, bound


def _trim_high(c: np.ndarray) -> np.ndarray:
    k = len(c)
    while k > 0 and c[k - 1] == 0:
        k -= 1
    return c[:k]


def _aberth(c: np.ndarray, rng: np.random.Generator, max_iter: int):
    d = len(c) - 1
    center = -c[d - 1] / (d * c[d])
    # Fujiwara bound: a circle enclosing every root, so starts never collapse
    k = np.arange(1, d + 1)
    ratios = np.abs(c[d - k] / c[d]) ** (1.0 / k)
    ratios[-1] *= 0.5 ** (1.0 / d)
    radius = 2 * ratios.max() + abs(center)
    if not np.isfinite(radius) or radius == 0:
        radius = 1.0
    phase = rng.uniform(0, 2 * np.pi)
    z = center + radius * np.exp(1j * (2 * np.pi * np.arange(d) / d + phase))
    active = np.ones(d, dtype=bool)
    for _ in range(max_iter):
        p, dp, bound = _horner(c, z)
        done = np.abs(p) <= 8 * _EPS * bound
        active &= ~done
        if not active.any():
            return z, True
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            w = ratio / (1 - ratio * s)
        bad = ~np.isfinite(w)
        if bad.any():
            w[bad] = 1e-3 * (1 + np.abs(z[bad])) * np.exp(1j * rng.uniform(0, 2 * np.pi, bad.sum()))
        small = np.abs(w) <= 2 * _EPS * np.abs(z)
        active &= ~small
        z = np.where(active, z - w, z)
    return z, not active.any()


def univariate_roots(c: Sequence[complex], tol: float = ROOT_TOL, *,
                     seed: int = 0, max_iter: int = 500) -> RootSet:
    """All roots of an ascending-order coefficient sequence.

    Uses Ehrlich-Aberth simultaneous iteration from a randomly rotated circle,
    then Newton polish for simple roots.  Roots whose inclusion discs overlap,
    or that lie within ``1e-8`` of each other (relative), form clusters and are
    replaced by their centroid.

    Raises
    ------
    NoRoots
        For a constant polynomial.
    SolverFailure
        If the iteration does not converge, or a simple root cannot be
        polished to relative residual ``tol``.
    """
    c = _trim_high(np.asarray(c, dtype=complex).ravel())
    if len(c) <= 1:
        raise NoRoots("polynomial of degree 0 has no roots")
    nz = 0
    while c[nz] == 0:
        nz += 1
    red = c[nz:]
    d = len(red) - 1
    rng = np.random.default_rng(seed)
    if d == 0:
        z = np.zeros(0, dtype=complex)
    elif d == 1:
        z = np.array([-red[0] / red[1]])
    else:
        z, ok = _aberth(red, rng, max_iter)
        if not ok:
            z, ok = _aberth(red, rng, 4 * max_iter)
        if not ok:
            p, _, bound = _horner(red, z)
            raise SolverFailure(
                f"Aberth iteration did not converge in {5 * max_iter} steps; "
                f"max relative residual {np.max(np.abs(p) / bound):.3e}")
    z = np.concatenate([z, np.zeros(nz, dtype=complex)])
    deg = len(z)

    p, dp, bound = _horner(c, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        radius = np.where(dp != 0, deg * np.abs(p) / np.abs(dp), np.inf)
    radius[np.abs(p) == 0] = 0.0

    # cluster by union-find over overlapping discs
    scale = np.maximum(1.0, np.abs(z))
    parent = list(range(deg))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in range(deg):
        for b in range(a + 1, deg):
            gap = abs(z[a] - z[b])
            if gap <= 1e-8 * max(scale[a], scale[b]) or gap <= radius[a] + radius[b]:
                parent[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for i in range(deg):
        groups.setdefault(find(i), []).append(i)
    clusters = tuple(tuple(g) for g in sorted(groups.values()))

    roots = z.copy()
    errors = np.zeros(deg)
    mult = np.ones(deg, dtype=int)
    for g in clusters:
        if len(g) == 1:
            i = g[0]
            zi = z[i]
            for _ in range(6):
                pi, dpi, bi = _horner(c, np.array([zi]))
                if pi[0] == 0 or dpi[0] == 0:
                    break
                step = pi[0] / dpi[0]
                zi = zi - step
                if abs(step) <= 2 * _EPS * abs(zi):
                    break
            pi, dpi, bi = _horner(c, np.array([zi]))
            if abs(pi[0]) > tol * bi[0]:
                raise SolverFailure(
                    f"root {zi} has relative residual {abs(pi[0]) / bi[0]:.3e} > {tol}")
            roots[i] = zi
            errors[i] = deg * abs(pi[0]) / abs(dpi[0]) if dpi[0] != 0 else 0.0
        else:
            idx = list(g)
            cen = z[idx].mean()
            spread = np.max(np.abs(z[idx] - cen))
            roots[idx] = cen
            errors[idx] = spread + np.max(np.where(np.isfinite(radius[idx]), radius[idx], 0.0))
            mult[idx] = len(idx)
    return RootSet(roots, errors, mult, clusters)


# ---------------------------------------------------------------------------
# resultants and discriminants


def sylvester_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Sylvester matrix of two ascending coefficient vectors (rows of ``a`` first)."""
    da, db = len(a) - 1, len(b) - 1
    size = da + db
    S = np.zeros((size, size), dtype=complex)
    for r in range(db):
        S[r, r:r + da + 1] = a[::-1]
    for r in range(da):
        S[db + r, r:r + db + 1] = b[::-1]
    return S


def univariate_resultant(a: Sequence[complex], b: Sequence[complex]) -> complex:
    a = _trim_high(np.asarray(a, dtype=complex))
    b = _trim_high(np.asarray(b, dtype=complex))
    if len(a) == 0 or len(b) == 0:
        raise InvalidParameter("resultant of the zero polynomial")
    if len(a) == 1 and len(b) == 1:
        return 1.0 + 0j
    return complex(np.linalg.det(sylvester_matrix(a, b)))


def resultant_y(p: BivarPoly, q: BivarPoly, *, radius: float = 1.0) -> np.ndarray:
    """Resultant of ``p`` and ``q`` with respect to ``y``, as ascending coefficients in ``x``.

    Evaluated as Sylvester determinants on ``N`` points of the circle
    ``|x| = radius`` and interpolated by FFT; coefficients below ``1e-13``
    of the largest are set to zero.
    """
    if p.is_zero or q.is_zero:
        raise InvalidParameter("resultant of the zero polynomial")
    dp, dq = p.y_degree, q.y_degree
    if dp == 0 and dq == 0:
        return np.array([1.0 + 0j])
    bound = dq * p.x_degree + dp * q.x_degree
    N = bound + 1
    xs = radius * np.exp(2j * np.pi * np.arange(N) / N)
    P, Q = p.to_array(), q.to_array()
    xpow_p = xs[:, None] ** np.arange(P.shape[0])
    xpow_q = xs[:, None] ** np.arange(Q.shape[0])
    pc = xpow_p @ P          # (N, dp+1) ascending in y
    qc = xpow_q @ Q
    size = dp + dq
    S = np.zeros((N, size, size), dtype=complex)
    for r in range(dq):
        S[:, r, r:r + dp + 1] = pc[:, ::-1]
    for r in range(dp):
        S[:, dq + r, r:r + dq + 1] = qc[:, ::-1]
    vals = np.linalg.det(S)
    coef = np.fft.fft(vals) / N / radius ** np.arange(N)
    big = np.max(np.abs(coef))
    coef[np.abs(coef) <= 1e-13 * big] = 0
    coef = _trim_high(coef)
    return coef if len(coef) else np.zeros(1, dtype=complex)


def is_generic(H: HomogeneousTop, rtol: float = GENERIC_RTOL) -> bool:
    """True when ``H`` has ``n+1`` distinct zero lines (numerically)."""
    if H[0] == 0:
        # a zero line x = 0 is then present; still generic iff H(x,1) stays
        # square-free of degree n and h_1 != 0
        f = H.dehomogenized()
        if H[1] == 0:
            return False
        sigma = _disc(f[:-1])
    else:
        sigma = discriminant_sigma(H)
    return abs(sigma) > rtol * H.scale() ** (2 * H.n)


def _disc(f: np.ndarray) -> complex:
    f = _trim_high(f)
    d = len(f) - 1
    if d < 1:
        return 1.0 + 0j
    df = f[1:] * np.arange(1, d + 1)
    res = univariate_resultant(f, df)
    return (-1) ** (d * (d - 1) // 2) * res / f[-1]


def discriminant_sigma(H: HomogeneousTop) -> complex:
    """Discriminant of the top form, ``h_0**(2n) prod_{j<i} (b_i - b_j)**2``.

    Computed as the discriminant of the univariate polynomial ``H(x, 1)``
    through the Sylvester resultant of it and its derivative.

    Raises
    ------
    UnsupportedChart
        If ``h_0 == 0``.
    """
    if H[0] == 0:
        raise UnsupportedChart(
            "h_0 = 0: the zero line x = 0 is not covered by this formula; "
            "apply a linear change of variables first")
    return _disc(H.dehomogenized())


# ---------------------------------------------------------------------------
# critical points


@dataclass(frozen=True)
class CriticalData:
    points: np.ndarray          # (n**2, 2) complex
    values: np.ndarray          # (n**2,)
    residuals: np.ndarray       # gradient norms
    multiplicity: np.ndarray    # local multiplicity of each listed point


def _newton2d(h: BivarPoly, hx, hy, pt, iters=30):
    hxx, hxy, hyy = hx.dx(), hx.dy(), hy.dy()
    x, y = pt
    for _ in range(iters):
        g = np.array([hx(x, y), hy(x, y)])
        J = np.array([[hxx(x, y), hxy(x, y)], [hxy(x, y), hyy(x, y)]])
        try:
            dx, dy = np.linalg.solve(J, g)
        except np.linalg.LinAlgError:
            break
        x, y = x - dx, y - dy
        if abs(dx) + abs(dy) <= 4 * _EPS * (abs(x) + abs(y) + 1):
            break
    return complex(x), complex(y)


def _grad_scale(h: BivarPoly, x, y) -> float:
    r = max(1.0, abs(x), abs(y))
    return sum(abs(c) * (i + j) * r ** max(i + j - 1, 0)
               for (i, j), c in h.coeffs.items()) or 1.0


def critical_data(h: BivarPoly, tol: float = 1e-10, *, seed: int = 0) -> CriticalData:
    """Critical points and values of ``h``.

    A random shear ``x = X - c*Y`` makes distinct critical points project to
    distinct ``X``; the ``X`` coordinates are the roots of the ``Y``-resultant
    of the two partial derivatives.  Each point is back-substituted and, when
    simple, polished by two-dimensional Newton iteration on the gradient.
    Multiple critical points are listed once per unit of multiplicity.

    Raises
    ------
    DegenerateInput
        If fewer than ``n**2`` critical points are found or a residual
        exceeds ``tol`` (relative to the gradient's size).
    """
    d = h.degree
    if d is None or d < 2:
        raise InvalidParameter("need degree >= 2")
    n = d - 1
    rng = np.random.default_rng(seed)
    c = complex(*rng.uniform(-0.6, 0.6, 2))
    g = h.linear_substitute(1, -c, 0, 1)
    gX, gY = g.dx(), g.dy()
    R = resultant_y(gX, gY)
    if len(R) - 1 != n * n:
        raise DegenerateInput(
            f"expected {n * n} critical points, elimination gives {len(R) - 1}")
    rs = univariate_roots(R, tol=1e-8, seed=seed)
    hx, hy = h.dx(), h.dy()
    pts, mults = [], []
    for X0, mu in zip(*rs.distinct()):
        ycoef = gY.to_array()
        cy = (X0 ** np.arange(ycoef.shape[0])) @ ycoef
        if np.all(cy == 0):
            cy = (X0 ** np.arange(gX.to_array().shape[0])) @ gX.to_array()
            other = gY
        else:
            other = gX
        Ys = univariate_roots(cy, tol=1e-6, seed=seed).roots
        Y0 = min(Ys, key=lambda Y: abs(other(X0, Y)))
        x0, y0 = X0 - c * Y0, Y0
        if mu == 1:
            x0, y0 = _newton2d(h, hx, hy, (x0, y0))
        pts.extend([(x0, y0)] * int(mu))
        mults.extend([int(mu)] * int(mu))
    pts = np.array(pts, dtype=complex).reshape(-1, 2)
    if len(pts) != n * n:
        raise DegenerateInput(f"found {len(pts)} critical points, expected {n * n}")
    res = np.array([math.hypot(abs(hx(x, y)), abs(hy(x, y))) for x, y in pts])
    rel = np.array([r / _grad_scale(h, x, y) for r, (x, y) in zip(res, pts)])
    if np.any(rel > tol):
        raise DegenerateInput(f"critical point residual {rel.max():.3e} exceeds {tol}")
    vals = np.array([h(x, y) for x, y in pts], dtype=complex)
    return CriticalData(pts, vals, res, np.array(mults))
