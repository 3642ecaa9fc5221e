"""The level curve ``{h = t}`` as a branched cover of the x-line.

:class:`LevelCurve` holds ``F = h - t`` as a dense coefficient array and
offers vectorized evaluation, batched fibers and a sheet-safe root
selection.  Paths in the x-plane are :class:`XPath` objects made of
:class:`Segment` and :class:`Arc` pieces, each parameterized by
``u in [0, 1]``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import InvalidParameter, ProximityError, TrackingFailure
from .polyring import BivarPoly, resultant_y, univariate_roots

JOIN_TOL = 1e-12
GUARD_RATIO = 0.3
MIN_STEP = 1e-10


@dataclass(frozen=True)
class Segment:
    z0: complex
    z1: complex

    @property
    def start(self) -> complex:
        return self.z0

    @property
    def end(self) -> complex:
        return self.z1

    @property
    def length(self) -> float:
        return abs(self.z1 - self.z0)

    def point(self, u):
        return self.z0 + (self.z1 - self.z0) * np.asarray(u)

    def deriv(self, u):
        return np.full(np.shape(u), self.z1 - self.z0, dtype=complex)

    def reversed(self) -> "Segment":
        return Segment(self.z1, self.z0)

    def scaled(self, a: complex) -> "Segment":
        return Segment(a * self.z0, a * self.z1)

    def nodes(self) -> list[complex]:
        return [self.z0, self.z1]

    def to_dict(self) -> dict:
        return {"kind": "segment", "z0": _c2l(self.z0), "z1": _c2l(self.z1)}


@dataclass(frozen=True)
class Arc:
    """``center + radius * exp(i (start + u * sweep))``; positive sweep is counter-clockwise."""

    center: complex
    radius: float
    start_angle: float
    sweep: float

    @property
    def start(self) -> complex:
        return self.center + self.radius * cmath.exp(1j * self.start_angle)

    @property
    def end(self) -> complex:
        return self.center + self.radius * cmath.exp(1j * (self.start_angle + self.sweep))

    @property
    def length(self) -> float:
        return abs(self.radius * self.sweep)

    def point(self, u):
        return self.center + self.radius * np.exp(1j * (self.start_angle + self.sweep * np.asarray(u)))

    def deriv(self, u):
        return 1j * self.sweep * self.radius * np.exp(1j * (self.start_angle + self.sweep * np.asarray(u)))

    def reversed(self) -> "Arc":
        return Arc(self.center, self.radius, self.start_angle + self.sweep, -self.sweep)

    def scaled(self, a: complex) -> "Arc":
        return Arc(a * self.center, abs(a) * self.radius,
                   self.start_angle + cmath.phase(a), self.sweep)

    def nodes(self, per_turn: int = 64) -> list[complex]:
        k = max(4, int(math.ceil(per_turn * abs(self.sweep) / (2 * math.pi))))
        return list(self.point(np.linspace(0.0, 1.0, k + 1)))

    def to_dict(self) -> dict:
        return {"kind": "arc", "center": _c2l(self.center), "radius": self.radius,
                "start_angle": self.start_angle, "sweep": self.sweep}


Piece = Union[Segment, Arc]


def _c2l(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _l2c(v) -> complex:
    return complex(v[0], v[1])


@dataclass(frozen=True)
class XPath:
    """A continuous oriented path in the x-plane."""

    pieces: tuple[Piece, ...]

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if not self.pieces:
            raise InvalidParameter("empty path")
        for a, b in zip(self.pieces, self.pieces[1:]):
            if abs(a.end - b.start) > JOIN_TOL * max(1.0, abs(a.end)):
                raise InvalidParameter(f"pieces do not join: {a.end} vs {b.start}")
        if not self.length > 0:
            raise InvalidParameter("path has zero length")

    @classmethod
    def polyline(cls, nodes: Sequence[complex]) -> "XPath":
        nodes = [complex(z) for z in nodes]
        return cls(tuple(Segment(a, b) for a, b in zip(nodes, nodes[1:]) if a != b))

    @property
    def start(self) -> complex:
        return self.pieces[0].start

    @property
    def end(self) -> complex:
        return self.pieces[-1].end

    @property
    def length(self) -> float:
        return sum(p.length for p in self.pieces)

    @property
    def is_closed(self) -> bool:
        return abs(self.end - self.start) <= JOIN_TOL * max(1.0, abs(self.start))

    def reversed(self) -> "XPath":
        return XPath(tuple(p.reversed() for p in reversed(self.pieces)))

    def scaled(self, a: complex) -> "XPath":
        return XPath(tuple(p.scaled(a) for p in self.pieces))

    def nodes(self, per_turn: int = 64) -> np.ndarray:
        """Polyline nodes; arcs are sampled with ``per_turn`` chords per full turn."""
        out = [self.start]
        for p in self.pieces:
            nd = p.nodes(per_turn) if isinstance(p, Arc) else p.nodes()
            out.extend(nd[1:])
        return np.array(out, dtype=complex)

    def subdivided(self, k: int = 2) -> "XPath":
        """Split every piece into ``k`` equal parts (same point set, same orientation)."""
        out = []
        for p in self.pieces:
            for i in range(k):
                if isinstance(p, Segment):
                    out.append(Segment(complex(p.point(i / k)), complex(p.point((i + 1) / k))))
                else:
                    out.append(Arc(p.center, p.radius, p.start_angle + p.sweep * i / k, p.sweep / k))
        return XPath(tuple(out))

    def distance_to(self, z: complex) -> float:
        return min(_piece_distance(p, z) for p in self.pieces)

    def to_dict(self) -> dict:
        return {"pieces": [p.to_dict() for p in self.pieces]}

    @classmethod
    def from_dict(cls, d: dict) -> "XPath":
        out = []
        for p in d["pieces"]:
            if p["kind"] == "segment":
                out.append(Segment(_l2c(p["z0"]), _l2c(p["z1"])))
            elif p["kind"] == "arc":
                out.append(Arc(_l2c(p["center"]), float(p["radius"]),
                               float(p["start_angle"]), float(p["sweep"])))
            else:
                raise InvalidParameter(f"unknown piece kind {p['kind']!r}")
        return cls(tuple(out))


def segment_distance(a: complex, b: complex, z):
    """Distance from points ``z`` to the segment ``[a, b]`` (vectorized over z)."""
    z = np.asarray(z)
    d = b - a
    if d == 0:
        return np.abs(z - a)
    s = np.clip(((z - a) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
    return np.abs(z - (a + s * d))


def _piece_distance(p: Piece, z: complex) -> float:
    if isinstance(p, Segment):
        return float(segment_distance(p.z0, p.z1, z))
    # closest point of a circular arc: radial projection if inside the sweep
    w = z - p.center
    ang = cmath.phase(w) if w != 0 else p.start_angle
    lo, hi = sorted((p.start_angle, p.start_angle + p.sweep))
    rel = (ang - lo) % (2 * math.pi)
    if rel <= hi - lo:
        return abs(abs(w) - p.radius)
    return min(abs(z - p.start), abs(z - p.end))


class LevelCurve:
    """``F(x, y) = h(x, y) - t`` with vectorized evaluation in both variables."""

    def __init__(self, h: BivarPoly, t: complex = 0.0):
        self.h = h
        self.t = complex(t)
        P = np.array(h.to_array(), dtype=complex)
        P[0, 0] -= self.t
        self._set(P)

    @classmethod
    def from_array(cls, P: np.ndarray) -> "LevelCurve":
        self = cls.__new__(cls)
        self.h = None
        self.t = 0j
        self._set(np.array(P, dtype=complex))
        return self

    def _set(self, P):
        self.P = P
        dxp, dyp = P.shape
        if dyp < 2 or not np.any(P[:, -1]):
            raise InvalidParameter("the curve must have positive degree in y")
        if np.any(P[1:, -1]):
            raise InvalidParameter("the leading coefficient in y must be constant")
        self.lead = P[0, -1]
        self.degree = dyp - 1
        self.Py = P[:, 1:] * np.arange(1, dyp)
        self.Px = P[1:, :] * np.arange(1, dxp)[:, None]
        self._xe = np.arange(dxp)
        lead_abs = abs(self.lead)
        self.scale = float(np.max(np.abs(P))) / lead_abs

    def poly(self) -> BivarPoly:
        return BivarPoly.from_array(self.P)

    def _xpow(self, xs, k):
        return np.asarray(xs, dtype=complex)[..., None] ** np.arange(k)

    def ycoeffs(self, xs) -> np.ndarray:
        """Ascending y-coefficients of ``F(x, .)`` for each x, shape ``(..., d+1)``."""
        return self._xpow(xs, self.P.shape[0]) @ self.P

    @staticmethod
    def _eval(A, xs, ys):
        xs = np.asarray(xs, dtype=complex)
        ys = np.asarray(ys, dtype=complex)
        c = (xs[..., None] ** np.arange(A.shape[0])) @ A
        out = np.zeros(np.broadcast(xs, ys).shape, dtype=complex) + c[..., -1]
        for k in range(A.shape[1] - 2, -1, -1):
            out = out * ys + c[..., k]
        return out

    def F(self, xs, ys):
        return self._eval(self.P, xs, ys)

    def Fy(self, xs, ys):
        return self._eval(self.Py, xs, ys)

    def Fx(self, xs, ys):
        if self.Px.shape[0] == 0:
            return np.zeros(np.broadcast(np.asarray(xs), np.asarray(ys)).shape, dtype=complex)
        return self._eval(self.Px, xs, ys)

    def dydx(self, xs, ys):
        return -self.Fx(xs, ys) / self.Fy(xs, ys)

    def newton(self, xs, ys, iters: int = 2):
        ys = np.array(ys, dtype=complex)
        for _ in range(iters):
            fy = self.Fy(xs, ys)
            step = np.where(fy != 0, self.F(xs, ys) / np.where(fy != 0, fy, 1), 0)
            ys = ys - step
        return ys

    def fiber(self, xs, polish: bool = True) -> np.ndarray:
        """All y-roots over each x, shape ``(N, d)``, via batched companion eigenvalues."""
        xs = np.atleast_1d(np.asarray(xs, dtype=complex))
        c = self.ycoeffs(xs)
        d = self.degree
        M = np.zeros((len(xs), d, d), dtype=complex)
        M[:, 0, :] = -c[:, -2::-1] / self.lead
        if d > 1:
            idx = np.arange(d - 1)
            M[:, idx + 1, idx] = 1.0
        R = np.linalg.eigvals(M)
        if polish:
            R = self._polish(xs, R)
        return R

    def _polish(self, xs, R):
        # Newton on each root, but only where the step is small relative to the root gaps
        X = np.broadcast_to(xs[:, None], R.shape)
        if R.shape[1] > 1:
            gaps = np.abs(R[:, :, None] - R[:, None, :])
            gaps[:, np.arange(R.shape[1]), np.arange(R.shape[1])] = np.inf
            gap = gaps.min(axis=2)
        else:
            gap = np.full(R.shape, np.inf)
        for _ in range(2):
            fy = self.Fy(X, R)
            ok = np.abs(fy) > 0
            step = np.where(ok, self.F(X, R) / np.where(ok, fy, 1), 0)
            step = np.where(np.abs(step) < 0.1 * gap, step, 0)
            R = R - step
        return R

    def select(self, xs, ypred):
        """Fiber root nearest to each prediction, with the sheet-jump guard.

        Returns ``(y, ok)`` where ``ok`` is False when the nearest root is not
        closer to the prediction than ``GUARD_RATIO`` times its distance to
        the next fiber root.
        """
        xs = np.atleast_1d(np.asarray(xs, dtype=complex))
        ypred = np.atleast_1d(np.asarray(ypred, dtype=complex))
        R = self.fiber(xs)
        dist = np.abs(R - ypred[:, None])
        k = np.argmin(dist, axis=1)
        rows = np.arange(len(xs))
        y = R[rows, k]
        other = np.abs(R - y[:, None])
        other[rows, k] = np.inf
        ok = dist[rows, k] < GUARD_RATIO * other.min(axis=1)
        return y, ok


def y_fiber(h: BivarPoly, t: complex, x: complex) -> np.ndarray:
    """The ``n + 1`` roots of ``h(x, .) - t``, polished.

    Coincident roots (``x`` a branch point) are returned repeated.
    """
    curve = LevelCurve(h, t)
    R = curve.fiber([x])[0]
    c = curve.ycoeffs(np.array([x]))[0]
    rs = univariate_roots(c)
    return rs.roots if rs.has_clusters else R


@dataclass(frozen=True)
class BranchPointSet:
    t: complex
    points: np.ndarray          # distinct x-values
    multiplicity: np.ndarray    # multiplicity as roots of the y-discriminant
    orders: np.ndarray          # number of sheets meeting over the point

    @property
    def all_points(self) -> np.ndarray:
        """Points repeated by discriminant multiplicity."""
        return np.repeat(self.points, self.multiplicity)

    @property
    def simple(self) -> np.ndarray:
        return self.orders == 2

    def nearest(self, z: complex) -> complex:
        return complex(self.points[np.argmin(np.abs(self.points - z))])


def discriminant_roots(curve: LevelCurve):
    """Roots in x of ``Res_y(F, F_y)`` as a :class:`~abeldet.polyring.RootSet`."""
    F = curve.poly()
    r = resultant_y(F, F.dy())
    if not np.any(r):
        raise InvalidParameter("the y-discriminant vanishes identically")
    return univariate_roots(r)


def branch_points(h: BivarPoly, t: complex) -> BranchPointSet:
    """Branch points of the projection of ``{h = t}`` to the x-line.

    Raises
    ------
    InvalidParameter
        If the y-discriminant vanishes identically (a repeated factor).
    """
    curve = LevelCurve(h, t)
    rs = discriminant_roots(curve)
    pts, mult = rs.distinct()
    errs = rs.errors[[c[0] for c in rs.clusters]]
    orders = []
    for x, e in zip(pts, errs):
        R = curve.fiber([x])[0]
        # an error e in x moves a k-fold fiber root by about e**(1/k)
        scale = max(1.0, float(np.max(np.abs(R))))
        tol = scale * max(1e-6, 10 * (e / scale) ** (1 / curve.degree))
        near = np.abs(R[:, None] - R[None, :]) <= tol
        orders.append(int(near.sum(axis=1).max()))
    return BranchPointSet(complex(t), pts, mult, np.array(orders))


@dataclass
class BranchTrack:
    path: XPath
    y_start: complex
    xs: np.ndarray
    ys: np.ndarray
    error: float

    @property
    def y_end(self) -> complex:
        return complex(self.ys[-1])

    @property
    def samples(self) -> np.ndarray:
        return np.stack([self.xs, self.ys], axis=1)


def _track_piece(curve: LevelCurve, piece: Piece, y0: complex, tol: float, h_first: float):
    u, y = 0.0, complex(y0)
    du = h_first
    xs, ys, err = [], [], 0.0
    while u < 1.0:
        du = min(du, 1.0 - u)
        x0 = complex(piece.point(u))
        slope = complex(curve.dydx(x0, y)) * complex(piece.deriv(u))
        u1 = 1.0 if u + du >= 1.0 - 1e-15 else u + du
        x1 = complex(piece.point(u1))
        ypred = y + slope * (u1 - u)
        ynew, ok = curve.select([x1], [ypred])
        if not ok[0] or not np.isfinite(ynew[0]):
            du /= 2
            if du < MIN_STEP:
                raise ProximityError("step underflow while tracking", x1, None)
            continue
        ynew = complex(curve.newton([x1], ynew, iters=1)[0])
        res = abs(complex(curve.F(x1, ynew)))
        fy = abs(complex(curve.Fy(x1, ynew)))
        err += res / fy if fy > 0 else math.inf
        if res > tol * max(1.0, curve.scale):
            raise TrackingFailure(f"corrector residual {res:.3g} at x={x1}")
        u, y = u1, ynew
        xs.append(x1)
        ys.append(y)
        du *= 1.5
    return xs, ys, err


def continue_branch(h: BivarPoly, t: complex, path: XPath, y0: complex,
                    tol: float = 1e-10, *, curve: LevelCurve | None = None) -> BranchTrack:
    """Analytic continuation of the root ``y0`` of ``h(path.start, .) = t`` along ``path``.

    First-order predictor along ``dy/dx = -F_x / F_y``, root selection from
    the full fiber with the sheet-jump guard, one Newton correction.

    Raises
    ------
    ProximityError
        On step underflow, reporting the closest branch point.
    TrackingFailure
        If the corrected point misses the curve by more than ``tol``.
    """
    curve = curve or LevelCurve(h, t)
    x_start = path.start
    if abs(complex(curve.F(x_start, y0))) > 1e-8 * max(1.0, curve.scale) * max(1.0, abs(y0)) ** curve.degree:
        raise InvalidParameter("y0 is not in the fiber over the path start")
    y0 = complex(curve.newton([x_start], [y0])[0])
    xs, ys, err = [x_start], [y0], 0.0
    y = y0
    for piece in path.pieces:
        try:
            px, py, e = _track_piece(curve, piece, y, tol, 1 / 16)
        except ProximityError as exc:
            bp = branch_points(h, t) if h is not None else None
            near = bp.nearest(exc.x) if bp is not None else None
            raise ProximityError(f"step underflow near branch point {near}", exc.x, near) from None
        xs += px
        ys += py
        err += e
        y = ys[-1]
    return BranchTrack(path, complex(y0), np.array(xs), np.array(ys), err)
