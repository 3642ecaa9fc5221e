"""Homology cycles of the level curve as closed lifted chains.

A :class:`LiftedChain` is a formal integer combination of links; a link is
an x-path plus the y-value it starts on.  :func:`fermat_basis` builds the
explicit Fermat generators in a form that avoids ramification points, and
:func:`deform_basis` / :func:`transport_t` carry a basis along a family of
curves by moving the x-paths together with the branch points.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .cover import Arc, LevelCurve, Segment, XPath, continue_branch, discriminant_roots, segment_distance
from .errors import HomotopyFailure, InvalidHomotopy, InvalidParameter
from .polyring import BivarPoly, critical_data, is_generic, monomial_basis

MATCH_TOL = 1e-8
MAX_HALVINGS = 10
ARC_NODES = 64


@dataclass(frozen=True)
class Link:
    path: XPath
    y_start: complex
    weight: int = 1

    def to_dict(self) -> dict:
        y = complex(self.y_start)
        return {"path": self.path.to_dict(), "y_start": [y.real, y.imag], "weight": self.weight}

    @classmethod
    def from_dict(cls, d: dict) -> "Link":
        return cls(XPath.from_dict(d["path"]), complex(*d["y_start"]), int(d.get("weight", 1)))


@dataclass(frozen=True)
class LiftedChain:
    """Integer combination of links.

    ``components`` splits ``links`` into consecutive runs; each run must be
    closed on its own (end of each link = start of the next, cyclically).
    """

    links: tuple[Link, ...]
    components: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "links", tuple(self.links))
        if not self.links:
            raise InvalidParameter("a chain needs at least one link")
        if not self.components:
            object.__setattr__(self, "components", (len(self.links),))
        if sum(self.components) != len(self.links):
            raise InvalidParameter("component lengths do not add up to the link count")

    def reversed(self) -> "LiftedChain":
        return LiftedChain(tuple(Link(k.path, k.y_start, -k.weight) for k in self.links),
                           self.components)

    def transformed(self, ax: complex, ay: complex) -> "LiftedChain":
        """Image under ``(x, y) -> (ax * x, ay * y)``."""
        return LiftedChain(tuple(Link(k.path.scaled(ax), ay * k.y_start, k.weight)
                                 for k in self.links), self.components)

    @staticmethod
    def combine(chains: Sequence["LiftedChain"], coeffs: Sequence[int]) -> "LiftedChain":
        """``sum_i coeffs[i] * chains[i]`` as a single chain."""
        links, comps = [], []
        for c, k in zip(chains, coeffs):
            if int(k) != k:
                raise InvalidParameter("chain coefficients must be integers")
            if k == 0:
                continue
            links += [Link(l.path, l.y_start, l.weight * int(k)) for l in c.links]
            comps += list(c.components)
        if not links:
            raise InvalidParameter("the zero combination is not representable")
        return LiftedChain(tuple(links), tuple(comps))

    def _runs(self):
        i = 0
        for n in self.components:
            yield self.links[i:i + n]
            i += n

    def track(self, h: BivarPoly, t: complex, tol: float = 1e-10):
        curve = LevelCurve(h, t)
        return [continue_branch(h, t, k.path, k.y_start, tol, curve=curve) for k in self.links]

    def closure_error(self, h: BivarPoly, t: complex) -> float:
        """Largest (x, y) mismatch between consecutive link ends within each closed run."""
        tracks = iter(self.track(h, t))
        worst = 0.0
        for run in self._runs():
            tr = [next(tracks) for _ in run]
            for a, (b, lb) in zip(tr, zip(tr[1:] + tr[:1], run[1:] + run[:1])):
                worst = max(worst, abs(a.path.end - lb.path.start), abs(a.y_end - lb.y_start))
        return worst

    def to_dict(self) -> dict:
        return {"links": [k.to_dict() for k in self.links], "components": list(self.components)}

    @classmethod
    def from_dict(cls, d: dict) -> "LiftedChain":
        return cls(tuple(Link.from_dict(k) for k in d["links"]), tuple(d["components"]))


@dataclass(frozen=True)
class CycleBasis:
    n: int
    t: complex
    h: BivarPoly
    cycles: tuple[LiftedChain, ...]
    provenance: str = "fermat"

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple(self.cycles))
        if len(self.cycles) != self.n * self.n:
            raise InvalidParameter(f"a basis for n={self.n} needs {self.n ** 2} cycles")

    def recombined(self, U) -> "CycleBasis":
        """Basis whose cycle ``r`` is ``sum_k U[r, k] * cycle_k``."""
        U = np.asarray(U)
        cyc = tuple(LiftedChain.combine(self.cycles, U[r]) for r in range(len(self.cycles)))
        return CycleBasis(self.n, self.t, self.h, cyc, self.provenance + " (recombined)")

    def to_dict(self) -> dict:
        t = complex(self.t)
        return {
            "n": self.n,
            "t": [t.real, t.imag],
            "h": [[i, j, complex(c).real, complex(c).imag]
                  for (i, j), c in sorted(self.h.coeffs.items())],
            "provenance": self.provenance,
            "cycles": [c.to_dict() for c in self.cycles],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "CycleBasis":
        h = BivarPoly({(i, j): complex(re, im) for i, j, re, im in d["h"]})
        return cls(int(d["n"]), complex(*d["t"]), h,
                   tuple(LiftedChain.from_dict(c) for c in d["cycles"]), d["provenance"])


def max_fermat_delta(n: int) -> float:
    """Half the distance between neighbouring Fermat branch points."""
    return 0.5 * abs(1 - cmath.exp(2j * math.pi / (n + 1)))


def deformation_delta(n: int) -> float:
    """Detour radius used when the Fermat basis is going to be deformed.

    Large enough that the circles keep enclosing the n branch points each
    ramification point splits into under moderate perturbations.
    """
    eps = cmath.exp(2j * math.pi / (n + 1))
    return 0.3 * min(float(segment_distance(0, eps, 1.0)), abs(1 - eps))


def fermat_alpha1(n: int, delta: float = 1e-2, t: complex = 1.0) -> LiftedChain:
    """The first Fermat generator as a closed loop on ``x**(n+1) + y**(n+1) = t``.

    Starting near ``eps``, the loop runs along the rays through ``0`` to
    near ``1`` on the branch that is real and positive on the rays, circles
    ``x = 1`` counter-clockwise (``y -> eps * y``), runs back on that branch
    and circles ``x = eps`` clockwise to close up.  The period of
    ``x**l y**(m+1) dx`` is ``(1 - eps**(l+1)) (1 - eps**(m+1)) I``.
    """
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    if not 0 < delta < max_fermat_delta(n):
        raise InvalidParameter(f"delta={delta} must lie in (0, {max_fermat_delta(n):.4g})")
    eps = cmath.exp(2j * math.pi / (n + 1))
    xa, xb = eps * (1 - delta), complex(1 - delta)
    y0 = (1 - (1 - delta) ** (n + 1)) ** (1 / (n + 1))
    pieces = (
        Segment(xa, 0j),
        Segment(0j, xb),
        Arc(1.0 + 0j, delta, math.pi, 2 * math.pi),
        Segment(xb, 0j),
        Segment(0j, xa),
        Arc(eps, delta, cmath.phase(-eps), -2 * math.pi),
    )
    chain = LiftedChain((Link(XPath(pieces), complex(y0)),))
    if t != 1:
        tau = complex(t) ** (1 / (n + 1))
        chain = chain.transformed(tau, tau)
    return chain


def fermat_basis(n: int, delta: float = 1e-2, t: complex = 1.0) -> CycleBasis:
    """Images of the first generator under ``(x, y) -> (eps**l x, eps**m y)``, ordered by index."""
    a1 = fermat_alpha1(n, delta)
    eps = cmath.exp(2j * math.pi / (n + 1))
    cycles = [a1.transformed(eps ** e.l, eps ** e.m) for e in monomial_basis(n)]
    if t != 1:
        tau = complex(t) ** (1 / (n + 1))
        cycles = [c.transformed(tau, tau) for c in cycles]
    return CycleBasis(n, complex(t), BivarPoly.fermat(n), tuple(cycles), "fermat")


# --- homotopy engine -------------------------------------------------------

@dataclass
class _LinkState:
    nodes: np.ndarray
    y_start: complex
    weight: int


def _pad(P: np.ndarray, shape) -> np.ndarray:
    out = np.zeros(shape, dtype=complex)
    out[:P.shape[0], :P.shape[1]] = P
    return out


def _branch_set(curve: LevelCurve) -> np.ndarray:
    return discriminant_roots(curve).roots


def _field(b0: np.ndarray, d: np.ndarray, z: np.ndarray, coincide: float) -> np.ndarray:
    """Displacement of points ``z`` when branch points ``b0`` move by ``d``.

    Inverse-square-distance blend of local complex-affine motions, each
    anchored at a branch point with a slope estimated from its neighbours.
    The affine part lets paths threaded between two points rotate with them;
    it is capped at the distance to the nearest neighbour so that a pair
    splitting apart does not inflate everything around it.
    """
    diff = b0[None, :] - b0[:, None]              # b_k - b_i
    far = np.abs(diff) > coincide
    if not far.any():
        return np.zeros(z.shape, dtype=complex) + d.mean()
    u = np.where(far, 1.0 / np.where(far, np.abs(diff), 1.0) ** 2, 0.0)
    rate = np.where(far, (d[None, :] - d[:, None]) / np.where(far, diff, 1.0), 0.0)
    norm = u.sum(axis=1)
    g = np.where(norm > 0, (u * rate).sum(axis=1) / np.where(norm > 0, norm, 1.0), 0.0)
    rho = np.where(far, np.abs(diff), np.inf).min(axis=1)
    dz = z[:, None] - b0[None, :]
    r = np.maximum(np.abs(dz), 1e-300)
    local = g[None, :] * dz * np.minimum(1.0, rho[None, :] / r)
    w = 1.0 / r ** 2
    w /= w.sum(axis=1, keepdims=True)
    return (w * (d[None, :] + local)).sum(axis=1)


def _seg_point_dist(a: np.ndarray, b: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Distances between segments ``[a_s, b_s]`` and points ``p_i``, shape ``(S, P)``."""
    d = (b - a)[:, None]
    w = p[None, :] - a[:, None]
    dd = np.abs(d) ** 2
    s = np.where(dd > 0, (w * np.conj(d)).real / np.where(dd > 0, dd, 1.0), 0.0)
    s = np.clip(s, 0.0, 1.0)
    return np.abs(w - s * d)


def _refine(nodes: np.ndarray, bp: np.ndarray, ratio: float = 0.5, min_len: float = 0.0) -> np.ndarray:
    """Split segments longer than ``ratio`` times their distance to the nearest branch point."""
    for _ in range(30):
        a, b = nodes[:-1], nodes[1:]
        dist = _seg_point_dist(a, b, bp).min(axis=1)
        long = (np.abs(b - a) > ratio * dist) & (np.abs(b - a) > min_len)
        if not long.any():
            return nodes
        mids = 0.5 * (a + b)
        out = np.empty(len(nodes) + long.sum(), dtype=complex)
        pos = np.arange(len(nodes)) + np.concatenate([[0], np.cumsum(long)])
        out[pos] = nodes
        out[pos[:-1][long] + 1] = mids[long]
        nodes = out
    return nodes


def _run_homotopy(states: list[_LinkState], family: Callable[[float], LevelCurve],
                  steps: int, delta_min: float,
                  near_critical: Callable[[float], bool] | None = None) -> list[_LinkState]:
    curve = family(0.0)
    b0 = _branch_set(curve)
    scale = max(1.0, float(np.max(np.abs(b0))))
    coincide = 1e-6 * scale
    for st in states:
        st.nodes = _refine(st.nodes, b0, min_len=delta_min)
    s, ds_max = 0.0, 1.0 / steps
    ds = ds_max
    while s < 1.0:
        ds = min(ds, 1.0 - s)
        s1 = 1.0 if s + ds >= 1.0 - 1e-14 else s + ds
        ok, new_states, b1 = _try_step(states, curve, b0, family(s1), coincide, delta_min)
        if not ok:
            ds /= 2
            if ds < ds_max / 2 ** MAX_HALVINGS:
                if near_critical is not None and near_critical(s):
                    raise InvalidHomotopy("the level value becomes critical along the homotopy", s)
                raise HomotopyFailure("step control exhausted: branch points collide or "
                                      "approach the paths", s)
            continue
        states, b0, curve, s = new_states, b1, family(s1), s1
        ds = min(2 * ds, ds_max)
    return states


def _try_step(states, curve0, b0, curve1, coincide, delta_min):
    b1 = _branch_set(curve1)
    if len(b1) != len(b0):
        return False, None, None
    row, col = linear_sum_assignment(np.abs(b0[:, None] - b1[None, :]))
    d = b1[col[np.argsort(row)]] - b0
    # each point must move less than half of its distance to any distinct neighbour
    sep = np.abs(b0[:, None] - b0[None, :])
    sep[sep <= coincide] = np.inf
    if np.any(np.abs(d) >= 0.5 * sep.min(axis=1)):
        return False, None, None
    bnew = b0 + d
    out = []
    for st in states:
        nodes = st.nodes
        for _ in range(8):
            v = _field(b0, d, nodes, coincide)
            new = nodes + v
            a, b = nodes[:-1], nodes[1:]
            old_dist = _seg_point_dist(a, b, b0)
            motion = np.maximum(np.abs(v[:-1]), np.abs(v[1:]))[:, None]
            safe = old_dist > np.abs(d)[None, :] + motion + 0.5 * delta_min
            new_dist = _seg_point_dist(new[:-1], new[1:], bnew)
            safe &= new_dist >= delta_min
            bad = ~safe.all(axis=1)
            if not bad.any():
                break
            # let long offending segments bend by adding midpoints, else give up on this ds
            seglen = np.abs(b - a)
            split = bad & (seglen > old_dist.min(axis=1)) & (seglen > delta_min)
            if not split.any():
                return False, None, None
            pos = np.arange(len(nodes)) + np.concatenate([[0], np.cumsum(split)])
            grown = np.empty(len(nodes) + split.sum(), dtype=complex)
            grown[pos] = nodes
            grown[pos[:-1][split] + 1] = 0.5 * (a + b)[split]
            nodes = grown
        else:
            return False, None, None
        x0 = new[0]
        y, ok = curve1.select([x0], [st.y_start])
        if not ok[0]:
            return False, None, None
        y = complex(curve1.newton([x0], y)[0])
        new = _refine(new, bnew, min_len=delta_min)
        out.append(_LinkState(new, y, st.weight))
    return True, out, bnew


def _states(basis: CycleBasis) -> tuple[list[_LinkState], list[tuple[int, ...]]]:
    states, comps = [], []
    for c in basis.cycles:
        for k in c.links:
            states.append(_LinkState(k.path.nodes(ARC_NODES), complex(k.y_start), k.weight))
        comps.append(c.components)
    return states, comps


def _rebuild(states, comps) -> tuple[LiftedChain, ...]:
    it = iter(states)
    out = []
    for cp in comps:
        links = []
        for _ in range(sum(cp)):
            st = next(it)
            nodes = st.nodes
            if abs(nodes[-1] - nodes[0]) < 1e-9 * max(1.0, abs(nodes[0])):
                nodes = nodes.copy()
                nodes[-1] = nodes[0]
            links.append(Link(XPath.polyline(nodes), st.y_start, st.weight))
        out.append(LiftedChain(tuple(links), cp))
    return tuple(out)


def default_delta_min(h: BivarPoly) -> float:
    return 1e-3 * max(1.0, h.scale()) / max(1.0, abs(h.coeffs.get((0, h.degree), 1.0)))


def deform_basis(basis: CycleBasis, h_from: BivarPoly, h_to: BivarPoly, t: complex | None = None,
                 steps: int = 16, *, delta_min: float | None = None) -> CycleBasis:
    """Carry ``basis`` along ``h_s = (1 - s) h_from + s h_to`` at fixed level ``t``.

    Raises
    ------
    InvalidHomotopy
        If the top part degenerates or ``t`` becomes critical along the way.
    HomotopyFailure
        If step control cannot keep the paths clear of the branch points.
    """
    t = basis.t if t is None else complex(t)
    if h_from == h_to:
        return basis
    if h_from.degree != h_to.degree or h_from.degree != basis.n + 1:
        raise InvalidParameter("both polynomials must have degree n + 1")
    n = basis.n
    shape = tuple(max(a, b) for a, b in zip(h_from.to_array().shape, h_to.to_array().shape))
    P0 = _pad(h_from.to_array(), shape)
    P1 = _pad(h_to.to_array(), shape)
    P0[0, 0] -= t
    P1[0, 0] -= t

    def h_at(s):
        return BivarPoly.from_array((1 - s) * P0 + s * P1) + t

    def family(s):
        P = (1 - s) * P0 + s * P1
        if abs(P[0, -1]) < 1e-12 * np.max(np.abs(P)):
            raise InvalidHomotopy("the y**(n+1) coefficient vanishes", s)
        return LevelCurve.from_array(P)

    crit_guard = 1e-6 * max(1.0, abs(t))

    def near_critical(s):
        hs = h_at(s)
        return (not is_generic(hs.top())
                or np.min(np.abs(critical_data(hs).values - t)) < 1e-3 * max(1.0, abs(t)))

    for k in range(steps + 1):
        hs = h_at(k / steps)
        if not is_generic(hs.top()):
            raise InvalidHomotopy("the top part becomes nongeneric", k / steps)
        if np.min(np.abs(critical_data(hs).values - t)) < crit_guard:
            raise InvalidHomotopy(f"t={t} is critical along the homotopy", k / steps)
    dmin = delta_min if delta_min is not None else default_delta_min(h_to)
    states, comps = _states(basis)
    states = _run_homotopy(states, family, steps, dmin, near_critical)
    return CycleBasis(n, t, h_to, _rebuild(states, comps),
                      "deformed from fermat along coefficient path")


def transport_t(basis: CycleBasis, t_path: Sequence[complex], steps: int | None = None, *,
                delta_min: float | None = None) -> CycleBasis:
    """Carry ``basis`` along the polyline ``t_path`` of level values (first point = ``basis.t``)."""
    tp = np.asarray(t_path, dtype=complex)
    if len(tp) < 2 or abs(tp[0] - basis.t) > 1e-12 * max(1.0, abs(basis.t)):
        raise InvalidParameter("the t-path must start at the basis level")
    h = basis.h
    seg = np.abs(np.diff(tp))
    total = seg.sum()
    if total == 0:
        return basis
    crit = critical_data(h).values
    dist = min(float(np.min(segment_distance(a, b, crit))) for a, b in zip(tp[:-1], tp[1:]))
    if dist < 1e-6 * max(1.0, float(np.max(np.abs(tp)))):
        raise InvalidHomotopy("the t-path passes through a critical value", None)
    cum = np.concatenate([[0], np.cumsum(seg)]) / total
    P = h.to_array().astype(complex)

    def t_at(s):
        return complex(np.interp(s, cum, tp.real) + 1j * np.interp(s, cum, tp.imag))

    def family(s):
        Q = P.copy()
        Q[0, 0] -= t_at(s)
        return LevelCurve.from_array(Q)

    def near_critical(s):
        return np.min(np.abs(crit - t_at(s))) < 1e-3 * max(1.0, abs(t_at(s)))

    if steps is None:
        steps = max(8, int(math.ceil(16 * total / max(dist, 1e-3))))
    dmin = delta_min if delta_min is not None else default_delta_min(h)
    states, comps = _states(basis)
    states = _run_homotopy(states, family, steps, dmin, near_critical)
    prov = basis.provenance
    if "transported in t" not in prov:
        prov += ", transported in t"
    return CycleBasis(basis.n, complex(tp[-1]), h, _rebuild(states, comps), prov)
