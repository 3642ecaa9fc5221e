"""Abelian integrals over cycle bases, period determinants and their fit in t.

The integrals of all ``n**2`` forms ``x**l y**(m+1) dx`` over one chain are
computed together by adaptive Gauss-Kronrod (7, 15) panels, walked in order
along each piece so that the branch of ``y`` is carried from panel to panel.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .closedform import C_of_H, SignAmbiguous
from .cover import LevelCurve, Piece
from .cycles import (CycleBasis, LiftedChain, deform_basis, deformation_delta,
                     fermat_basis, transport_t)
from .errors import (AbeldetError, AccuracyFailure, InvalidParameter,
                     ProximityError, TrackingFailure)
from .polyring import BivarPoly, critical_data, monomial_basis, univariate_roots

SCHEMA_VERSION = 1

# Gauss-Kronrod 15-point abscissae and weights on [-1, 1] (nonnegative half);
# the 7-point Gauss rule uses the odd-indexed Kronrod abscissae.
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

GK_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
GK_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
G_WEIGHTS = np.zeros(15)
G_WEIGHTS[[1, 3, 5]] = _WG[:3]
G_WEIGHTS[[13, 11, 9]] = _WG[:3]
G_WEIGHTS[7] = _WG[3]

_EPS = np.finfo(float).eps
MIN_PANEL = 1e-12


def gk15(f, a: float, b: float):
    """One Gauss-Kronrod panel: ``(kronrod, |kronrod - gauss|)`` for a vector-valued ``f``."""
    c, r = 0.5 * (a + b), 0.5 * (b - a)
    v = f(c + r * GK_NODES)
    k = r * (GK_WEIGHTS @ v)
    g = r * (G_WEIGHTS @ v)
    return k, np.abs(k - g)


@dataclass
class ChainIntegral:
    values: np.ndarray      # one entry per form
    errors: np.ndarray
    panels: int


def _integrate_piece(curve: LevelCurve, piece: Piece, y0: complex, ls, ms, tol: float):
    """Integrals of ``x**l y**(m+1) dx`` along one piece, starting on the root ``y0``."""
    total = np.zeros(len(ls), dtype=complex)
    err = np.zeros(len(ls))
    stack = [(0.0, 1.0)]
    y = complex(y0)
    panels = 0
    nodes = np.concatenate([0.5 * (GK_NODES + 1), [1.0]])
    while stack:
        a, b = stack.pop()
        xa = complex(piece.point(a))
        slope = complex(curve.dydx(xa, y)) * complex(piece.deriv(a))
        us = a + (b - a) * nodes
        xs = piece.point(us)
        ys, ok = curve.select(xs, y + slope * (us - a))
        if not ok.all() or not np.all(np.isfinite(ys)):
            if b - a < MIN_PANEL:
                raise ProximityError("quadrature panel underflow near a branch point", xa, None)
            m = 0.5 * (a + b)
            stack += [(m, b), (a, m)]
            continue
        ys = curve.newton(xs, ys, iters=1)
        dx = piece.deriv(us[:-1])
        vals = (xs[:-1, None] ** ls) * (ys[:-1, None] ** (ms + 1)) * dx[:, None]
        r = 0.5 * (b - a)
        k = r * (GK_WEIGHTS @ vals)
        g = r * (G_WEIGHTS @ vals)
        e = np.abs(k - g)
        resabs = r * (GK_WEIGHTS @ np.abs(vals))
        floor = 50 * _EPS * resabs
        if np.all(e <= np.maximum(tol * resabs, floor)) or b - a < MIN_PANEL:
            total += k
            err += np.maximum(e, floor)
            y = complex(ys[-1])
            panels += 1
        else:
            m = 0.5 * (a + b)
            stack += [(m, b), (a, m)]
    return total, err, y, panels


def integrate_chain(h: BivarPoly, t: complex, chain: LiftedChain, tol: float = 1e-10,
                    *, forms: Sequence[int] | None = None, curve: LevelCurve | None = None,
                    check_closure: bool = True) -> ChainIntegral:
    """Integrals of the canonical forms over ``chain`` (all ``n**2`` unless ``forms`` is given)."""
    curve = curve or LevelCurve(h, t)
    n = curve.degree - 1
    basis = monomial_basis(n)
    idx = list(range(1, n * n + 1)) if forms is None else list(forms)
    for j in idx:
        if not 1 <= j <= n * n:
            raise InvalidParameter(f"form index {j} outside 1..{n * n}")
    ls = np.array([basis[j].l for j in idx])
    ms = np.array([basis[j].m for j in idx])
    values = np.zeros(len(idx), dtype=complex)
    errors = np.zeros(len(idx))
    panels = 0
    pos = 0
    for ncomp in chain.components:
        run = chain.links[pos:pos + ncomp]
        pos += ncomp
        ends = []
        for link in run:
            y = complex(curve.newton([link.path.start], [link.y_start])[0])
            v = np.zeros(len(idx), dtype=complex)
            for piece in link.path.pieces:
                pv, pe, y, k = _integrate_piece(curve, piece, y, ls, ms, tol)
                v += pv
                errors += abs(link.weight) * pe
                panels += k
            values += link.weight * v
            ends.append(y)
        if check_closure:
            for link, y_end, nxt in zip(run, ends, run[1:] + run[:1]):
                gap = abs(y_end - nxt.y_start)
                if gap > 1e-7 * max(1.0, abs(y_end)):
                    raise TrackingFailure(f"chain does not close: y mismatch {gap:.3g}")
    return ChainIntegral(values, errors, panels)


def integrate_form(h: BivarPoly, t: complex, j: int, cycle: LiftedChain,
                   tol: float = 1e-10) -> tuple[complex, float]:
    """Period of ``omega_j`` over ``cycle`` with an error estimate.

    Raises
    ------
    AccuracyFailure
        If the error estimate exceeds ``tol`` relative to the accumulated
        absolute integrand.
    """
    r = integrate_chain(h, t, cycle, tol, forms=[j])
    value, error = complex(r.values[0]), float(r.errors[0])
    if error > max(tol * 1e3 * max(abs(value), 1e-300), 1e-300) and error > 1e-8:
        raise AccuracyFailure(f"error estimate {error:.3g} exceeds tolerance")
    return value, error


@dataclass
class PeriodMatrix:
    n: int
    t: complex
    entries: np.ndarray      # (form j, cycle r)
    errors: np.ndarray
    partial: bool = False

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.entries))

    @property
    def condition(self) -> float:
        return float(np.linalg.cond(self.entries))

    @property
    def det_error(self) -> float:
        """First-order bound on the determinant error from the entry errors."""
        if self.n == 1:
            return float(self.errors[0, 0])
        try:
            inv = np.linalg.inv(self.entries)
        except np.linalg.LinAlgError:
            return math.inf
        return float(abs(self.det) * np.sum(np.abs(inv.T) * self.errors))


def _column(args):
    h, t, chain, tol = args
    r = integrate_chain(h, t, chain, tol)
    return r.values, r.errors


def period_matrix(h: BivarPoly, t: complex, basis: CycleBasis, tol: float = 1e-10,
                  *, workers: int | None = None) -> PeriodMatrix:
    """All ``n**4`` periods of the canonical forms over ``basis`` at level ``t``.

    ``workers > 1`` evaluates cycles in a process pool; results are
    assembled in cycle order, so the output does not depend on scheduling.
    """
    n = basis.n
    if h.degree != n + 1:
        raise InvalidParameter("basis and polynomial disagree on n")
    jobs = [(h, complex(t), c, tol) for c in basis.cycles]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cols = list(pool.map(_column, jobs))
    else:
        cols = [_column(j) for j in jobs]
    entries = np.stack([c[0] for c in cols], axis=1)
    errors = np.stack([c[1] for c in cols], axis=1)
    partial = bool(np.any(errors > np.maximum(1e3 * tol * np.abs(entries), 1e-300)))
    return PeriodMatrix(n, complex(t), entries, errors, partial)


# --- determinant polynomial ------------------------------------------------

@dataclass
class DetFit:
    samples: list[tuple[complex, complex]]
    coefficients: np.ndarray          # ascending in t
    residual: float                   # max relative deviation at the samples
    leading: complex
    roots: np.ndarray
    rejected: list[complex] = field(default_factory=list)
    center: complex = 0j
    radius: float = 1.0

    def __call__(self, t):
        return np.polyval(self.coefficients[::-1], t)


def _fit(ts: np.ndarray, ds: np.ndarray, degree: int, center: complex, radius: float):
    w = (ts - center) / radius
    V = w[:, None] ** np.arange(degree + 1)
    c, *_ = np.linalg.lstsq(V, ds, rcond=None)
    resid = float(np.max(np.abs(V @ c - ds)) / np.max(np.abs(ds)))
    roots_w = univariate_roots(c).roots
    # expand back to ascending coefficients in t
    coeffs = np.zeros(degree + 1, dtype=complex)
    base = np.array([1.0 + 0j])
    shift = np.array([-center / radius, 1 / radius])
    for k in range(degree + 1):
        coeffs[:len(base)] += c[k] * base
        base = np.convolve(base, shift)
    return coeffs, resid, c[-1] / radius ** degree, center + radius * roots_w


def basis_at(h: BivarPoly, basis: CycleBasis, t: complex) -> CycleBasis:
    """The basis carried to level ``t`` along the straight t-segment."""
    if t == basis.t:
        return basis
    if basis.provenance == "fermat" and h == BivarPoly.fermat(basis.n):
        # exact symmetry: (x, y) -> tau (x, y) maps level t0 to level t
        tau = (complex(t) / basis.t) ** (1 / (basis.n + 1))
        cyc = tuple(c.transformed(tau, tau) for c in basis.cycles)
        return CycleBasis(basis.n, complex(t), h, cyc, basis.provenance)
    return transport_t(basis, [basis.t, complex(t)])


def det_samples(h: BivarPoly, basis: CycleBasis, t_list: Sequence[complex], tol: float = 1e-10,
                *, guard: float = 1e-3, workers: int | None = None) -> DetFit:
    """Period determinants at each ``t`` and their least-squares fit of degree ``n**2``.

    Samples closer than ``guard`` to a critical value are rejected.

    Raises
    ------
    InvalidParameter
        If fewer than ``n**2 + 1`` usable samples remain.
    """
    n = basis.n
    deg = n * n
    crit = critical_data(h).values
    kept, rejected = [], []
    for t in t_list:
        t = complex(t)
        (rejected if np.min(np.abs(crit - t)) < guard else kept).append(t)
    if len(kept) < deg + 1:
        raise InvalidParameter(f"need at least {deg + 1} samples, got {len(kept)}")
    samples = []
    for t in kept:
        pm = period_matrix(h, t, basis_at(h, basis, t), tol, workers=workers)
        samples.append((t, pm.det))
    ts = np.array([s[0] for s in samples])
    ds = np.array([s[1] for s in samples])
    center = complex(np.mean(ts))
    radius = float(np.max(np.abs(ts - center))) or 1.0
    coeffs, resid, lead, roots = _fit(ts, ds, deg, center, radius)
    return DetFit(samples, coeffs, resid, complex(lead), roots, rejected, center, radius)


def match_roots(roots: np.ndarray, values: np.ndarray, cluster: float = 1e-3):
    """Pair fitted roots with critical values.

    Groups of (nearly) equal critical values are compared through the
    centroid of the roots assigned to them, since a multiple root splits
    into a small cluster under perturbation.

    Returns
    -------
    list of (critical value, matched root, distance), and the max distance.
    """
    roots = np.asarray(roots, dtype=complex)
    values = np.asarray(values, dtype=complex)
    row, col = linear_sum_assignment(np.abs(values[:, None] - roots[None, :]))
    assigned = roots[col[np.argsort(row)]]
    table = []
    used = np.zeros(len(values), bool)
    for i, v in enumerate(values):
        if used[i]:
            continue
        grp = np.abs(values - v) <= cluster * max(1.0, abs(v))
        grp &= ~used
        used |= grp
        centroid = complex(np.mean(assigned[grp]))
        vc = complex(np.mean(values[grp]))
        table.append((vc, centroid, abs(centroid - vc), int(grp.sum())))
    return table, max(r[2] for r in table)


@dataclass
class VerifyConfig:
    quad_tol: float = 1e-12
    fit_tol: float = 1e-6
    root_tol: float = 1e-5
    sign_tol: float = 1e-4
    center: complex = 1.0
    radius: float = 0.2
    samples: int | None = None
    delta: float | None = None
    steps: int = 16
    workers: int | None = None

    def sample_points(self, n: int) -> np.ndarray:
        m = self.samples or 2 * (n * n + 1)
        return self.center + self.radius * np.exp(2j * np.pi * (np.arange(m) + 0.5) / m)


PROFILES = {
    "default": {},
    "fast": {"quad_tol": 1e-10, "fit_tol": 1e-5, "root_tol": 1e-4, "sign_tol": 1e-3},
    "strict": {"quad_tol": 1e-13, "fit_tol": 1e-7, "root_tol": 1e-6, "sign_tol": 1e-5},
}


def config_from_env(**overrides) -> VerifyConfig:
    """Config from the ``ABELDET_PROFILE`` profile, then explicit overrides."""
    name = os.environ.get("ABELDET_PROFILE", "default")
    if name not in PROFILES:
        raise InvalidParameter(f"unknown tolerance profile {name!r}")
    kw = dict(PROFILES[name])
    kw.update({k: v for k, v in overrides.items() if v is not None})
    return VerifyConfig(**kw)


@dataclass
class VerificationReport:
    polynomial: str
    n: int
    config: dict
    stage: str = "done"
    error: str | None = None
    fit_residual: float | None = None
    polynomiality: bool = False
    root_table: list = field(default_factory=list)
    root_distance: float | None = None
    roots_match: bool = False
    leading: complex | None = None
    closed_form: complex | None = None
    ratio: complex | None = None
    sign: int | None = None
    constant_match: bool = False
    samples: list = field(default_factory=list)
    coefficients: list = field(default_factory=list)
    rejected: list = field(default_factory=list)
    provenance: str = ""

    @property
    def passed(self) -> bool:
        return self.error is None and self.polynomiality and self.roots_match and self.constant_match

    def to_dict(self) -> dict:
        def c(z):
            return None if z is None else [complex(z).real, complex(z).imag]
        return {
            "schema_version": SCHEMA_VERSION,
            "polynomial": self.polynomial,
            "n": self.n,
            "passed": self.passed,
            "stage": self.stage,
            "error": self.error,
            "tolerances": self.config,
            "polynomiality": {"pass": self.polynomiality, "residual": self.fit_residual},
            "roots": {"pass": self.roots_match, "max_distance": self.root_distance,
                      "table": [{"critical_value": c(v), "fitted_root": c(r), "distance": d,
                                 "multiplicity": k} for v, r, d, k in self.root_table]},
            "constant": {"pass": self.constant_match, "leading": c(self.leading),
                         "closed_form": c(self.closed_form), "ratio": c(self.ratio),
                         "sign": self.sign},
            "samples": [{"t": c(t), "det": c(d)} for t, d in self.samples],
            "coefficients": [c(z) for z in self.coefficients],
            "rejected": [c(z) for z in self.rejected],
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t_re", "t_im", "det_re", "det_im"])
        for t, d in self.samples:
            w.writerow([repr(t.real), repr(t.imag), repr(d.real), repr(d.imag)])
        return buf.getvalue()


def prepare_basis(h: BivarPoly, t0: complex = 1.0, *, delta: float | None = None,
                  steps: int = 16) -> CycleBasis:
    """A cycle basis of ``{h = t0}``: the Fermat one, deformed to ``h`` if needed."""
    n = h.degree - 1
    if n < 1:
        raise InvalidParameter("degree must be at least 2")
    F = BivarPoly.fermat(n)
    if h == F:
        return fermat_basis(n, delta or 1e-2, t0)
    base = fermat_basis(n, delta or deformation_delta(n), t0)
    return deform_basis(base, F, h, t0, steps)


def verify(h: BivarPoly, config: VerifyConfig | None = None, *, label: str | None = None) -> VerificationReport:
    """Check that the period determinant of ``h`` is ``C(H) prod (t - a_i)`` up to sign."""
    cfg = config or VerifyConfig()
    n = (h.degree or 0) - 1
    rep = VerificationReport(label or repr(h), n, _jsonable(asdict(cfg)))
    try:
        rep.stage = "closed-form"
        H = h.top()
        C = C_of_H(H)
        rep.closed_form = C.value
        rep.stage = "basis"
        basis = prepare_basis(h, cfg.center, delta=cfg.delta, steps=cfg.steps)
        rep.provenance = basis.provenance
        rep.stage = "samples"
        fit = det_samples(h, basis, cfg.sample_points(n), cfg.quad_tol, workers=cfg.workers)
        rep.samples = fit.samples
        rep.coefficients = list(fit.coefficients)
        rep.rejected = fit.rejected
        rep.stage = "polynomiality"
        rep.fit_residual = fit.residual
        rep.polynomiality = fit.residual < cfg.fit_tol
        rep.stage = "roots"
        crit = critical_data(h).values
        rep.root_table, rep.root_distance = match_roots(fit.roots, crit)
        rep.roots_match = rep.root_distance < cfg.root_tol
        rep.stage = "constant"
        rep.leading = fit.leading
        rep.ratio = fit.leading / C.value
        s = SignAmbiguous(fit.leading).sign_against(C, rtol=cfg.sign_tol)
        rep.sign = s
        rep.constant_match = s is not None
        rep.stage = "done"
    except AbeldetError as exc:
        rep.error = f"{type(exc).__name__}: {exc}"
    return rep


def _jsonable(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, complex):
            v = [v.real, v.imag]
        out[k] = v
    return out
