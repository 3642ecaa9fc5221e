"""Command-line interface.

Exit codes: 0 pass, 1 verification failed, 2 input error, 3 numerical failure.
Reports are JSON with sorted keys and a ``schema_version`` field.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .closedform import C_of_H, build_E, c_constant
from .errors import (AbeldetError, InvalidHomotopy, InvalidParameter, NongenericInput,
                     PolySyntaxError, UnsupportedChart)
from .parsing import parse_complex, parse_poly
from .periods import (SCHEMA_VERSION, basis_at, config_from_env, period_matrix,
                      prepare_basis, verify)
from .polyring import BivarPoly, critical_data
from .specialfn import identity_suite

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
IDENTITY_TOL = 1e-9

_INPUT_ERRORS = (InvalidParameter, PolySyntaxError, UnsupportedChart, NongenericInput,
                 InvalidHomotopy)


def _c(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _emit(doc: dict, out: str | None):
    doc = {"schema_version": SCHEMA_VERSION, **doc}
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_closed_form(args) -> int:
    ps = parse_poly(args.poly)
    ps.require_chart()
    H = ps.poly.top()
    C = C_of_H(H)
    _emit({
        "command": "closed-form",
        "polynomial": args.poly,
        "n": ps.n,
        "sigma": _c(ps.checks["sigma"]),
        "det_E": {str(k): _c(build_E(H, k).det()) for k in range(1, ps.n)},
        "c_n": _c(c_constant(ps.n)),
        "C": [_c(C.value), _c(-C.value)],
        "note": "C(H) is defined up to sign; sqrt(Sigma) on the principal branch",
    }, args.out)
    return EXIT_PASS


def cmd_critical(args) -> int:
    ps = parse_poly(args.poly)
    cd = critical_data(ps.poly)
    rows = [{"x": _c(p[0]), "y": _c(p[1]), "value": _c(v), "multiplicity": int(m),
             "residual": float(r)}
            for p, v, m, r in zip(cd.points, cd.values, cd.multiplicity, cd.residuals)]
    _emit({"command": "critical", "polynomial": args.poly, "n": ps.n,
           "critical": rows}, args.out)
    return EXIT_PASS


def cmd_periods(args) -> int:
    ps = parse_poly(args.poly)
    ps.require_chart()
    h = ps.poly
    t = parse_complex(args.t)
    if args.basis == "fermat" and h != BivarPoly.fermat(ps.n):
        raise InvalidParameter("--basis fermat needs h = x^(n+1) + y^(n+1); use --basis deform")
    crit = critical_data(h).values
    if np.min(np.abs(crit - t)) < 1e-6 * max(1.0, abs(t)):
        raise InvalidParameter(f"t={t} is a critical value: the level curve is singular")
    cfg = config_from_env(quad_tol=args.tol)
    basis = basis_at(h, prepare_basis(h, 1.0), t)
    pm = period_matrix(h, t, basis, cfg.quad_tol, workers=args.workers)
    _emit({
        "command": "periods", "polynomial": args.poly, "n": ps.n, "t": _c(t),
        "basis": basis.provenance,
        "entries": [[_c(z) for z in row] for row in pm.entries],
        "errors": pm.errors.tolist(),
        "det": _c(pm.det), "det_error": pm.det_error, "condition": pm.condition,
        "partial": pm.partial,
    }, args.out)
    return EXIT_PASS


def cmd_verify(args) -> int:
    ps = parse_poly(args.poly)
    ps.require_chart()
    cfg = config_from_env(
        quad_tol=args.tol, fit_tol=args.fit_tol, root_tol=args.root_tol,
        sign_tol=args.sign_tol, samples=args.samples, workers=args.workers,
        center=parse_complex(args.center) if args.center else None, radius=args.radius)
    rep = verify(ps.poly, cfg, label=args.poly)
    doc = rep.to_dict()
    doc["command"] = "verify"
    doc.pop("schema_version")
    _emit(doc, args.out)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(rep.to_csv())
    if rep.error is not None:
        return EXIT_INPUT if rep.error.split(":")[0] in {e.__name__ for e in _INPUT_ERRORS} \
            else EXIT_NUMERIC
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_identities(args) -> int:
    if args.n < 1:
        raise InvalidParameter("--n must be >= 1")
    rows = identity_suite(args.n)
    ok = all(r.residual < args.tol for r in rows)
    if args.format == "table":
        width = max(len(r.name) for r in rows)
        for r in rows:
            flag = "ok" if r.residual < args.tol else "FAIL"
            print(f"{r.name:<{width}}  n={r.n}  {r.residual:.3e}  {flag}")
    else:
        _emit({"command": "identities", "n": args.n, "tolerance": args.tol, "passed": ok,
               "checks": [{"name": r.name, "residual": r.residual} for r in rows]}, args.out)
    return EXIT_PASS if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="abeldet", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, poly=True):
        if poly:
            p.add_argument("--poly", required=True, help="polynomial, e.g. 'x^3+y^3-3x-6y'")
        p.add_argument("--out", help="write the JSON report here instead of stdout")

    p = sub.add_parser("closed-form", help="Sigma, det E_{n,k}, c_n and C(H)")
    common(p)
    p.set_defaults(func=cmd_closed_form)

    p = sub.add_parser("critical", help="critical points and values")
    common(p)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("periods", help="period matrix and determinant at one level")
    common(p)
    p.add_argument("--t", required=True, help="level value, e.g. 1 or 0.9+0.1i")
    p.add_argument("--basis", choices=["fermat", "deform"], default="deform")
    p.add_argument("--tol", type=float)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_periods)

    p = sub.add_parser("verify", help="fit the determinant polynomial and compare with C(H)")
    common(p)
    p.add_argument("--samples", type=int)
    p.add_argument("--tol", type=float, help="quadrature tolerance")
    p.add_argument("--fit-tol", type=float)
    p.add_argument("--root-tol", type=float)
    p.add_argument("--sign-tol", type=float)
    p.add_argument("--center", help="center of the sample circle in t")
    p.add_argument("--radius", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--csv", help="also write (t, det) samples as CSV")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("identities", help="two-route checks of the Fermat closed forms")
    common(p, poly=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol", type=float, default=IDENTITY_TOL)
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.set_defaults(func=cmd_identities)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"abeldet: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (AbeldetError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"abeldet: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
