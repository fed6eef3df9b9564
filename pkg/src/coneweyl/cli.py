"""Batch driver: verification suites and on-demand kernel/field computations
with machine-readable reports.

Exit codes: 0 all checks pass, 1 verification failure, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone

import numpy as np

from .cone import ConeFunction, HyperboloidPoint, coulomb_c
from .errors import ConeWeylError
from .gns import gns_inner, gram
from .lorentz import (
    CasimirFamilyPoint,
    _h_data,
    axis_residual,
    casimir2_residual,
    hyperbolic_kernel,
    kernel_family,
    residual_scale,
)
from .params import Params
from .sampling import random_hyperboloid, smooth_function
from .verify import SUITES, report_dict, run_suite
from .weyl import SymplecticPair, weyl
from .cone import dsquare


class UsageError(Exception):
    pass


def _load_params(args) -> Params:
    base = {}
    if args.config:
        try:
            with open(args.config) as fh:
                base = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(base, dict):
            raise UsageError("config file must hold a JSON object")
    for key in ("lmax", "e", "kappa", "seed", "threads"):
        val = getattr(args, key, None)
        if val is not None:
            base[key] = val
    if getattr(args, "format", None):
        base["format"] = args.format
    try:
        return Params.from_dict(base)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad configuration: {exc}") from exc


def _emit(payload: dict, args, csv_rows=None, csv_header=None) -> None:
    fmt = args.format or "json"
    if fmt == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(csv_header)
        writer.writerows(csv_rows)
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _timestamp(args) -> str | None:
    if args.no_timestamp:
        return None
    return datetime.now(timezone.utc).isoformat()


def cmd_verify(args) -> int:
    params = _load_params(args)
    if args.suite not in SUITES + ("all",):
        raise UsageError(f"unknown suite {args.suite!r}")
    checks = run_suite(args.suite, params)
    rep = report_dict(args.suite, checks, params, _timestamp(args))
    rows = [[c["id"], c["residual"], c["tol"], c["pass"]] for c in rep["checks"]]
    _emit(rep, args, rows, ["id", "residual", "tol", "pass"])
    return 0 if rep["pass"] else 1


def _parse_chi(spec: str) -> list[float]:
    if ":" in spec:
        parts = [float(s) for s in spec.split(":")]
        if len(parts) != 3:
            raise UsageError("chi range must be start:stop:step")
        start, stop, step = parts
        if step <= 0:
            raise UsageError("chi step must be positive")
        return list(np.arange(start, stop + 1e-12, step))
    return [float(spec)]


def compute_kernel(args, params: Params):
    chis = _parse_chi(args.chi)
    rows = []
    rest = HyperboloidPoint.rest()
    for n in args.n:
        for chi in chis:
            v = HyperboloidPoint.boosted(chi, [0.0, 0.0, 1.0]) if chi > 0 else rest
            closed = hyperbolic_kernel(rest, v, n, params)
            lhs = gns_inner(
                weyl(ConeFunction.zeros(0, params.lmax), float(n) * coulomb_c(rest, params.e, params.lmax)),
                weyl(ConeFunction.zeros(0, params.lmax), float(n) * coulomb_c(v, params.e, params.lmax)),
                params,
            )
            rows.append(
                {
                    "chi": chi,
                    "n": n,
                    "closed_form": closed,
                    "quadrature": float(lhs.real),
                    "rel_err": abs(lhs.real - closed) / closed,
                }
            )
    payload = {"task": "kernel", "rows": rows}
    csv_rows = [[r["chi"], r["n"], r["closed_form"], r["quadrature"], r["rel_err"]] for r in rows]
    return payload, csv_rows, ["chi", "n", "closed_form", "quadrature", "rel_err"]


def compute_gram(args, params: Params):
    rng = params.stream("cli-gram")
    vecs = []
    for _ in range(args.size):
        pair = SymplecticPair.make(
            smooth_function(rng, params.lmax, 8, scale=0.5),
            (
                float(args.sector) * coulomb_c(random_hyperboloid(rng, 1.0), params.e, params.lmax)
                + dsquare(smooth_function(rng, params.lmax, 8, scale=0.5))
            ).real_part(),
            params.e,
        )
        vecs.append(weyl(pair.D, pair.c, params.e))
    rep = gram(vecs, params)
    payload = {"task": "gram", **rep.to_json_dict()}
    csv_rows = [[rep.min_eig, rep.psd, rep.tol]]
    return payload, csv_rows, ["min_eig", "psd", "tol"]


def compute_casimir(args, params: Params):
    x = np.asarray(args.x, dtype=float)
    v = HyperboloidPoint.rest() if args.v is None else HyperboloidPoint(np.asarray(args.v, float))
    try:
        pt = CasimirFamilyPoint(v, x, args.lam, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    fam = kernel_family(pt, params)
    data = _h_data(fam, v, params)
    scale = residual_scale(fam, data, params)
    res = casimir2_residual(fam, v, params, data)
    ax = axis_residual(fam, v, x, params, data=data)
    payload = {
        "task": "casimir",
        "residual": res,
        "axis_residuals": [float(a) for a in ax],
        "scale": scale,
        "pass": bool(res <= params.tol("casimir") * scale),
    }
    return payload, [[res, scale, payload["pass"]]], ["residual", "scale", "pass"]


def compute_field(args, params: Params):
    from . import fields as fields_mod

    if args.pair != "coulomb":
        raise UsageError(f"unknown field pair {args.pair!r}")
    if args.grid != "sphere":
        raise UsageError(f"unknown field grid {args.grid!r}")
    if not args.R > abs(args.t):
        raise UsageError("need R > |t| so the sphere stays outside the cone")
    L = params.fields_lmax
    rest = HyperboloidPoint.rest()
    pair = SymplecticPair.make(
        ConeFunction.zeros(0, L),
        (float(args.n) * coulomb_c(rest, params.e, L)).real_part(),
        params.e,
    )
    fp = params.with_(lmax=L)
    field = fields_mod.PhaseField(pair, rest, fp)

    xg, wg = np.polynomial.legendre.leggauss(6)
    phis = 2.0 * np.pi * np.arange(12) / 12
    rows = []
    flux = 0.0
    planes = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    for ui, wi in zip(xg, wg):
        s = math.sqrt(max(0.0, 1.0 - ui * ui))
        for ph in phis:
            m = np.array([s * math.cos(ph), s * math.sin(ph), ui])
            x = np.concatenate([[args.t], args.R * m])
            if args.quantity == "phase":
                rows.append([*x, field(x)])
                continue
            F = fields_mod.eval_em_field_general(x, field, rest, fp)
            rows.append([*x, *(float(F.plane(a, b)) for a, b in planes)])
            flux += (
                wi * (2.0 * np.pi / 12) * args.R**2 * float(np.dot(F.electric(), m))
            ) / (4.0 * math.pi)
    if args.quantity == "phase":
        header = ["t", "x", "y", "z", "S"]
        payload = {"task": "field", "quantity": "phase", "R": args.R, "t": args.t,
                   "n": args.n, "rows": rows}
    else:
        header = ["t", "x", "y", "z", "F01", "F02", "F03", "F12", "F13", "F23"]
        payload = {
            "task": "field",
            "quantity": "field",
            "R": args.R,
            "t": args.t,
            "n": args.n,
            "flux": flux,
            "expected": args.n * params.e,
            "rel_err": abs(flux - args.n * params.e) / max(params.e, abs(args.n * params.e)),
            "rows": rows,
        }
    return payload, rows, header


def cmd_compute(args) -> int:
    params = _load_params(args)
    fns = {
        "kernel": compute_kernel,
        "gram": compute_gram,
        "casimir": compute_casimir,
        "field": compute_field,
    }
    payload, rows, header = fns[args.task](args, params)
    ts = _timestamp(args)
    if ts is not None:
        payload["timestamp"] = ts
    _emit(payload, args, rows, header)
    return 0


def _add_common(sp):
    sp.add_argument("--config", help="JSON configuration file")
    sp.add_argument("--lmax", type=int)
    sp.add_argument("--e", type=float)
    sp.add_argument("--kappa", type=float)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--threads", type=int)
    sp.add_argument("--out", help="write the report to this path")
    sp.add_argument("--format", choices=("json", "csv"))
    sp.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="coneweyl",
        description="verification harness for the light-cone Weyl algebra model",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    vp = sub.add_parser("verify", help="run a module's identity battery")
    vp.add_argument("suite", choices=SUITES + ("all",))
    _add_common(vp)
    vp.set_defaults(fn=cmd_verify)

    cp = sub.add_parser("compute", help="compute kernels, grams, residuals, fields")
    csub = cp.add_subparsers(dest="task", required=True)

    kp = csub.add_parser("kernel", help="hyperbolic kernel along a rapidity ladder")
    kp.add_argument("--chi", required=True, help="value or start:stop:step")
    kp.add_argument("--n", type=int, nargs="+", default=[1])
    _add_common(kp)
    kp.set_defaults(fn=cmd_compute)

    gp = csub.add_parser("gram", help="random single-sector Gram matrix report")
    gp.add_argument("--size", type=int, default=8)
    gp.add_argument("--sector", type=int, default=1)
    _add_common(gp)
    gp.set_defaults(fn=cmd_compute)

    sp = csub.add_parser("casimir", help="family residuals at one parameter point")
    sp.add_argument("--x", type=float, nargs=4, required=True)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--v", type=float, nargs=4)
    sp.add_argument("--lam", type=float, default=0.0)
    _add_common(sp)
    sp.set_defaults(fn=cmd_compute)

    fp = csub.add_parser("field", help="field or phase values on a sphere, with flux")
    fp.add_argument("--pair", default="coulomb")
    fp.add_argument("--grid", default="sphere")
    fp.add_argument("--R", type=float, required=True)
    fp.add_argument("--t", type=float, default=0.0)
    fp.add_argument("--n", type=int, default=1)
    fp.add_argument("--quantity", choices=("field", "phase"), default="field")
    _add_common(fp)
    fp.set_defaults(fn=cmd_compute)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConeWeylError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
