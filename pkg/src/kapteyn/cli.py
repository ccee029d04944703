"""Command-line front end.

Exit codes: 0 on success, 2 when ``audit`` or ``coeffs verify`` finds a
mismatch, 1 on usage or domain errors.  The default tolerance can be set
with the ``KAPTEYN_TOL`` environment variable.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import closed, radiation
from .direct import X_MAX, SeriesSpec, sum_integral, sum_series
from .errors import KapteynError
from .transcendental import asymptotic, integrals, tables
from .transcendental.integrands import IntegrandParams

TOL_ENV = "KAPTEYN_TOL"
MAX_GRID = 100_000
MACHINE_DIGITS = 17
TABLE_DIGITS = 8
AUDIT_GRID = tuple(round(0.05 * k, 2) for k in range(1, 19))
AUDIT_REL_TOL = 1e-10
AUDIT_REPR_TOL = 1e-7


class UsageError(Exception):
    """Malformed command line."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _default_tol(fallback: float = 1e-12) -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return fallback
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV}={raw!r} is not a number") from None


# argument helpers ------------------------------------------------------------

def parse_grid(text: str) -> np.ndarray:
    """``START:STOP:COUNT`` to an ascending array of points."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must look like START:STOP:COUNT, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"grid must look like START:STOP:COUNT, got {text!r}") from None
    if not 1 <= count <= MAX_GRID:
        raise UsageError(f"grid count must lie in [1, {MAX_GRID}], got {count}")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise UsageError("grid bounds must be finite")
    return np.linspace(start, stop, count)


def _points(args, name: str = "x") -> list:
    grid = getattr(args, "grid", None)
    val = getattr(args, name, None)
    if grid is not None and val is not None:
        raise UsageError(f"give either --{name} or --grid, not both")
    if grid is not None:
        return [float(v) for v in parse_grid(grid)]
    if val is None:
        raise UsageError(f"one of --{name} or --grid is required")
    return [float(val)]


def _deriv(text: str):
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--deriv must be an integer or a pair like 1,1, got {text!r}") from None
    return vals[0] if len(vals) == 1 else vals


def _spec_from_args(args) -> SeriesSpec:
    d = _deriv(args.deriv)
    if args.family == "bilinear" and isinstance(d, int):
        d = (d, d)
    return SeriesSpec(args.family, args.nu, args.alternating, args.parity, args.a, d, Fraction(args.scale))


def _evaluate(fn, xs: list, workers: int) -> list:
    """Evaluate ``fn`` on every point; rows come back sorted by ``x``."""
    if len(xs) == 1 or workers <= 1:
        rows = [fn(x) for x in xs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(fn, xs))
    return sorted(rows, key=lambda r: r["x"])


# output ----------------------------------------------------------------------

def fmt_machine(v) -> str:
    if isinstance(v, float):
        return format(v, f".{MACHINE_DIGITS}g")
    return "" if v is None else str(v)


def fmt_human(v) -> str:
    if isinstance(v, float):
        text = format(v, f".{TABLE_DIGITS}g")
        return text if any(ch in text for ch in ".ein") else text + ".0"
    return "" if v is None else str(v)


def _json_text(obj) -> str:
    """JSON with every float rendered at 17 significant digits."""
    floats = []

    def walk(o):
        if isinstance(o, dict):
            return {k: walk(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [walk(v) for v in o]
        if isinstance(o, (float, np.floating)):
            floats.append(float(o))
            return f"\x00{len(floats) - 1}\x00"
        if isinstance(o, np.integer):
            return int(o)
        return o

    text = json.dumps(walk(obj), indent=2)
    for i, v in enumerate(floats):
        rendered = fmt_machine(v) if math.isfinite(v) else "null"
        text = text.replace(f'"\\u0000{i}\\u0000"', rendered, 1)
    return text


def _columns(rows: list) -> list:
    cols = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols


def render(command: str, params: dict, rows: list, fmt: str, audit: dict | None = None) -> str:
    if fmt == "json":
        doc = {"command": command, "params": params, "results": rows}
        if audit is not None:
            doc["audit"] = audit
        return _json_text(doc) + "\n"
    cols = _columns(rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([fmt_machine(r.get(c)) for c in cols])
        return buf.getvalue()
    cells = [[fmt_human(r.get(c)) for c in cols] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    if audit is not None:
        lines.append("")
        lines.append(f"checks: {audit['checks']}  failures: {len(audit['failures'])}  "
                     f"max_rel_dev: {fmt_human(audit['max_rel_dev'])}")
        lines += [f"FAIL {f}" for f in audit["failures"]]
    return "\n".join(lines) + "\n"


# subcommands -----------------------------------------------------------------

def cmd_sum(args) -> tuple:
    spec = _spec_from_args(args)
    xs = _points(args)

    def one(x):
        if args.integrate:
            r = sum_integral(spec, x, args.tol, x_max=args.x_max)
        else:
            r = sum_series(spec, x, args.tol, x_max=args.x_max, precision=args.precision)
        return {"x": x, "value": r.value, "error": r.abs_error_estimate, "method": r.method, "terms": r.terms_used}

    params = {"spec": spec.to_dict(), "tol": args.tol, "integrate": args.integrate}
    return params, _evaluate(one, xs, args.workers), None, 0


def cmd_closed(args) -> tuple:
    if args.action == "list":
        rows = [{"id": e.id, "series": e.spec.describe(), "closed_form": str(e.expression),
                 "provenance": e.provenance} for e in closed.REGISTRY.values()]
        return {}, rows, None, 0
    if args.id is None:
        raise UsageError("closed eval needs --id")
    entry = closed.get_entry(args.id)
    xs = _points(args)
    rows = _evaluate(lambda x: {"x": x, "value": closed.eval_entry(entry, x), "error": 0.0,
                                "method": f"closed/{entry.id}"}, xs, args.workers)
    return {"id": entry.id, "series": entry.spec.describe()}, rows, None, 0


def cmd_integral(args) -> tuple:
    kind, variant, tol = args.kind, args.variant, args.tol
    if kind == "aux":
        xs = _points(args, "c")

        def one(c):
            return {"x": c, "value": integrals.aux_integral(variant, c, args.method or "closed"),
                    "error": 0.0, "method": f"aux/{args.method or 'closed'}"}
    else:
        xs = _points(args)

        def one(x):
            if kind == "log":
                v = integrals.log_integral(variant, IntegrandParams(x, args.a), tol)
            elif kind == "cot":
                v = integrals.cot_integral(variant, IntegrandParams(x, args.a), tol)
            elif kind == "csc2":
                v = integrals.csc2_integral(variant, x, tol, args.method or "auto")
            else:
                v = integrals.regularized_jprime_sum(variant, x, tol)
            return {"x": x, "value": v, "error": tol, "method": f"{kind}/{variant}"}

    params = {"kind": kind, "variant": variant, "tol": tol}
    return params, _evaluate(one, xs, args.workers), None, 0


def _coeff_text(c) -> str:
    return str(c).replace("z", "a") if not isinstance(c, Fraction) else str(c)


def cmd_coeffs(args) -> tuple:
    ids = [args.id] if args.id else tables.table_ids()
    if args.action == "list":
        rows = [{"id": t.id, "description": t.description, "terms": len(t.coefficients), "step": t.step,
                 "prefactor": str(t.prefactor())} for t in (tables.get_table(i) for i in ids)]
        return {}, rows, None, 0
    if args.action == "dump":
        rows = []
        for i in ids:
            t = tables.get_table(i)
            for j, c in enumerate(t.coefficients):
                rows.append({"id": t.id, "index": t.start + j, "power": (t.start + j) * t.step,
                             "coefficient": _coeff_text(c), "prefactor": str(t.prefactor())})
        return {"ids": ids}, rows, None, 0
    if args.action == "eval":
        if args.id is None:
            raise UsageError("coeffs eval needs --id")
        xs = _points(args)
        rows = _evaluate(lambda x: {"x": x, "value": tables.eval_coeff_table(args.id, x, args.order, args.a),
                                    "error": tables.truncation_bound(args.id, x, args.a),
                                    "method": f"table/{args.id}"}, xs, args.workers)
        return {"id": args.id, "order": args.order}, rows, None, 0
    rows, failures = [], []
    for i in ids:
        for chk in tables.verify_table(i):
            ok = chk.ok
            rows.append({"id": i, "power": chk.power, "printed": _coeff_text(chk.printed),
                         "exact": _coeff_text(chk.exact), "status": "PASS" if ok else "FAIL"})
            if not ok:
                failures.append(f"{i} x^{chk.power}: printed {_coeff_text(chk.printed)}, exact {_coeff_text(chk.exact)}")
    audit = {"checks": len(rows), "failures": failures, "max_rel_dev": 0.0 if not failures else 1.0}
    return {"ids": ids}, rows, audit, 2 if failures else 0


def cmd_asym(args) -> tuple:
    if args.w is not None:
        if args.x is not None or args.grid is not None:
            raise UsageError("give --w or --x/--grid, not both")
        if not 0.0 < args.w < 1.0:
            raise UsageError("--w (= 1 - x^2) must lie in (0, 1)")
        xs = [math.sqrt(1.0 - args.w)]
    else:
        xs = _points(args)

    def one(x):
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", asymptotic.AsymptoticRangeWarning)
            r = asymptotic.asym_eval(args.id, x)
        row = {"x": x, "value": r.value, "error": None, "method": f"asym/{args.id}",
               "in_range": r.in_range}
        if args.reference:
            ref = asymptotic.reference_value(args.id, x, args.tol)
            row.update(reference=ref, ratio=ref / r.value)
        return row

    return {"id": args.id}, _evaluate(one, xs, args.workers), None, 0


def cmd_radiation(args) -> tuple:
    if args.gamma is not None:
        if args.field is None:
            raise UsageError("--gamma needs --field")
        t = radiation.lab_lifetime(args.gamma, args.field, args.branch or "high", args.exact_momentum)
        row = {"x": args.gamma, "value": t, "error": None, "method": f"lifetime/{args.branch or 'high'}"}
        return {"field": args.field}, [row], None, 0
    if args.mode == "quantum":
        if args.chi is None:
            raise UsageError("quantum mode needs --chi")
        beta = args.beta if args.beta is not None else 0.0
        out = radiation.evaluate(radiation.RadiationInput(beta, 1.0, args.chi, args.time, "quantum"))
        return {"mode": "quantum"}, [out], None, 0
    xs = _points(args, "beta")

    def one(b):
        out = radiation.evaluate(radiation.RadiationInput(b, args.omega_h, 0.0, args.time, "classical"), args.method)
        return {"x": b, "value": out["P_hat"], "error": out["P_hat_error"], "method": out["method"],
                "rate": out["rate"], "survival": out["survival"]}

    params = {"mode": "classical", "omega_H": args.omega_h, "time": args.time}
    return params, _evaluate(one, xs, args.workers), None, 0


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def run_audit(quick: bool = False) -> tuple:
    """Cross-validate every closed form, table and representation against direct summation."""
    rows, failures = [], []
    max_dev = 0.0
    grid = AUDIT_GRID[1::3] if quick else AUDIT_GRID

    def record(check, dev, limit, detail=""):
        nonlocal max_dev
        ok = dev <= limit
        max_dev = max(max_dev, dev) if math.isfinite(dev) else max_dev
        rows.append({"check": check, "deviation": float(dev), "limit": float(limit),
                     "status": "PASS" if ok else "FAIL"})
        if not ok:
            failures.append(f"{check}{': ' + detail if detail else ''}")

    for eid, entry in closed.REGISTRY.items():
        devs = []
        for x in grid:
            direct = sum_series(entry.spec, x, 1e-14).value
            devs.append(_rel(direct, closed.eval_entry(entry, x)))
        record(f"closed {eid} vs direct", max(devs), AUDIT_REL_TOL)
    for eid, ok in closed.derivation_closure().items():
        record(f"derivation {eid}", 0.0 if ok else 1.0, 0.0)
    for name, ok in closed.identity_checks().items():
        record(f"identity {name}", 0.0 if ok else 1.0, 0.0)
    for tid in tables.table_ids():
        bad = [c for c in tables.verify_table(tid) if not c.ok]
        detail = "; ".join(f"x^{c.power} printed {_coeff_text(c.printed)} exact {_coeff_text(c.exact)}" for c in bad)
        record(f"table {tid} coefficients", float(len(bad)), 0.0, detail)
        a = 0.5 if tables.get_table(tid).symbolic_a else None
        v = tables.eval_coeff_table(tid, 0.1, a=a)
        o = tables.eval_table_oracle(tid, 0.1, a=a)
        record(f"table {tid} truncation at x=0.1", abs(v - o), tables.truncation_bound(tid, 0.1, a))
    reps = [
        ("log all_m", lambda x: integrals.log_integral("all_m", IntegrandParams(x)), SeriesSpec(nu=-1)),
        ("log even", lambda x: integrals.log_integral("even", IntegrandParams(x)), SeriesSpec(nu=-1, parity="even")),
        ("cot all_m", lambda x: integrals.cot_integral("all_m", IntegrandParams(x)), SeriesSpec(deriv=1)),
        ("cot even", lambda x: integrals.cot_integral("even", IntegrandParams(x)), SeriesSpec(parity="even", deriv=1)),
        ("csc2 all_m", lambda x: integrals.csc2_integral("all_m", x), SeriesSpec(nu=1, deriv=2)),
        ("csc2 even", lambda x: integrals.csc2_integral("even", x), SeriesSpec(nu=1, parity="even", deriv=2)),
    ]
    rep_grid = (0.1, 0.5, 0.9) if quick else (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    for name, fn, spec in reps:
        dev = max(abs(fn(x) - sum_series(spec, x, 1e-13).value) for x in rep_grid)
        record(f"integral {name} vs direct", dev, AUDIT_REPR_TOL)
    audit = {"checks": len(rows), "failures": failures, "max_rel_dev": max_dev}
    return rows, audit


def cmd_audit(args) -> tuple:
    rows, audit = run_audit(args.quick)
    return {"quick": args.quick}, rows, audit, 2 if audit["failures"] else 0


# parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    tol = _default_tol()
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("table", "csv", "json"), default="table")
    common.add_argument("--tol", type=float, default=tol, help=f"tolerance (default from ${TOL_ENV} or 1e-12)")
    common.add_argument("--workers", type=int, default=min(8, os.cpu_count() or 1))

    p = _Parser(prog="kapteyn", description="Evaluate and cross-check Kapteyn series.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def grid_args(sp, name="x"):
        sp.add_argument(f"--{name}", type=float)
        sp.add_argument("--grid", help="START:STOP:COUNT")

    s = sub.add_parser("sum", parents=[common], help="direct summation")
    s.add_argument("--family", choices=("linear", "bilinear"), default="linear")
    s.add_argument("--nu", type=int, default=0)
    s.add_argument("--parity", choices=("all", "even", "odd"), default="all")
    s.add_argument("--alternating", action="store_true")
    s.add_argument("--a", type=float, default=1.0)
    s.add_argument("--deriv", default="0", help="d, or d1,d2 for bilinear")
    s.add_argument("--scale", default="1")
    s.add_argument("--x-max", type=float, default=X_MAX)
    s.add_argument("--precision", choices=("auto", "float", "mp"), default="auto")
    s.add_argument("--integrate", action="store_true", help="integrate the series from 0 to x term by term")
    grid_args(s)

    c = sub.add_parser("closed", parents=[common], help="closed-form registry")
    c.add_argument("action", choices=("list", "eval"))
    c.add_argument("--id")
    grid_args(c)

    i = sub.add_parser("integral", parents=[common], help="integral representations")
    i.add_argument("--kind", choices=("log", "cot", "csc2", "jprime", "aux"), required=True)
    i.add_argument("--variant", required=True)
    i.add_argument("--a", type=float, default=1.0)
    i.add_argument("--c", type=float, help="shift for the auxiliary integrals")
    i.add_argument("--method")
    grid_args(i)

    k = sub.add_parser("coeffs", parents=[common], help="power-series tables")
    k.add_argument("action", choices=("list", "dump", "verify", "eval"))
    k.add_argument("--id")
    k.add_argument("--order", type=int)
    k.add_argument("--a", type=float)
    grid_args(k)

    a = sub.add_parser("asym", parents=[common], help="x -> 1 asymptotics")
    a.add_argument("--id", required=True, choices=asymptotic.asym_ids())
    a.add_argument("--w", type=float, help="1 - x^2")
    a.add_argument("--reference", action="store_true", help="also compute the accurate value and the ratio")
    grid_args(a)

    u = sub.add_parser("audit", parents=[common], help="full cross-validation matrix")
    u.add_argument("--quick", action="store_true")

    r = sub.add_parser("radiation", parents=[common], help="radiation probability and lifetime")
    r.add_argument("--mode", choices=("classical", "quantum"), default="classical")
    r.add_argument("--method", choices=("numeric", "series"), default="numeric")
    r.add_argument("--beta", type=float)
    r.add_argument("--grid")
    r.add_argument("--omega-h", type=float, default=1.0)
    r.add_argument("--chi", type=float)
    r.add_argument("--time", type=float, default=0.0)
    r.add_argument("--gamma", type=float, help="E/m for the laboratory lifetime")
    r.add_argument("--field", type=float, help="field in units of m^2/e")
    r.add_argument("--branch", choices=("low", "high"))
    r.add_argument("--exact-momentum", action="store_true")
    return p


COMMANDS = {
    "sum": cmd_sum,
    "closed": cmd_closed,
    "integral": cmd_integral,
    "coeffs": cmd_coeffs,
    "asym": cmd_asym,
    "audit": cmd_audit,
    "radiation": cmd_radiation,
}


def run(argv=None, out=None, err=None) -> int:
    """Run the command line; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        params, rows, audit, code = COMMANDS[args.command](args)
        out.write(render(args.command, params, rows, args.format, audit))
        return code
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except (KapteynError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
