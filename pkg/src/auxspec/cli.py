"""Command-line front end: ``auxspec {energy,table,fit,bound,oracle}``.

Exit status: 0 on success, 1 when a core module raises a domain or
convergence error, 2 for invalid flags or configuration.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import closed_form, fitkit, tables
from .aft_core import SolvableBase, minimize_field
from .error_bounds import error_report
from .errors import AuxspecError, DomainError
from .numeric_solver import (
    DEFAULT_MESH_SIZE,
    DEFAULT_TOLERANCE,
    RadialProblem,
    reference_table,
    solve_radial,
)
from .potentials import (
    LOG,
    LogPotential,
    PowerLawPotential,
    QuantumNumbers,
    dimensionless_prefactor,
    log_physical_energy,
)

METHODS = (
    "aft-harmonic",
    "aft-coulomb",
    "improved-bc1",
    "improved-bc2",
    "improved-bc3",
    "improved-bc4",
    "wkb",
    "airy",
    "oracle",
)
FORMATS = ("text", "csv", "json")
CONFIG_KEYS = {"mesh_size": int, "tolerance": float, "digits": int, "format": str, "fit_grid": list}
DEFAULTS = {
    "mesh_size": DEFAULT_MESH_SIZE,
    "tolerance": DEFAULT_TOLERANCE,
    "digits": 6,
    "format": "text",
    "fit_grid": list(fitkit.DEFAULT_FIT_GRID),
}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class OutputRecord:
    method: str
    lam: object
    n: int
    ell: int
    value: float
    aux: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown method tag {self.method!r}")
        if not math.isfinite(self.value):
            raise DomainError(f"{self.method} produced a non-finite value at (n, l) = ({self.n}, {self.ell})")

    def row(self):
        return {"method": self.method, "lambda": self.lam, "n": self.n, "l": self.ell, "value": self.value, **self.aux}


# ---------------------------------------------------------------- formatting


def _fmt(value, digits):
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (float, np.floating)):
        return format(float(value), f".{digits}g")
    return str(value)


def _json_value(value, digits):
    if isinstance(value, (float, np.floating)) and math.isfinite(value):
        return float(format(float(value), f".{digits}g"))
    return value


def render(rows, columns, fmt, digits) -> str:
    """Rows (dicts) as aligned text, CSV or JSON lines; missing keys print empty."""
    if fmt == "json":
        lines = [
            json.dumps({c: _json_value(r[c], digits) for c in columns if c in r}, sort_keys=False)
            for r in rows
        ]
        return "\n".join(lines) + ("\n" if lines else "")
    cells = [[_fmt(r.get(c), digits) for c in columns] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(cells)
        return buf.getvalue()
    widths = [max(len(c), *(len(row[i]) for row in cells)) if cells else len(c) for i, c in enumerate(columns)]
    out = ["  ".join(c.rjust(w) for c, w in zip(columns, widths)).rstrip()]
    out += ["  ".join(v.rjust(w) for v, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(out) + "\n"


def _record_columns(records):
    extra = sorted({k for r in records for k in r.aux})
    return ["method", "lambda", "n", "l", "value", *extra]


# ---------------------------------------------------------------- parsing


def parse_range(text: str):
    """'3' -> [3]; '0-3' or '0..3' -> [0, 1, 2, 3]; '0,2' -> [0, 2]."""
    values = []
    try:
        for part in text.split(","):
            part = part.strip()
            sep = ".." if ".." in part else ("-" if "-" in part else None)
            if sep:
                lo, hi = (int(x) for x in part.split(sep))
                if hi < lo:
                    raise ValueError
                values.extend(range(lo, hi + 1))
            else:
                values.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid index range {text!r}") from None
    if any(v < 0 for v in values):
        raise argparse.ArgumentTypeError(f"quantum numbers must be nonnegative: {text!r}")
    return sorted(set(values))


def _lambda_arg(text):
    try:
        return float(tables.parse_lambda(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid exponent {text!r}") from None


def load_config(path: Optional[str]) -> dict:
    path = path or os.environ.get("AUXSPEC_CONFIG")
    config = dict(DEFAULTS)
    if not path:
        return config
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    for key, value in data.items():
        if key not in CONFIG_KEYS:
            raise UsageError(f"unknown config key {key!r}; allowed: {sorted(CONFIG_KEYS)}")
        if not isinstance(value, CONFIG_KEYS[key]) and not (CONFIG_KEYS[key] is float and isinstance(value, int)):
            raise UsageError(f"config key {key!r} must be {CONFIG_KEYS[key].__name__}")
        config[key] = value
    if config["format"] not in FORMATS:
        raise UsageError(f"config format must be one of {FORMATS}")
    return config


def _settings(args):
    config = load_config(args.config)
    for key in ("mesh_size", "tolerance", "digits", "format"):
        value = getattr(args, key, None)
        if value is not None:
            config[key] = value
    if config["digits"] < 1:
        raise UsageError("--digits must be at least 1")
    return config


def _common(parser):
    parser.add_argument("--format", choices=FORMATS, default=None, help="output format (default text)")
    parser.add_argument("--digits", type=int, default=None, help="significant digits (default 6)")
    parser.add_argument("--config", default=None, help="JSON config file (or env AUXSPEC_CONFIG)")


def _numerics(parser):
    parser.add_argument("--mesh-size", dest="mesh_size", type=int, default=None)
    parser.add_argument("--tolerance", type=float, default=None)


def _potential_flags(parser):
    which = parser.add_mutually_exclusive_group(required=True)
    which.add_argument("--lambda", dest="lam", type=_lambda_arg, help="power-law exponent (e.g. 1, -0.5, 3/2)")
    which.add_argument("--log", action="store_true", help="logarithmic potential")


def build_parser():
    parser = argparse.ArgumentParser(prog="auxspec", description="Auxiliary-field bound-state energies.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("energy", help="energies of selected states by one or more methods")
    _potential_flags(p)
    p.add_argument("--m", type=float, default=None, help="mass (default 1)")
    p.add_argument("--a", type=float, default=None, help="strength (default 1)")
    p.add_argument("--b", type=float, default=None, help="log scale (log potential only; default 1)")
    p.add_argument("--dimensionless", action="store_true", help="m = 2, a = 1, b = 1")
    p.add_argument("--n", type=parse_range, default=[0])
    p.add_argument("--l", dest="ell", type=parse_range, default=[0])
    p.add_argument("--method", action="append", choices=METHODS, required=True)
    _numerics(p)
    _common(p)

    p = sub.add_parser("table", help="reproduce a reference table with deviations")
    p.add_argument("which", type=int, choices=(1, 2))
    _numerics(p)
    _common(p)

    p = sub.add_parser("fit", help="fit (b, c) against oracle values")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--lambda", dest="lam", type=_lambda_arg, action="append")
    which.add_argument("--grid", help="'default' or a comma-separated list of exponents (0 = log)")
    p.add_argument("--measure", choices=fitkit.MEASURES, default="absolute")
    p.add_argument("--emit-plot-data", nargs=2, metavar=("B_FILE", "C_FILE"), default=None)
    _numerics(p)
    _common(p)

    p = sub.add_parser("bound", help="error-bound report for one state")
    p.add_argument("--lambda", dest="lam", type=_lambda_arg, required=True)
    p.add_argument("--base", choices=[b.value for b in SolvableBase], required=True)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--l", dest="ell", type=int, default=0)
    _numerics(p)
    _common(p)

    p = sub.add_parser("oracle", help="dimensionless numerical eigenvalues")
    _potential_flags(p)
    p.add_argument("--n-max", dest="n_max", type=int, default=3)
    p.add_argument("--l", dest="ell", type=parse_range, default=[0])
    _numerics(p)
    _common(p)
    return parser


# ---------------------------------------------------------------- commands


def _oracle_slice(lam, ell, n_max, settings, cache):
    key = (ell, n_max)
    if key not in cache:
        problem = RadialProblem(LOG if lam == LOG else lam, ell, mesh_size=settings["mesh_size"])
        cache[key] = solve_radial(problem, n_max, settings["tolerance"])
    return cache[key]


def _energy_record(method, lam, pot, qn, n_max, settings, cache):
    is_log = lam == LOG
    scale = (lambda eps: log_physical_energy(eps, pot)) if is_log else (
        lambda eps: dimensionless_prefactor(pot) * eps
    )
    aux = {}
    if method.startswith("aft-"):
        base = SolvableBase(method[4:])
        if is_log:
            value = closed_form.log_energy(pot, qn, base)
            rho0 = closed_form.log_rho0(pot, qn, base)
        else:
            value = closed_form.aft_energy(pot, qn, base)
            rho0 = closed_form.aft_rho0(pot, qn, base)
        aux = {"rho0": rho0, "r0": minimize_field(pot, base, pot.m, qn).r0}
    elif method.startswith("improved-"):
        if is_log:
            value = scale(closed_form.improved_log_epsilon(qn, method))
        else:
            value = scale(closed_form.improved_epsilon(lam, qn, method))
    elif method == "wkb":
        if is_log:
            raise DomainError("the WKB formula is not available for the logarithmic potential")
        value = scale(closed_form.wkb_epsilon(lam, qn))
    elif method == "airy":
        if is_log or lam != 1 or qn.ell != 0:
            raise DomainError("the Airy estimate applies to lam = 1, l = 0 only")
        value = scale(closed_form.airy_epsilon(qn.n))
    else:
        sl = _oracle_slice(lam, qn.ell, n_max, settings, cache)
        value = scale(float(sl.eigenvalues[qn.n]))
        aux = {"estimate": float(sl.convergence_estimate[qn.n])}
    return OutputRecord(method, lam, qn.n, qn.ell, float(value), aux)


def cmd_energy(args, settings, parser):
    if args.dimensionless and any(v is not None for v in (args.m, args.a, args.b)):
        parser.error("--dimensionless excludes --m, --a and --b")
    if args.b is not None and not args.log:
        parser.error("--b applies to the logarithmic potential only")
    if args.dimensionless:
        m, a, b = 2.0, 1.0, 1.0
    else:
        m = 1.0 if args.m is None else args.m
        a = 1.0 if args.a is None else args.a
        b = 1.0 if args.b is None else args.b
    lam = LOG if args.log else args.lam
    pot = LogPotential(m, a, b) if args.log else PowerLawPotential(m, a, lam)
    n_max = max(args.n)
    records = []
    for method in sorted(set(args.method)):
        cache = {}
        for n in args.n:
            for ell in args.ell:
                records.append(_energy_record(method, lam, pot, QuantumNumbers(n, ell), n_max, settings, cache))
    return render([r.row() for r in records], _record_columns(records), settings["format"], settings["digits"])


def _table1_text(rows, digits):
    cols = ["lambda"]
    for c in ("bc3", "bc4", "wkb"):
        cols += [f"chi_{c}", f"published_{c}", f"reldev_{c}"]
    out = []
    for row in rows:
        rec = {"lambda": row.label}
        for c in ("bc3", "bc4", "wkb"):
            if row.published[c] is None:
                rec[f"chi_{c}"] = rec[f"published_{c}"] = rec[f"reldev_{c}"] = "-"
                continue
            ours = row.chi.get(c)
            rec[f"chi_{c}"] = "ERR" if ours is None else ours
            rec[f"published_{c}"] = float(row.published[c])
            dev = row.deviation(c)
            rec[f"reldev_{c}"] = "ERR" if dev is None else dev
        out.append(rec)
    return out, cols


def cmd_table(args, settings, parser):
    fmt, digits = settings["format"], settings["digits"]
    if args.which == 1:
        rows, cols = _table1_text(tables.table1(settings["mesh_size"], settings["tolerance"]), digits)
        return render(rows, cols, fmt, digits)
    cells = tables.table2(settings["mesh_size"], settings["tolerance"])
    if fmt != "text":
        rows = [
            {
                "l": c.ell,
                "line": c.line,
                "n": c.n,
                "value": "ERR" if c.value is None else c.value,
                "published": c.published,
                "deviation": "ERR" if c.value is None else c.deviation,
            }
            for c in cells
        ]
        return render(rows, ["l", "line", "n", "value", "published", "deviation"], fmt, digits)
    rows = []
    for ell in range(4):
        for line in tables.TABLE2_LINES:
            group = [c for c in cells if c.ell == ell and c.line == line]
            rec = {"l": ell if line == "num" else "", "line": line}
            for c in group:
                rec[f"n={c.n}"] = "ERR" if c.value is None else c.value
            devs = [abs(c.deviation) for c in group if c.value is not None]
            rec["max|dev|"] = max(devs) if len(devs) == len(group) else "ERR"
            rows.append(rec)
    return render(rows, ["l", "line", "n=0", "n=1", "n=2", "n=3", "max|dev|"], fmt, digits)


def _fit_lambdas(args, settings):
    if args.lam is not None:
        return list(args.lam)
    if args.grid == "default":
        return [float(x) for x in settings["fit_grid"]]
    try:
        return [0.0 if x.strip() == LOG else _lambda_arg(x.strip()) for x in args.grid.split(",")]
    except argparse.ArgumentTypeError as exc:
        raise UsageError(str(exc)) from None


def cmd_fit(args, settings, parser):
    lambdas = _fit_lambdas(args, settings)
    ref = reference_table(lambdas, fitkit.GRID, fitkit.GRID, settings["mesh_size"], settings["tolerance"])
    fits = fitkit.fit_grid(lambdas, ref, measure=args.measure)
    rows = [
        {"lambda": LOG if f.lam == 0 else f.lam, "b": f.b_opt, "c": f.c_opt, "chi": f.chi, "iterations": f.iterations}
        for f in fits
    ]
    fmt, digits = settings["format"], settings["digits"]
    text = render(rows, ["lambda", "b", "c", "chi", "iterations"], fmt, digits)
    if len(fits) >= 4:
        summary = []
        lam_f = [0.0 if f.lam == 0 else float(f.lam) for f in fits]
        for name, vals in (("b", [f.b_opt for f in fits]), ("c", [f.c_opt for f in fits])):
            hyp = fitkit.fit_hyperbola(list(zip(lam_f, vals)))
            p1, p2, p3, p4 = hyp.normalized(1.0)
            summary.append({"curve": name, "p1": p1, "p2": p2, "p3": p3, "p4": p4, "rms": hyp.residual})
        text += render(summary, ["curve", "p1", "p2", "p3", "p4", "rms"], fmt, digits)
    if args.emit_plot_data:
        b_rows, c_rows = fitkit.coefficient_curves(fits)
        header = "lambda optimal bc2 bc3 bc4"
        for path, data in zip(args.emit_plot_data, (b_rows, c_rows)):
            np.savetxt(path, data, fmt="%.10g", header=header)
    return text


def cmd_bound(args, settings, parser):
    lam = args.lam
    base = SolvableBase(args.base)
    qn = QuantumNumbers(args.n, args.ell)
    pot = PowerLawPotential(2.0, 1.0, lam)  # q^2/4 + sgn(lam)|x|^lam
    solution = minimize_field(pot, base, pot.m, qn)
    sl = solve_radial(RadialProblem(lam, qn.ell, mesh_size=settings["mesh_size"]), qn.n, settings["tolerance"])
    report = error_report(pot, base, pot.m, qn, solution, exact_energy=float(sl.eigenvalues[qn.n]))
    row = {
        "lambda": lam,
        "base": base.value,
        "n": qn.n,
        "l": qn.ell,
        "energy": report.energy,
        "exact": float(sl.eigenvalues[qn.n]),
        "relative_bound": report.relative_bound,
        "measured": report.measured_relative,
        "satisfied": report.bound_satisfied,
        "gap": report.gap_rhs,
        "mean_field_ratio": report.mean_field_ratio,
    }
    cols = list(row)
    return render([row], cols, settings["format"], settings["digits"])


def cmd_oracle(args, settings, parser):
    lam = LOG if args.log else args.lam
    if args.n_max < 0:
        parser.error("--n-max must be nonnegative")
    records = []
    for ell in args.ell:
        sl = _oracle_slice(lam, ell, args.n_max, settings, {})
        for n in range(args.n_max + 1):
            records.append(
                OutputRecord(
                    "oracle",
                    lam,
                    n,
                    ell,
                    float(sl.eigenvalues[n]),
                    {"estimate": float(sl.convergence_estimate[n]), "mesh_size": sl.mesh_size},
                )
            )
    records.sort(key=lambda r: (r.n, r.ell))
    return render([r.row() for r in records], _record_columns(records), settings["format"], settings["digits"])


COMMANDS = {"energy": cmd_energy, "table": cmd_table, "fit": cmd_fit, "bound": cmd_bound, "oracle": cmd_oracle}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = _settings(args)
        output = COMMANDS[args.command](args, settings, parser)
    except UsageError as exc:
        parser.error(str(exc))
    except AuxspecError as exc:
        print(f"auxspec: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(output)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
