"""Command-line front end.

Subcommands emit the figure datasets and verification reports as CSV or
JSON; when an output file is given, a PNG rendering of the dataset is
written alongside it (suppress with --no-plot).

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import povm
from .core import ModelParams
from .errors import ConfigError, PtlocError
from .extensions import q3_eigenvalue
from .verify import results_payload, run_all_checks

SCHEMA_VERSION = 1


def _fmt(x):
    """Round-trip decimal formatting (17 significant digits)."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def _write_csv(path, columns, rows):
    lines = [",".join(columns)]
    lines += [",".join(_fmt(v) for v in r) for r in rows]
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _write_json(path, payload):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _emit(args, command, columns, rows, meta):
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": {
            "mass": args.mass,
            "tau": args.tau,
            "phi": args.phi,
            "n_min": args.n_min,
            "n_max": args.n_max,
            "grid_points": args.grid_points,
            "tol": args.tol,
            "seed": args.seed,
        },
        "columns": columns,
        "rows": [[_fmt(v) for v in r] for r in rows],
        "meta": meta,
    }
    if args.format == "json":
        _write_json(args.output, payload)
    else:
        _write_csv(args.output, columns, rows)
    if args.output and args.plot:
        from .plotting import RENDERERS

        renderer = RENDERERS.get(command)
        if renderer is not None:
            png = _strip_suffix(args.output) + ".png"
            renderer(columns, rows, png)


def _strip_suffix(path):
    for suf in (".csv", ".json"):
        if path.endswith(suf):
            return path[: -len(suf)]
    return path


# ---------------------------------------------------------------------------
# Subcommand implementations


def cmd_figure1(args):
    if args.n_min > args.n_max:
        raise ConfigError("--n-min must not exceed --n-max")
    m = args.mass
    phis = np.linspace(-math.pi, math.pi, args.grid_points)[1:]
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        for phi in phis:
            rows.append((float(phi), n, m * q3_eigenvalue(n, float(phi), m)))
    meta = {"spacing_exact": _fmt(2.0 / m),
            "note": "m*z is dimensionless; spacing between rows of fixed phi"}
    _emit(args, "figure1", ["varphi", "n", "m_z"], rows, meta)
    return 0


def cmd_figure2(args):
    m = args.mass
    params = ModelParams(m)
    rows = []
    sums = {}
    for mtau in (0.0, 1.0, 2.0, 3.0):
        total = 0.0
        for n in range(args.n_min, args.n_max + 1):
            p = povm.hegerfeldt_pn(n, mtau / m, params)
            total += p
            rows.append((mtau, n, p))
        sums[str(mtau)] = {
            "partial_sum": _fmt(total),
            "tail_bound": _fmt(povm.hegerfeldt_tail_bound(
                max(abs(args.n_min), abs(args.n_max)), mtau / m, params)),
        }
    meta = {"sums": sums,
            "tolerance": None if args.tol is None else _fmt(args.tol)}
    _emit(args, "figure2", ["m_tau", "n", "P_n"], rows, meta)
    return 0


def cmd_figure3(args):
    m = args.mass
    params = ModelParams(m)
    rows = []
    for n in (0, 1, 2):
        for mtau in np.linspace(0.0, 4.0, args.grid_points):
            rows.append((n, float(mtau),
                         povm.hegerfeldt_pn(n, float(mtau) / m, params)))
    _emit(args, "figure3", ["n", "m_tau", "P_n"],
          rows, {"tolerance": None if args.tol is None else _fmt(args.tol)})
    return 0


def cmd_spectrum(args):
    m = args.mass
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        z = q3_eigenvalue(n, args.phi, m)
        rows.append((n, z, m * z))
    meta = {"phi": _fmt(args.phi), "spacing": _fmt(2.0 / m)}
    _emit(args, "spectrum", ["n", "z", "m_z"], rows, meta)
    return 0


def cmd_povm_prob(args):
    m = args.mass
    params = ModelParams(m)
    if args.observable == "position":
        spec = povm.LocalizedStateSpec(
            f_omega=lambda k: np.cos(math.pi * k), name="cos").normalized(params)
        zs = np.linspace(-8.0 / m, 8.0 / m, args.grid_points)
        rows = [(float(z), povm.position_povm_density(spec, float(z),
                                                      args.tau, 1, params))
                for z in zs]
        cols = ["z", "density"]
        meta = {"state": "band profile cos(pi k), normalized",
                "truncation_bound": _fmt(0.0)}
    else:
        from . import operators

        grid = operators.chebyshev_grid("radial_log", 400, -8.0, 8.0, m)
        psi = operators.gaussian_state(grid, 0.0, 0.8, window=False)
        psi.values /= psi.norm()
        ts = np.linspace(-12.0 / m, 12.0 / m, args.grid_points)
        rows = [(float(t), povm.time_povm_density(psi, float(t), args.tau,
                                                  1, params))
                for t in ts]
        cols = ["t", "density"]
        meta = {"state": "radial log-Gaussian (center 0, width 0.8), normalized"}
    _emit(args, "povm-prob", cols, rows, meta)
    return 0


def cmd_kernel(args):
    m = args.mass
    params = ModelParams(m)
    rows = []
    if args.observable == "position":
        for dz in np.linspace(0.05 / m, 10.0 / m, args.grid_points):
            comp = abs(povm.position_kernel_quad(dz, 0.0, args.tau, params))
            ana = abs(povm.position_kernel_closed(dz, 0.0, params))
            rows.append((float(dz), comp, ana, abs(comp - ana)))
        cols = ["delta_z", "computed", "analytic", "deviation"]
    else:
        for dt in np.linspace(0.1 / m, 6.0 / m, args.grid_points):
            k = povm.time_overlap_kernel(dt, 0.0, args.tau, 1, params)
            ana = -1.0 / (2 * math.pi * dt)
            rows.append((float(dt), k.imag, ana, abs(k.imag - ana)))
        cols = ["delta_t", "computed", "analytic", "deviation"]
    _emit(args, "kernel", cols, rows, {"tolerance": None if args.tol is None else _fmt(args.tol)})
    return 0


def cmd_tails(args):
    m = args.mass
    params = ModelParams(m)
    profiles = {
        "cos": lambda k: np.cos(math.pi * k),
        "quartic": lambda k: (1.0 - 4.0 * k * k) ** 2,
    }
    rows = []
    for name, f in profiles.items():
        spec = povm.LocalizedStateSpec(f_omega=f, name=name)
        for rep in povm.tail_scan(spec, (25.0 / m, 100.0 / m), 3, params):
            rows.append((name, rep.window[0], rep.window[1], rep.exponent_s,
                         rep.exponent_residual, rep.rate_A, rep.rate_residual))
    cols = ["profile", "window_lo", "window_hi", "exponent_s",
            "exponent_residual", "rate_A", "rate_residual"]
    _emit(args, "tails", cols, rows,
          {"note": "rate_A decreasing outward implies no exponential bound"})
    return 0


def cmd_verify(args):
    only = None
    if args.checks:
        only = {c.strip() for c in args.checks.split(",") if c.strip()}
    results = run_all_checks(mass=args.mass, seed=args.seed, tol=args.tol,
                             only=only)
    if not results:
        raise ConfigError(f"no checks matched {args.checks!r}")
    all_passed = all(r.passed for r in results)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "config": {"mass": args.mass, "seed": args.seed,
                   "tol": args.tol},
        "all_passed": all_passed,
        "checks": [
            {
                "check": r.check,
                "description": r.description,
                "measured": _fmt(r.measured),
                "tolerance": _fmt(r.tolerance),
                "passed": bool(r.passed),
                "note": r.note,
            }
            for r in results
        ],
    }
    if args.format == "csv":
        cols = ["check", "measured", "tolerance", "passed"]
        rows = [(r.check, r.measured, r.tolerance, r.passed) for r in results]
        _write_csv(args.output, cols, rows)
    else:
        _write_json(args.output, payload)
    return 0 if all_passed else 1


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(
        prog="ptloc",
        description="Proper-time localization datasets and verification",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--mass", type=float, default=1.0)
        sp.add_argument("--tau", type=float, default=0.0)
        sp.add_argument("--phi", type=float, default=0.0)
        sp.add_argument("--n-min", dest="n_min", type=int, default=-3)
        sp.add_argument("--n-max", dest="n_max", type=int, default=3)
        sp.add_argument("--grid-points", dest="grid_points", type=int,
                        default=201)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--output", type=str, default=None)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--plot", dest="plot", action="store_true",
                        default=True)
        sp.add_argument("--no-plot", dest="plot", action="store_false")

    for name, fn in (
        ("figure1", cmd_figure1),
        ("figure2", cmd_figure2),
        ("figure3", cmd_figure3),
        ("spectrum", cmd_spectrum),
        ("povm-prob", cmd_povm_prob),
        ("kernel", cmd_kernel),
        ("tails", cmd_tails),
        ("verify", cmd_verify),
    ):
        sp = sub.add_parser(name)
        common(sp)
        if name in ("povm-prob", "kernel"):
            sp.add_argument("--observable", choices=("time", "position"),
                            default="position")
        if name == "verify":
            sp.add_argument("--checks", type=str, default=None,
                            help="comma-separated subset of check names")
        sp.set_defaults(fn=fn)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.mass <= 0:
        parser.exit(2, "ptloc: --mass must be positive\n")
    try:
        code = args.fn(args)
    except ConfigError as exc:
        parser.exit(2, f"ptloc: configuration error: {exc}\n")
    except PtlocError as exc:
        sys.stderr.write(f"ptloc: {exc}\n")
        return 1
    return code


if __name__ == "__main__":
    sys.exit(main())
