"""Command-line interface: kernel evaluation, boundary-data extension,
functional computation, and verification runs.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 data error.
Standard output carries only data rows; diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys

import numpy as np

from . import functionals as fn
from . import geometry as geo
from . import harmonic as hm
from . import kernels as ker
from . import verify as vf
from .config import RunConfig
from .errors import DataFileError, HyperharmError

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_DATA = 3


class UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperharm",
        description="Hyperbolic-harmonic kernels, extensions, functionals, "
                    "and verification suites on the unit ball.")
    sub = parser.add_subparsers(dest="command", required=True)

    pk = sub.add_parser("kernel", help="emit kernel values over the angle "
                                       "grid as t,value rows")
    pk.add_argument("--kind", required=True,
                    choices=("euclid", "hyp", "hyp-delta"))
    pk.add_argument("--n", type=int, default=3)
    pk.add_argument("--r", type=float, required=True)
    pk.add_argument("--delta", type=float, default=None)
    pk.add_argument("--grid-degree", type=int, default=200,
                    help="number of angle intervals on [-1, 1]")

    pe = sub.add_parser("extend", help="extend boundary data and write "
                                       "r,x1..xn,u samples")
    pe.add_argument("--data", required=True)
    pe.add_argument("--out", required=True)
    pe.add_argument("--grid-degree", type=int, default=12)
    pe.add_argument("--ladder-depth", type=int, default=8)
    pe.add_argument("--delta", type=float, default=1.0)

    pf = sub.add_parser("functional", help="compute a functional over the "
                                           "boundary grid")
    pf.add_argument("--kind", required=True,
                    choices=("M", "Malpha", "S", "SN", "g", "gN"))
    pf.add_argument("--data", required=True)
    pf.add_argument("--out", required=True)
    pf.add_argument("--alpha", type=float, default=0.5)
    pf.add_argument("--p", type=float, default=1.0)
    pf.add_argument("--grid-degree", type=int, default=None)
    pf.add_argument("--ladder-depth", type=int, default=None)
    pf.add_argument("--config", default=None)

    pv = sub.add_parser("verify", help="run verification suites and write "
                                       "reports")
    pv.add_argument("suites", nargs="+",
                    help="suite names, or 'all'")
    pv.add_argument("--config", default=None)
    pv.add_argument("--n", type=int, default=None)
    pv.add_argument("--lmax", type=int, default=None)
    pv.add_argument("--alpha", type=float, action="append", default=None)
    pv.add_argument("--p", type=float, action="append", default=None)
    pv.add_argument("--grid-degree", type=int, default=None)
    pv.add_argument("--ladder-depth", type=int, default=None)
    pv.add_argument("--tol", type=float, default=None)
    pv.add_argument("--seed", type=int, default=None)
    pv.add_argument("--out", default=None)
    return parser


def _load_config(path: str | None, **overrides) -> RunConfig:
    base = RunConfig.load(path) if path else RunConfig()
    fields = {k: v for k, v in overrides.items() if v is not None}
    if not fields:
        return base
    doc = {f: getattr(base, f) for f in (
        "n", "lmax", "alphas", "ps", "grid_degree", "ladder_depth", "tol",
        "seed", "measure_exponent", "g_form", "out_dir")}
    doc.update(fields)
    try:
        return RunConfig(**doc)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_kernel(args) -> int:
    if args.n < 3:
        raise UsageError("dimension must be at least 3")
    if not 0.0 <= args.r < 1.0:
        raise UsageError("radius must lie in [0, 1)")
    if args.grid_degree < 1:
        raise UsageError("grid degree must be positive")
    t = np.linspace(-1.0, 1.0, args.grid_degree + 1)
    if args.kind == "euclid":
        vals = ker.poisson_euclid_rt(args.n, args.r, t)
    elif args.kind == "hyp":
        vals = ker.poisson_hyp_rt(args.n, args.r, t)
    else:
        delta = 1.0 if args.delta is None else args.delta
        if not 0.0 <= delta <= 1.0:
            raise UsageError("delta must lie in [0, 1]")
        vals = ker.poisson_hyp_series_rt(args.n, args.r, t, delta)
    out = io.StringIO()
    w = csv.writer(out)
    w.writerow(["t", "value"])
    for ti, vi in zip(np.atleast_1d(t), np.atleast_1d(vals)):
        w.writerow([f"{ti:.17g}", f"{vi:.17g}"])
    sys.stdout.write(out.getvalue())
    return EXIT_OK


def _sample_points(u: hm.HarmonicFunction, degree: int, depth: int):
    grid = geo.sphere_quadrature(u.n, degree, pole=u.pole)
    radii = 1.0 - 0.5 ** np.arange(1, depth + 1)
    return grid.nodes, radii


def cmd_extend(args) -> int:
    data, _ = hm.load_boundary_data(args.data)
    u = hm.extend(data, delta=args.delta)
    nodes, radii = _sample_points(u, args.grid_degree, args.ladder_depth)
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["r"] + [f"x{i + 1}" for i in range(u.n)] + ["u"])
    for r in radii:
        pts = r * nodes
        vals = u.eval_points(pts)
        for xi, vi in zip(pts, vals):
            w.writerow([f"{r:.17g}"] + [f"{c:.17g}" for c in xi]
                       + [f"{vi:.17g}"])
    tmp = f"{args.out}.tmp"
    with open(tmp, "w") as fh:
        fh.write(buf.getvalue())
    os.replace(tmp, args.out)
    return EXIT_OK


def cmd_functional(args) -> int:
    if not 0.0 < args.alpha < 1.0:
        raise UsageError("aperture must lie in (0, 1)")
    if args.p <= 0.0:
        raise UsageError("p must be positive")
    config = _load_config(args.config, grid_degree=args.grid_degree,
                          ladder_depth=args.ladder_depth)
    data, _ = hm.load_boundary_data(args.data)
    u = hm.extend(data)
    grid = fn.functional_grid(u.n, degree=config.grid_degree,
                              ladder_depth=config.ladder_depth, pole=u.pole)
    if args.kind == "M":
        result = fn.radial_max(u, grid)
    elif args.kind == "Malpha":
        result = fn.cone_max(u, args.alpha, grid)
    elif args.kind == "S":
        result = fn.area_integral(u, args.alpha, grid)
    elif args.kind == "SN":
        result = fn.area_integral(u, args.alpha, grid, radial_only=True)
    elif args.kind == "g":
        result = fn.littlewood_paley_g(u, grid, form=config.g_form)
    else:
        result = fn.littlewood_paley_g(u, grid, radial_only=True,
                                       form=config.g_form)
    result.write_csv(args.out)
    print("norm,p,value")
    print(f"{args.kind},{args.p:.17g},{result.quasinorm(args.p):.17g}")
    return EXIT_OK


def cmd_verify(args) -> int:
    config = _load_config(
        args.config, n=args.n, lmax=args.lmax,
        alphas=tuple(args.alpha) if args.alpha else None,
        ps=tuple(args.p) if args.p else None,
        grid_degree=args.grid_degree, ladder_depth=args.ladder_depth,
        tol=args.tol, seed=args.seed,
        out_dir=args.out)
    names = list(vf.SUITES) if args.suites == ["all"] else args.suites
    unknown = [s for s in names if s not in vf.SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s): {', '.join(unknown)}; "
                         f"available: {', '.join(vf.SUITES)}, all")
    reports = [vf.run_suite(name, config) for name in names]
    csv_path = vf.write_reports(reports, config.out_dir)
    print(csv_path)
    failed = [r.suite for r in reports if r.status == "fail"]
    if failed:
        print(f"failed suites: {', '.join(failed)}", file=sys.stderr)
        return EXIT_VERIFY_FAIL
    return EXIT_OK


_COMMANDS = {
    "kernel": cmd_kernel,
    "extend": cmd_extend,
    "functional": cmd_functional,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except HyperharmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
