"""Command-line entry point: ``iwturb {eval,curve,grid,obs,figure,selftest}``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from pathlib import Path

from . import __version__
from .collision import QuadratureConfig, Status, evaluate_I, expected_scaling, integrate_level
from .figure import FRAME, FigureBundle, proximity, render_figure
from .formats import emit_csv, emit_json, load_config
from .observations import builtin_observations
from .spectral_core import SpectralExponents, Wavenumber
from .zero_curve import grid_I, trace_curve

log = logging.getLogger("iwturb")

# cheaper levels for the figure sweep: 81 x 81 cells at the default config is slow on one core
FIGURE_GRID_CFG = QuadratureConfig(base_resolution=8, max_levels=3)


def _cfg(args) -> QuadratureConfig:
    return load_config(args.config) if getattr(args, "config", None) else QuadratureConfig()


def _out(args):
    return args.out if getattr(args, "out", None) else sys.stdout.buffer


def cmd_eval(args) -> int:
    cfg = _cfg(args)
    s = SpectralExponents(args.x, args.y)
    p = Wavenumber(args.k, args.m)
    t0 = time.perf_counter()
    r = evaluate_I(s, p, cfg)
    extra = {"x": args.x, "y": args.y, "k": args.k, "m": args.m, "seconds": time.perf_counter() - t0}
    emit_json(r, sys.stdout.buffer, extra)
    return 0


def cmd_curve(args) -> int:
    cfg = _cfg(args)
    curve = trace_curve(args.x_start, args.x_end, args.step, cfg, regularized=args.regularized, thickness=args.thickness)
    for d in curve.diagnostics:
        print(f"note: {d}", file=sys.stderr)
    if args.format == "csv":
        emit_csv(curve, _out(args))
    else:
        emit_json(curve, _out(args))
    return 0


def cmd_grid(args) -> int:
    cfg = _cfg(args)
    g = grid_I(tuple(args.x_range), tuple(args.y_range), args.nx, args.ny, cfg, regularized=args.regularized, workers=args.workers)
    if args.format == "csv":
        emit_csv(g, _out(args))
    else:
        emit_json(g, _out(args))
    return 0


def cmd_obs(args) -> int:
    recs = builtin_observations()
    if args.format == "csv":
        emit_csv(recs, sys.stdout.buffer)
    elif args.format == "json":
        emit_json(recs, sys.stdout.buffer)
    else:
        print(f"{'name':8s} {'a':>12s} {'b':>12s} {'basis':10s} {'x':>12s} {'y':>12s}")
        for r in recs:
            b = "" if r.b is None else str(r.b)
            print(f"{r.name:8s} {str(r.a):>12s} {b:>12s} {r.basis.value:10s} {str(r.derived_x):>12s} {str(r.derived_y):>12s}")
    return 0


def build_figure(out: Path, nx=81, ny=81, step=0.05, regularized=True, grid_cfg=FIGURE_GRID_CFG, curve_cfg=None, workers=1):
    """Grid sweep, trace and render; writes the SVG plus CSV tables next to it."""
    out = Path(out)
    curve_cfg = curve_cfg or QuadratureConfig()
    (x0, x1), (y0, y1) = FRAME
    grid = grid_I((x0, x1), (y0, y1), nx, ny, grid_cfg, regularized=regularized, workers=workers)
    curve = trace_curve(x0, x1, step, curve_cfg, regularized=regularized)
    recs = builtin_observations()
    bundle = FigureBundle(grid, list(curve), recs, notes=list(curve.diagnostics))
    render_figure(bundle, out)
    stem = out.with_suffix("")
    emit_csv(grid, f"{stem}.grid.csv")
    emit_csv(curve, f"{stem}.curve.csv")
    emit_csv(recs, f"{stem}.observations.csv")
    return bundle, curve


def cmd_figure(args) -> int:
    cfg = _cfg(args)
    grid_cfg = cfg if args.config else FIGURE_GRID_CFG
    t0 = time.perf_counter()
    bundle, curve = build_figure(args.out, args.nx, args.ny, args.step, not args.strict, grid_cfg, cfg, args.workers)
    for d in curve.diagnostics:
        print(f"note: {d}", file=sys.stderr)
    for name, dist in proximity(curve, bundle.observations):
        print(f"{name:8s} |y - y_curve| = {dist:.3g}")
    print(f"wrote {args.out} in {time.perf_counter() - t0:.0f} s")
    return 0


def selftest(cfg: QuadratureConfig | None = None) -> list[tuple[str, bool, str]]:
    cfg = cfg or QuadratureConfig()
    res = []
    r = evaluate_I(SpectralExponents(3.5, 0.5), Wavenumber(1, 1), cfg)
    ok = r.status is Status.CONVERGED and r.normalized_residual <= 1e-2
    res.append(("analytic zero (3.5, 0.5)", ok, f"{r.status.value}, residual {r.normalized_residual:.2e}"))
    r = evaluate_I(SpectralExponents(4.0, 0.0), Wavenumber(1, 1), cfg)
    ok = r.status is not Status.DIVERGENT and r.normalized_residual <= 1e-2
    res.append(("GM point (4, 0)", ok, f"{r.status.value}, residual {r.normalized_residual:.2e}"))
    s = SpectralExponents(3.3, 0.2)
    a, b = 1.7, 0.6
    v0, _ = integrate_level(s, Wavenumber(1, 1), cfg, 1)
    v1, _ = integrate_level(s, Wavenumber(a, b), cfg, 1)
    rel = abs(v1 / v0 / expected_scaling(s, a, b) - 1)
    res.append(("scaling I(ak, bm) = a^(4-2x) b^(1-2y) I(k, m)", rel <= 1e-10, f"relative error {rel:.1e}"))
    r = evaluate_I(SpectralExponents(4.5, -0.5), Wavenumber(1, 1), cfg)
    res.append(("divergence flagged at (4.5, -0.5)", r.status is Status.DIVERGENT, r.status.value))
    return res


def cmd_selftest(args) -> int:
    results = selftest(_cfg(args))
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return 0 if all(ok for _, ok, _ in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="iwturb", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--config", help="key = value file with QuadratureConfig fields")

    p = sub.add_parser("eval", help="evaluate I(x, y) at one wavenumber")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--m", type=float, default=1.0)
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("curve", help="trace the zero curve")
    p.add_argument("--x-start", type=float, required=True)
    p.add_argument("--x-end", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--regularized", action="store_true", help="use the sign of fixed-depth I where I diverges")
    p.add_argument("--thickness", action="store_true", help="also record |I| at y -/+ 0.25")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("grid", help="evaluate I on a tensor grid")
    p.add_argument("--x-range", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--y-range", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--nx", type=int, required=True)
    p.add_argument("--ny", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--regularized", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("obs", help="print the built-in observation table")
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.set_defaults(func=cmd_obs)

    p = sub.add_parser("figure", help="render the exponent-plane figure as SVG")
    p.add_argument("--out", required=True)
    p.add_argument("--nx", type=int, default=81)
    p.add_argument("--ny", type=int, default=81)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--strict", action="store_true", help="contour converged cells only and trace without regularization")
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("selftest", help="analytic-zero, scaling and divergence checks")
    common(p)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"iwturb: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
