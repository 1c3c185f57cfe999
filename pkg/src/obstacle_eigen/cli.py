"""Command-line entry point: ``obstacle-eigen {eigen,minkowski,optimize,verify}``.

Every command writes ``manifest.json`` into the output directory before it
starts computing.  The output directory defaults to ``$OBSTACLE_EIGEN_OUT``
or ``./obstacle_eigen_out``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from . import analytic
from .geometry import io as gio
from .geometry.minkowski import default_eps_schedule, outer_minkowski_content
from .geometry.obstacle import Obstacle
from .geometry.shapes import Circle, Domain
from .geometry.metric import convex_perimeter_bound
from .geometry.shapes import FourierShape
from .optimizer import (InfeasibleError, OptimizeConfig, annulus_domain, annulus_experiment,
                        eigen_shape_gradient, maximize, perimeter_shape_gradient, run_single)
from .spectral import ConvergenceError, DomainBlockedError, solve

OUT_ENV = "OBSTACLE_EIGEN_OUT"
EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_BLOCKED, EXIT_STALLED, EXIT_TOUCHING = 0, 1, 2, 3, 4, 5


def _tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUT_ENV, "obstacle_eigen_out"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, args, argv, config_path=None) -> dict:
    manifest = {"command": args.command, "config": str(config_path) if config_path else None,
                "output_dir": str(out.resolve()), "seed": args.seed, "version": _tool_version(),
                "argv": list(argv), "started": time.strftime("%Y-%m-%dT%H:%M:%S")}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest


def _finish_manifest(out: Path, manifest: dict, t0: float, exit_code, error: str | None = None) -> None:
    manifest["wall_clock_s"] = time.perf_counter() - t0
    manifest["exit_code"] = exit_code
    if error is not None:
        manifest["error"] = error
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def _emit(args, payload: dict, human: str) -> None:
    print(json.dumps(payload, indent=2) if args.json else human)


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the malformed-input code instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fail(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_INPUT


# -- eigen -----------------------------------------------------------------------

def cmd_eigen(args) -> int:
    try:
        domain = gio.domain_from_dict(gio.load_json(args.domain))
        obstacle = gio.obstacle_from_dict(gio.load_json(args.obstacle)) if args.obstacle else None
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return _fail(f"malformed input: {exc}")
    try:
        res = solve(domain, obstacle, args.h, args.boundary, tol=args.tol)
    except DomainBlockedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BLOCKED
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    out = args.outdir
    (out / "eigen.json").write_text(res.to_json() + "\n")
    if args.field:
        res.u1.to_csv(out / "field.csv")
    _emit(args, res.to_dict(), f"lambda1 = {res.lambda1:.8g}  (h={res.h:g}, {res.n_interior} unknowns, "
                                f"{res.iterations} iterations)")
    return EXIT_OK


# -- minkowski -------------------------------------------------------------------

def cmd_minkowski(args) -> int:
    try:
        obstacle = gio.obstacle_from_dict(gio.load_json(args.obstacle))
        sched = default_eps_schedule(obstacle, args.h, args.eps0, args.ratio, args.floor)
        est = outer_minkowski_content(obstacle, args.h, sched)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return _fail(str(exc))
    est.to_csv(args.outdir / "minkowski.csv")
    (args.outdir / "minkowski.json").write_text(json.dumps(est.to_dict(), indent=2) + "\n")
    _emit(args, est.to_dict(), f"outer Minkowski content = {est.content:.8g} over {len(sched)} eps values")
    return EXIT_OK


# -- optimize --------------------------------------------------------------------

def cmd_optimize(args) -> int:
    try:
        raw = gio.load_json(args.config)
        domain = gio.domain_from_dict(raw["domain"])
        cfg = OptimizeConfig.from_dict(raw["optimize"])
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return _fail(f"malformed config: {exc}")
    try:
        res = maximize(domain, cfg, certify=args.certify)
    except InfeasibleError as exc:
        return _fail(str(exc))
    (args.outdir / "result.json").write_text(res.to_json() + "\n")
    res.write_trace(args.outdir / "trace.csv")
    _emit(args, res.to_dict(), f"{res.status}: lambda1 = {res.lambda1:.8g}, perimeter = {res.perimeter:.8g}, "
                               f"mu = {res.mu:.6g}, residual = {res.optimality_residual:.3g}")
    return {"converged": EXIT_OK, "stalled": EXIT_STALLED, "touching": EXIT_TOUCHING}[res.status]


# -- verify ----------------------------------------------------------------------

def _check(name, expected, got, tol, rel=False) -> dict:
    err = abs(got - expected) / abs(expected) if rel else abs(got - expected)
    return {"check": name, "expected": expected, "got": got, "tol": tol,
            "relative": rel, "pass": bool(err <= tol)}


def _at_least(name, bound, got) -> dict:
    return {"check": name, "expected": bound, "got": got, "tol": 0.0, "relative": False,
            "pass": bool(got >= bound)}


def _at_most(name, bound, got) -> dict:
    return {"check": name, "expected": bound, "got": got, "tol": 0.0, "relative": False,
            "pass": bool(got <= bound)}


def _suite_annulus() -> list[dict]:
    r1, r0 = 1.0, 2.25
    hr = analytic.ring_admissible_h(r0)
    out = [_check("ring thickness h(2.25)", 0.0229, hr, 1e-4),
           _check("critical outer radius (3 pi + 2)/(pi + 2)", 2.222, analytic.ring_critical_r0(), 1e-3),
           _check("lambda1 of the glued ring", 6.4554, analytic.annulus_lambda1(1.0229, r0), 5e-4),
           _check("lambda1 of the half ring", 6.6180, analytic.half_annulus_lambda1(r1, r0), 5e-4)]
    # a unit square inside B(2) satisfies the strict isoperimetric defect
    hpw = analytic.hpw_bound(4 * math.pi, 4.0, 4 * math.pi - 1.0)
    out.append(_at_most("HPW defect of a square inside B(2) is negative", 0.0, hpw.defect))
    rep = annulus_experiment(r1, r0, 2 * math.pi * (2 + hr), h=1 / 64, run_optimizer=False)
    out.append(_at_least("non-radial beats radial by >= 0.1", 0.1, rep.gap))
    # near the full budget the optimizer returns the concentric ring
    L = 0.97 * 2 * math.pi * (r0 + r1)
    cfg = OptimizeConfig(L=L, kmax=2, h=0.01, max_iters=15)
    res = run_single(annulus_domain(r1, r0), cfg, FourierShape((0.02, 0.0), L / (2 * math.pi) - r1))
    out += [_check("ring regime lambda1", analytic.annulus_lambda1(L / (2 * math.pi) - r1, r0), res.lambda1,
                   0.01, rel=True),
            _at_most("ring regime centre offset", 0.02, res.center_offset),
            _at_most("ring regime radial deviation", 0.02, res.symmetry["radial_deviation"]),
            _check("ring regime perimeter saturation", L, res.perimeter, 5e-3, rel=True)]
    return out


def _suite_disk() -> list[dict]:
    disk = Domain(Circle((0.0, 0.0), 1.0))
    out = [_check("disk lambda1, h=1/128", analytic.disk_lambda1(1.0),
                  solve(disk, None, 1 / 128, "corrected").lambda1, 0.01, rel=True),
           _check("annulus lambda1 via disk obstacle, h=1/128", analytic.annulus_lambda1(0.5, 1.0),
                  solve(disk, Obstacle.disk((0, 0), 0.5), 1 / 128, "corrected").lambda1, 0.01, rel=True)]
    square = Domain(gio._shape_from_dict({"polygon": [[0, 0], [1, 0], [1, 1], [0, 1]]}))
    out.append(_check("unit square lambda1, h=1/64", 2 * math.pi ** 2,
                      solve(square, None, 1 / 64).lambda1, 0.005, rel=True))
    out.append(_check("largest convex perimeter in B(1)", 2 * math.pi, convex_perimeter_bound(disk), 1e-12))
    # the concentric disk of perimeter pi maximizes lambda1, reached from an off-centre seed
    cfg = OptimizeConfig(L=math.pi, kmax=2, h=1 / 64, max_iters=20)
    res = run_single(disk, cfg, FourierShape((0.15, 0.05), 0.4, (0.0, 0.03)))
    out += [_check("disk optimum lambda1", analytic.annulus_lambda1(0.5, 1.0), res.lambda1, 0.01, rel=True),
            _at_most("disk optimum centre offset", 0.02, res.center_offset),
            _at_most("disk optimum radial deviation", 0.02, res.symmetry["radial_deviation"]),
            _check("disk optimum perimeter saturation", math.pi, res.perimeter, 5e-3, rel=True)]
    return out


def _suite_minkowski() -> list[dict]:
    h = 1 / 256
    return [
        _check("disk region r=1", 2 * math.pi, outer_minkowski_content(Obstacle.disk((0, 0), 1.0), h).content,
               0.01, rel=True),
        _check("unit segment", 2.0, outer_minkowski_content(Obstacle.segment((0, 0), (1, 0)), h).content,
               0.02, rel=True),
        _check("circle chain r=1", 4 * math.pi,
               outer_minkowski_content(Obstacle.circle_chain((0, 0), 1.0), h).content, 0.02, rel=True),
        _check("annulus region 1..1.3", 2 * math.pi * 2.3,
               outer_minkowski_content(Obstacle.annulus((0, 0), 1.0, 1.3), 1.3 * h).content, 0.01, rel=True),
    ]


def _suite_gradients(seed: int) -> list[dict]:
    rng = np.random.default_rng(seed)
    disk = Domain(Circle((0.0, 0.0), 1.0))
    h, d = 1 / 64, 1e-3
    shape = FourierShape((0.05, -0.03), 0.45, tuple(rng.uniform(-0.03, 0.03, 3)), tuple(rng.uniform(-0.03, 0.03, 3)))
    res = solve(disk, Obstacle.from_fourier(shape), h, "corrected")
    g = eigen_shape_gradient(shape, res)
    q = perimeter_shape_gradient(shape)
    p = shape.to_vector()
    out = []
    for i in (2, 3, 6):
        e = np.zeros_like(p)
        e[i] = d
        lp = solve(disk, Obstacle.from_fourier(FourierShape.from_vector(p + e, 3)), h, "corrected").lambda1
        lm = solve(disk, Obstacle.from_fourier(FourierShape.from_vector(p - e, 3)), h, "corrected").lambda1
        out.append(_check(f"eigen gradient coefficient {i}", (lp - lm) / (2 * d), float(g[i]), 0.05, rel=True))
        pp = FourierShape.from_vector(p + e, 3).perimeter
        pm = FourierShape.from_vector(p - e, 3).perimeter
        out.append(_check(f"perimeter gradient coefficient {i}", (pp - pm) / (2 * d), float(q[i]), 0.01, rel=True))
    return out


SUITES = ("disk", "annulus", "minkowski", "gradients")


def cmd_verify(args) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    report = []
    for name in names:
        if name == "gradients":
            checks = _suite_gradients(args.seed)
        else:
            checks = {"disk": _suite_disk, "annulus": _suite_annulus, "minkowski": _suite_minkowski}[name]()
        for c in checks:
            c["suite"] = name
        report.extend(checks)
    (args.outdir / "verify.json").write_text(json.dumps(report, indent=2) + "\n")
    ok = all(c["pass"] for c in report)
    lines = [f"{'PASS' if c['pass'] else 'FAIL'}  [{c['suite']}] {c['check']}: got {c['got']:.6g}, "
             f"expected {c['expected']:.6g} (tol {c['tol']:g}{' rel' if c['relative'] else ''})" for c in report]
    _emit(args, {"checks": report, "all_pass": ok}, "\n".join(lines))
    return EXIT_OK if ok else EXIT_INPUT


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="obstacle-eigen",
                                     description="First Dirichlet eigenvalue of a planar domain minus an obstacle.")
    common = _Parser(add_help=False)
    common.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./obstacle_eigen_out)")
    common.add_argument("--json", action="store_true", help="machine-readable stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eigen", parents=[common], help="smallest eigenpair on a grid")
    p.add_argument("domain", help="domain JSON file")
    p.add_argument("obstacle", nargs="?", help="obstacle JSON file")
    p.add_argument("--h", type=float, default=1 / 64)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--boundary", choices=("masked", "corrected"), default="corrected")
    p.add_argument("--field", action="store_true", help="also write field.csv (x,y,u)")
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("minkowski", parents=[common], help="outer Minkowski content sweep")
    p.add_argument("obstacle", help="obstacle JSON file")
    p.add_argument("--h", type=float, default=1 / 256)
    p.add_argument("--eps0", type=float, default=None)
    p.add_argument("--ratio", type=float, default=0.5)
    p.add_argument("--floor", type=float, default=None)
    p.set_defaults(func=cmd_minkowski)

    p = sub.add_parser("optimize", parents=[common], help="maximize lambda1 under a perimeter budget")
    p.add_argument("config", help='JSON file {"domain": {...}, "optimize": {...}}')
    p.add_argument("--certify", action="store_true", help="check the final perimeter with the grid estimator")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("verify", parents=[common], help="reproduce the reference values")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    args.outdir = _out_dir(args)
    config = getattr(args, "config", None)
    manifest = _write_manifest(args.outdir, args, argv, config)
    t0 = time.perf_counter()
    try:
        code = args.func(args)
    except BaseException as exc:
        _finish_manifest(args.outdir, manifest, t0, None, f"{type(exc).__name__}: {exc}")
        raise
    _finish_manifest(args.outdir, manifest, t0, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
