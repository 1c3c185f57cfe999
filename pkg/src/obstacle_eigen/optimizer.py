"""Perimeter-constrained maximization of the first Dirichlet eigenvalue.

Obstacles are star-shaped Fourier regions F.  The obstacle actually removed
is K = F minus the holes of the domain, so F may swallow a hole or be glued
onto part of its boundary.  The perimeter of K is

    (arc of dF outside the holes) + (hole boundary inside F),

which reduces to the polar arclength of dF when F avoids the holes.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
import shapely
from scipy.optimize import brentq, minimize_scalar, nnls

from . import analytic
from .geometry.minkowski import outer_minkowski_content
from .geometry.obstacle import Obstacle
from .geometry.shapes import Circle, Domain, FourierShape
from .spectral import (DomainBlockedError, EigenResult, _normal_slope_sq, lagrange_multiplier,
                       solve)

STATUSES = ("converged", "stalled", "touching")
N_BOUNDARY = 1024  # polygon vertices used to hand a Fourier shape to the grid
MIN_STEP_CELLS = 1e-3  # line-search floor, in grid cells


class InfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class OptimizeConfig:
    """Settings for :func:`maximize`.

    ``step0`` is relative to the domain radius (half the larger bbox side)
    so that a scaled problem takes scaled steps.  ``constraint_tol`` is
    relative to ``L``.
    """

    L: float
    kmax: int = 6
    step0: float = 0.05
    max_iters: int = 60
    h: float = 1 / 64
    eigen_tol: float = 1e-8
    constraint_tol: float = 1e-4
    stall_tol: float = 1e-5
    cluster_tol: float = 1e-3
    init: tuple = ()
    allow_center_motion: bool = True
    boundary: str = "corrected"
    n_samples: int = 512
    n_seeds: int = 5
    workers: int = 1

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("perimeter budget L must be positive")
        if self.kmax < 0:
            raise ValueError("kmax must be non-negative")
        for name in ("step0", "eigen_tol", "constraint_tol", "stall_tol", "h"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.cluster_tol < 0:
            raise ValueError("cluster_tol must be non-negative")
        if self.n_samples < 256:
            raise ValueError("at least 256 boundary samples are needed")
        object.__setattr__(self, "init", tuple(self.init))

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in ("L", "kmax", "step0", "max_iters", "h", "eigen_tol",
                                            "constraint_tol", "stall_tol", "cluster_tol", "allow_center_motion",
                                            "boundary", "n_samples", "n_seeds", "workers")}
        d["init"] = [{"center": list(f.center), "a0": f.a0, "a": list(f.a), "b": list(f.b)} for f in self.init]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "OptimizeConfig":
        d = dict(d)
        d["init"] = tuple(FourierShape(tuple(f["center"]), f["a0"], tuple(f.get("a", ())), tuple(f.get("b", ())))
                          for f in d.get("init", []))
        if "K_max" in d:
            d["kmax"] = d.pop("K_max")
        return cls(**d)


@dataclass(frozen=True)
class ObstacleResult:
    shape: FourierShape
    lambda1: float
    perimeter: float
    mu: float
    mu_fit: float
    optimality_residual: float
    symmetry: dict
    center_offset: float
    status: str
    history: list = field(default_factory=list)   # (lambda1, perimeter, step)
    minkowski_content: float | None = None
    eigen: EigenResult | None = field(default=None, repr=False, compare=False)

    @property
    def obstacle(self) -> Obstacle:
        return Obstacle.from_fourier(self.shape, N_BOUNDARY)

    @property
    def iterations(self) -> int:
        return max(0, len(self.history) - 1)

    def to_dict(self) -> dict:
        f = self.shape
        return {"lambda1": self.lambda1, "perimeter": self.perimeter, "mu": self.mu,
                "mu_fit": self.mu_fit, "optimality_residual": self.optimality_residual,
                "symmetry": self.symmetry, "center_offset": self.center_offset,
                "status": self.status, "minkowski_content": self.minkowski_content,
                "coeffs": {"center": list(f.center), "a0": f.a0, "a": list(f.a), "b": list(f.b)},
                "history": [list(h) for h in self.history]}

    def write_trace(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iter", "lambda1", "perimeter", "step"])
            for i, (lam, per, step) in enumerate(self.history):
                w.writerow([i, repr(lam), repr(per), repr(step)])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


# -- perimeter of K = F minus holes ------------------------------------------

def _positive_intervals(f, period: float, n: int = 2048) -> list[tuple[float, float]]:
    """Maximal intervals of [0, period) where f > 0, endpoints refined by brentq.

    Returns ``[(0, period)]`` when f is positive at every sample.
    """
    t = period * np.arange(n + 1) / n
    v = f(t)
    pos = v > 0
    if pos[:-1].all():
        return [(0.0, period)]
    if not pos.any():
        return []

    def root(i):
        a, b = t[i], t[i + 1]
        return brentq(lambda s: float(f(np.array([s]))[0]), a, b, xtol=1e-14 * period)

    change = np.nonzero(pos[:-1] != pos[1:])[0]
    ends = [(root(i), bool(pos[i + 1])) for i in change]  # (position, entering)
    out = []
    start = 0.0 if pos[0] else None
    for x, entering in ends:
        if entering:
            start = x
        elif start is not None:
            out.append((start, x))
            start = None
    if start is not None:
        out.append((start, period))
    return out


def _hole_arclength(hole, t):
    """Point on a hole boundary at arclength t (counter-clockwise)."""
    if isinstance(hole, Circle):
        phi = t / hole.radius
        return np.column_stack([hole.center[0] + hole.radius * np.cos(phi),
                                hole.center[1] + hole.radius * np.sin(phi)])
    v = hole.vertices
    e = np.roll(v, -1, axis=0) - v
    cum = np.concatenate([[0.0], np.cumsum(np.linalg.norm(e, axis=1))])
    t = np.mod(t, cum[-1])
    k = np.clip(np.searchsorted(cum, t, side="right") - 1, 0, len(v) - 1)
    s = (t - cum[k]) / np.linalg.norm(e[k], axis=1)
    return v[k] + s[:, None] * e[k]


_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)


def _speed_integral(shape: FourierShape, a: float, b: float) -> float:
    x = 0.5 * (b - a) * _GL_X + 0.5 * (a + b)
    return 0.5 * (b - a) * float(np.sum(_GL_W * shape.speed(x)))


def effective_perimeter(domain: Domain, shape: FourierShape) -> float:
    """Perimeter of K = F minus the holes of ``domain``."""
    total = shape.perimeter_exact()
    for hole in domain.holes:
        inside = _positive_intervals(lambda t, hole=hole: hole.level(shape.point(t)), 2 * math.pi)
        for a, b in inside:
            m = max(1, int(math.ceil((b - a) / 0.05)))
            edges = np.linspace(a, b, m + 1)
            total -= sum(_speed_integral(shape, edges[i], edges[i + 1]) for i in range(m))
        per = hole.perimeter
        covered = _positive_intervals(lambda t, hole=hole: shape.level(_hole_arclength(hole, t)), per)
        total += sum(b - a for a, b in covered)
    return total


def _crosses_holes(domain: Domain, shape: FourierShape) -> bool:
    if not domain.holes:
        return False
    p = shape.boundary(2048)
    return any(np.any(h.level(p) > -1e-12) for h in domain.holes)


# -- shape gradients -----------------------------------------------------------

def _velocity_weights(shape: FourierShape, theta: np.ndarray) -> np.ndarray:
    """(V_c . n) |gamma'| for every coefficient c, rows ordered like ``to_vector``."""
    r, dr = shape.radius(theta), shape.radius(theta, 1)
    c, s = np.cos(theta), np.sin(theta)
    rows = [r * c + dr * s, r * s - dr * c, r]
    rows += [r * np.cos(k * theta) for k in range(1, shape.kmax + 1)]
    rows += [r * np.sin(k * theta) for k in range(1, shape.kmax + 1)]
    return np.array(rows)


def perimeter_shape_gradient(shape, n: int = 1024) -> np.ndarray:
    """Derivative of the polar arclength with respect to each coefficient."""
    shape = getattr(shape, "fourier", shape)
    shape.check()
    t = shape.thetas(n)
    return _velocity_weights(shape, t) @ shape.curvature(t) * (2 * math.pi / n)


def eigen_shape_gradient(shape, eigen: EigenResult, n: int = 512, clearance: float = 3.0) -> np.ndarray:
    """Derivative of lambda1 with respect to each coefficient.

    Integrates |grad u|^2 (V_c . n) over the free boundary, with n pointing
    out of the obstacle.  Samples closer than ``clearance * h`` to the
    domain boundary (touching or glued parts) are frozen.
    """
    shape = getattr(shape, "fourier", shape)
    if eigen.problem is None or not np.isfinite(eigen.residual) or eigen.residual > 1e-3:
        raise ValueError("eigenpair is not converged")
    t = shape.thetas(n)
    pts = shape.point(t)
    free = eigen.problem.domain.level(pts) >= clearance * eigen.h
    g2 = np.zeros(n)
    g2[free] = _normal_slope_sq(eigen, pts[free], shape.normal(t[free]))
    return _velocity_weights(shape, t) @ g2 * (2 * math.pi / n)


def effective_perimeter_gradient(domain: Domain, shape: FourierShape, delta: float = 1e-6) -> np.ndarray:
    """Gradient of :func:`effective_perimeter`: analytic when dF avoids the holes,
    central differences otherwise."""
    if not _crosses_holes(domain, shape):
        return perimeter_shape_gradient(shape)
    p = shape.to_vector()
    g = np.zeros_like(p)
    for i in range(len(p)):
        e = np.zeros_like(p)
        e[i] = delta
        g[i] = (effective_perimeter(domain, FourierShape.from_vector(p + e, shape.kmax))
                - effective_perimeter(domain, FourierShape.from_vector(p - e, shape.kmax))) / (2 * delta)
    return g


# -- symmetry -----------------------------------------------------------------

def _reflect_gap(shape: FourierShape, phi: float, t: np.ndarray) -> float:
    return float(np.max(np.abs(shape.radius(t) - shape.radius(2 * phi - t))))


def symmetry_metrics(obstacle, center=None, n: int = 1024) -> dict:
    """Radial and axial symmetry defects of a Fourier obstacle.

    With ``center`` given the curve is first re-expanded about that point.
    The reflection axis is found by a coarse scan followed by a bounded
    scalar refinement.
    """
    shape = getattr(obstacle, "fourier", obstacle)
    if center is not None and np.hypot(*(np.asarray(center) - np.asarray(shape.center))) > 0:
        shape = shape.recentered(center, kmax=max(64, shape.kmax), n=n)
    t = shape.thetas(n)
    r = shape.radius(t)
    a0 = shape.a0
    radial = float(np.max(np.abs(r - a0)) / a0)
    coarse = np.pi * np.arange(180) / 180
    gaps = np.array([_reflect_gap(shape, p, t) for p in coarse])
    i = int(np.argmin(gaps))
    step = np.pi / 180
    res = minimize_scalar(lambda p: _reflect_gap(shape, p, t), bounds=(coarse[i] - step, coarse[i] + step),
                          method="bounded", options={"xatol": 1e-7})
    phi, gap = (float(res.x), float(res.fun)) if res.fun < gaps[i] else (float(coarse[i]), float(gaps[i]))
    return {"radial_deviation": radial, "best_axis_angle": float(np.mod(phi, np.pi)),
            "axial_deviation": gap / a0}


# -- the ascent loop -------------------------------------------------------------

def _scale(domain: Domain) -> float:
    (x0, y0), (x1, y1) = domain.bbox()
    return 0.5 * max(x1 - x0, y1 - y0)


def _inside_outer(domain: Domain, shape: FourierShape) -> bool:
    if shape.min_radius(2048) <= 0:
        return False
    return bool(np.all(domain.outer.level(shape.boundary(2048)) >= -1e-12 * _scale(domain)))


def project_perimeter(domain: Domain, shape: FourierShape, L: float) -> FourierShape | None:
    """Scale the radial profile about the shape centre until the perimeter of K equals L."""
    def gap(s):
        return effective_perimeter(domain, shape.radial_scaled(s)) - L

    lo, hi = 1.0, 1.0
    g = gap(1.0)
    if abs(g) <= 1e-13 * L:
        return shape
    for _ in range(60):
        if g < 0:
            hi *= 1.25
            if gap(hi) >= 0:
                break
            lo = hi
        else:
            lo *= 0.8
            if gap(lo) <= 0:
                break
            hi = lo
    else:
        return None
    s = brentq(gap, lo, hi, xtol=1e-14)
    return shape.radial_scaled(s)


def _evaluate(domain: Domain, shape: FourierShape, cfg: OptimizeConfig) -> EigenResult | None:
    try:
        return solve(domain, Obstacle.from_fourier(shape, N_BOUNDARY), cfg.h, cfg.boundary, tol=cfg.eigen_tol)
    except DomainBlockedError:
        return None


def _optimality(domain: Domain, shape: FourierShape, eigen: EigenResult, n: int) -> tuple[float, float]:
    """Least-squares mu for |grad u|^2 = mu C on the free boundary and the sup relative misfit."""
    t = shape.thetas(n)
    pts = shape.point(t)
    free = domain.level(pts) >= 3 * eigen.h
    if free.sum() < 64:
        return float("nan"), float("nan")
    g2 = _normal_slope_sq(eigen, pts[free], shape.normal(t[free]))
    c = shape.curvature(t[free])
    mu = float(np.sum(g2 * c) / np.sum(c * c))
    with np.errstate(divide="ignore", invalid="ignore"):
        res = float(np.max(np.abs(1 - g2 / (mu * c))))
    return mu, res


def _min_norm_combination(G: np.ndarray) -> np.ndarray:
    """Smallest-norm point of the convex hull of the rows of ``G``."""
    big = 1e3 * max(float(np.abs(G).max()), 1.0)
    A = np.vstack([G.T, np.full((1, len(G)), big)])
    b = np.zeros(A.shape[0])
    b[-1] = big
    w, _ = nnls(A, b)
    return (w / w.sum()) @ G


def _ascent_directions(domain, shape, eig, cfg, mask) -> list[np.ndarray]:
    """Candidate ascent directions tangent to the perimeter constraint.

    When higher eigenvalues lie within ``cluster_tol`` of lambda1, the
    first candidate is the min-norm element of the hull of all cluster
    gradients, which raises every clustered eigenvalue to first order.
    The plain lambda1 gradient is always the last candidate.
    """
    q = effective_perimeter_gradient(domain, shape) * mask

    def tangent(v):
        return v - (v @ q) / (q @ q) * q

    d0 = tangent(eigen_shape_gradient(shape, eig, cfg.n_samples) * mask)
    cluster = [f for lam_k, f in eig.modes if lam_k <= eig.lambda1 * (1 + cfg.cluster_tol)]
    dirs = []
    if cluster:
        G = [d0] + [tangent(eigen_shape_gradient(shape, replace(eig, u1=f), cfg.n_samples) * mask)
                    for f in cluster]
        dirs.append(_min_norm_combination(np.array(G)))
    dirs.append(d0)
    return [d / np.linalg.norm(d) for d in dirs if np.linalg.norm(d) > 0]


def _line_search(domain, shape, lam, d, step, cfg):
    """Backtracking along ``d``: returns (shape, eigen, step) of the first
    improving trial or None, plus whether some trial escaped the domain.

    ``d`` has unit norm, so ``step`` bounds the boundary displacement up to
    a small factor; halving stops once it is below a thousandth of a cell.
    """
    p = shape.to_vector()
    escaped = False
    while step >= MIN_STEP_CELLS * cfg.h:
        try:
            trial = project_perimeter(domain, FourierShape.from_vector(p + step * d, shape.kmax), cfg.L)
        except ValueError:
            trial = None
        if trial is None or not _inside_outer(domain, trial):
            escaped = True
            step *= 0.5
            continue
        te = _evaluate(domain, trial, cfg)
        if te is not None and te.lambda1 > lam:
            return (trial, te, step), escaped
        step *= 0.5
    return None, escaped


def _outer_clearance(domain: Domain, shape: FourierShape) -> float:
    return float(domain.outer.level(shape.boundary(2048)).min())


def run_single(domain: Domain, cfg: OptimizeConfig, seed: FourierShape) -> ObstacleResult:
    """Projected gradient ascent from one seed."""
    shape = seed.with_kmax(cfg.kmax)
    shape = project_perimeter(domain, shape, cfg.L)
    if shape is None or not _inside_outer(domain, shape):
        raise InfeasibleError("seed cannot be scaled to the perimeter budget inside the domain")
    eig = _evaluate(domain, shape, cfg)
    if eig is None:
        raise InfeasibleError("seed obstacle blocks the whole domain")
    lam = eig.lambda1
    step = cfg.step0 * _scale(domain)
    history = [(lam, effective_perimeter(domain, shape), step)]
    mask = np.ones(3 + 2 * shape.kmax)
    if not cfg.allow_center_motion:
        mask[:2] = 0
    status, small = "stalled", 0
    for _ in range(cfg.max_iters):
        dirs = _ascent_directions(domain, shape, eig, cfg, mask)
        if not dirs:
            # a vanishing gradient is only stationary if no sample was frozen
            status = "touching" if _outer_clearance(domain, shape) < 2 * cfg.h else "converged"
            break
        found, escaped = None, False
        for d in dirs:
            found, esc = _line_search(domain, shape, lam, d, step, cfg)
            escaped |= esc
            if found is not None:
                break
        if found is None:
            touching = escaped and _outer_clearance(domain, shape) < 2 * cfg.h
            status = "touching" if touching else "converged"
            break
        shape, te, step = found
        gain = (te.lambda1 - lam) / lam
        eig, lam = te, te.lambda1
        history.append((lam, effective_perimeter(domain, shape), step))
        step *= 1.5
        small = small + 1 if gain < cfg.stall_tol else 0
        if small >= 5:
            status = "converged"
            break
    return _finish(domain, shape, eig, cfg, status, history)


def _finish(domain, shape, eig, cfg, status, history) -> ObstacleResult:
    per = effective_perimeter(domain, shape)
    try:
        mu = lagrange_multiplier(eig, Obstacle.from_fourier(shape, N_BOUNDARY), per, cfg.n_samples)
    except ValueError:
        mu = float("nan")
    mu_fit, resid = _optimality(domain, shape, eig, cfg.n_samples)
    centroid = shape.centroid()
    sym = symmetry_metrics(shape, center=centroid)
    offset = float(np.hypot(*(centroid - domain.center)))
    return ObstacleResult(shape, eig.lambda1, per, mu, mu_fit, resid, sym, offset, status,
                          history, None, eig)


def clipped_obstacle(domain: Domain, shape: FourierShape) -> Obstacle:
    """K = F intersected with the closed domain, as a polygon region."""
    f = shapely.Polygon(shape.boundary(N_BOUNDARY))
    k = f.intersection(domain.to_shapely(N_BOUNDARY))
    if k.geom_type == "MultiPolygon":
        k = max(k.geoms, key=lambda g: g.area)
    k = shapely.set_precision(k, 0) if k.is_valid else k.buffer(0)
    return Obstacle.polygon(np.asarray(k.exterior.coords)[:-1],
                            [np.asarray(r.coords)[:-1] for r in k.interiors])


def certify_perimeter(domain: Domain, result: ObstacleResult, h: float | None = None) -> ObstacleResult:
    """Attach an independent grid Minkowski estimate of the perimeter of K."""
    k = clipped_obstacle(domain, result.shape)
    if h is None:
        h = k.diameter / 512
    est = outer_minkowski_content(k, h)
    return replace(result, minkowski_content=est.content)


def default_seeds(domain: Domain, L: float, n: int = 5) -> list[FourierShape]:
    """Concentric circle, two off-centre circles and two mode-2 ellipses.

    Offsets and amplitudes are 0.3 of the clearance between the concentric
    circle of the right perimeter and the outer boundary.  When that circle
    cannot enclose the holes, seeds are centred at the point deepest inside
    the domain instead.
    """
    c = domain.center
    r_avail = float(domain.outer.level(c[None, :])[0])
    r_star = (L - sum(hh.perimeter for hh in domain.holes)) / (2 * math.pi)
    encloses = r_star > 0 and all(
        np.all(np.hypot(*(hh.boundary(256) - c).T) < r_star) for hh in domain.holes)
    if not encloses:
        (x0, y0), (x1, y1) = domain.bbox()
        xs, ys = np.meshgrid(np.linspace(x0, x1, 101), np.linspace(y0, y1, 101))
        pts = np.column_stack([xs.ravel(), ys.ravel()])
        lev = domain.level(pts)
        c = pts[int(np.argmax(lev))]
        r_avail = float(lev.max())
        r_star = min(L / (2 * math.pi), 0.7 * r_avail)
    delta = max(r_avail - r_star, 0.0)
    o = 0.3 * delta
    seeds = [
        FourierShape(tuple(c), r_star),
        FourierShape((c[0] + o, c[1]), r_star),
        FourierShape((c[0] - 0.5 * o, c[1] + 0.8 * o), r_star),
        FourierShape(tuple(c), r_star, (0.0, o)),
        FourierShape(tuple(c), r_star, (0.0, -0.5 * o), (0.0, 0.6 * o)),
    ]
    return seeds[:n]


def _run_seed(args):
    domain, cfg, seed = args
    try:
        return run_single(domain, cfg, seed)
    except InfeasibleError:
        return None


def maximize(domain: Domain, config: OptimizeConfig, certify: bool = False) -> ObstacleResult:
    """Best result over the configured seeds (``config.init`` or :func:`default_seeds`)."""
    results = maximize_all(domain, config)
    if not results:
        raise InfeasibleError("no seed produced an admissible obstacle")
    best = max(results, key=lambda r: r.lambda1)
    return certify_perimeter(domain, best) if certify else best


def maximize_all(domain: Domain, config: OptimizeConfig) -> list[ObstacleResult]:
    if config.L >= domain.perimeter:
        raise InfeasibleError("the assumption L < H¹(∂Ω) is violated: "
                              f"L={config.L:g} >= {domain.perimeter:g}")
    seeds = list(config.init) or default_seeds(domain, config.L, config.n_seeds)
    jobs = [(domain, config, s) for s in seeds]
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as ex:
            out = list(ex.map(_run_seed, jobs))
    else:
        out = [_run_seed(j) for j in jobs]
    return [r for r in out if r is not None]


# -- the annulus experiment ------------------------------------------------------

@dataclass(frozen=True)
class AnnulusReport:
    r1: float
    r0: float
    L: float
    radial_empty: bool
    radial_thickness: float | None
    radial_lambda: float | None
    half_ring_lambda: float | None        # grid value of the glued half ring
    half_ring_reference: float | None     # Bessel value of the same half ring
    runs: list = field(default_factory=list)

    @property
    def best_nonradial(self) -> float:
        vals = [r.lambda1 for r in self.runs]
        if self.half_ring_lambda is not None:
            vals.append(self.half_ring_lambda)
        return max(vals) if vals else float("nan")

    @property
    def winner(self) -> str:
        if self.radial_empty:
            return "non-radial"
        return "non-radial" if self.best_nonradial > self.radial_lambda else "radial"

    @property
    def gap(self) -> float:
        if self.radial_empty:
            return float("nan")
        return self.best_nonradial - self.radial_lambda

    def to_dict(self) -> dict:
        return {"r1": self.r1, "r0": self.r0, "L": self.L, "radial_empty": self.radial_empty,
                "radial_thickness": self.radial_thickness, "radial_lambda": self.radial_lambda,
                "half_ring_lambda": self.half_ring_lambda, "half_ring_reference": self.half_ring_reference,
                "optimizer_lambdas": [r.lambda1 for r in self.runs],
                "best_nonradial": self.best_nonradial, "winner": self.winner, "gap": self.gap}


def annulus_domain(r1: float, r0: float) -> Domain:
    return Domain(Circle((0.0, 0.0), r0), (Circle((0.0, 0.0), r1),))


def half_ring(r1: float, r0: float, n: int = 512) -> Obstacle:
    """Closed upper half of the annulus r1 <= |x| <= r0."""
    t = np.pi * np.arange(n + 1) / n
    outer = np.column_stack([r0 * np.cos(t), r0 * np.sin(t)])
    inner = np.column_stack([r1 * np.cos(t[::-1]), r1 * np.sin(t[::-1])])
    return Obstacle.polygon(np.concatenate([outer, inner]))


def glued_seeds(r1: float, r0: float, n: int = 4) -> list[FourierShape]:
    """Non-radial seeds that overlap the hole without enclosing it.

    The first two are discs centred between the hole and the outer circle,
    suited to small budgets.  The last two are wide shapes centred inside
    the hole that wrap most of it, which can still be scaled to budgets
    near the glued-ring perimeter.  Seeds that cannot reach a given budget
    are dropped by :func:`maximize_all`.
    """
    mid = 0.5 * (r0 + r1)
    rad = 0.5 * (r0 - r1)
    seeds = [FourierShape((0.0, mid - 0.3 * rad), 0.9 * rad),
             FourierShape((0.0, mid - 0.5 * rad), 0.9 * rad, (0.0, -0.2 * rad)),
             FourierShape((0.0, 0.6 * r1), r1, (0.0, 0.2 * r1)),
             FourierShape((0.0, 0.5 * r1), r1, (0.0, 0.4 * r1))]
    return seeds[:n]


def annulus_experiment(r1: float, r0: float, L: float, seeds=None, h: float = 1 / 32,
                       config: OptimizeConfig | None = None, run_optimizer: bool = True) -> AnnulusReport:
    """Compare the best radial obstacle with glued non-radial ones in B(r0) minus B(r1).

    The radial class is the ring glued to the hole, whose eigenvalue is
    known in closed form.  It is empty when L < 4 pi r1, since any radial
    obstacle around the hole has perimeter at least that.
    """
    if not 0 < r1 < r0:
        raise ValueError("need 0 < r1 < r0")
    if not 0 < L < 2 * math.pi * (r0 + r1):
        raise InfeasibleError("the assumption L < H¹(∂Ω) is violated")
    domain = annulus_domain(r1, r0)
    radial_empty = L < 4 * math.pi * r1
    thick = lam_rad = None
    if not radial_empty:
        thick = L / (2 * math.pi) - 2 * r1
        lam_rad = analytic.annulus_lambda1(r1 + thick, r0)
    hr_grid = hr_ref = None
    hr_per = math.pi * (r0 + r1) + 2 * (r0 - r1)
    if hr_per <= L * (1 + 1e-4):
        hr_grid = solve(domain, half_ring(r1, r0), h, "corrected").lambda1
        hr_ref = analytic.half_annulus_lambda1(r1, r0)
    runs = []
    if run_optimizer:
        cfg = config or OptimizeConfig(L=L, h=h, kmax=4, max_iters=25)
        cfg = replace(cfg, L=L, init=tuple(seeds) if seeds else tuple(glued_seeds(r1, r0)))
        runs = maximize_all(domain, cfg)
    return AnnulusReport(r1, r0, L, radial_empty, thick, lam_rad, hr_grid, hr_ref, runs)
