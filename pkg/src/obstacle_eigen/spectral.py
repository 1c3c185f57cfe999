"""First Dirichlet eigenpair of the Laplacian on a domain minus an obstacle.

The operator is the 5-point stencil on the grid ``h * (i, j)``.  Two boundary
treatments are available:

``masked``
    A node is a degree of freedom only if it lies farther than h/2 from the
    domain boundary and from the obstacle.  Robust for any continuum, first
    order in h.
``corrected``
    A node is a degree of freedom if it lies in the open set.  A stencil arm
    that crosses the boundary at fraction ``theta`` of a cell is replaced by
    a Dirichlet condition at the crossing, which keeps the matrix symmetric
    and gives second-order eigenvalues on smooth boundaries.  Chains have no
    interior side, so nodes within h/2 of a chain are removed as in the
    masked mode.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.ndimage
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh, splu

from .geometry.distance import ScalarField, grid_for_box
from .geometry.minkowski import MinkowskiEstimate
from .geometry.obstacle import Obstacle
from .geometry.shapes import Domain, FourierShape

BOUNDARY_MODES = ("masked", "corrected")
THETA_MIN = 1e-3
MIN_INTERIOR = 9


class DomainBlockedError(ValueError):
    """The obstacle leaves no interior node (the eigenvalue is +inf)."""


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, last_rayleigh: float):
        super().__init__(f"{message} (last Rayleigh quotient {last_rayleigh:.10g})")
        self.last_rayleigh = last_rayleigh


@dataclass(frozen=True)
class DirichletProblem:
    domain: Domain
    obstacle: Obstacle | None
    h: float
    origin: tuple[float, float]
    shape: tuple[int, int]
    interior: np.ndarray = field(repr=False)   # bool (nx, ny)
    index: np.ndarray = field(repr=False)      # int (nx, ny), -1 off the unknowns
    matrix: sp.csc_matrix = field(repr=False)
    boundary: str = "masked"

    @property
    def n_interior(self) -> int:
        return int(self.interior.sum())

    def field_from_vector(self, x: np.ndarray) -> ScalarField:
        v = np.zeros(self.shape)
        v[self.interior] = x
        return ScalarField(self.origin, self.h, v)

    def vector_from_field(self, f: ScalarField | np.ndarray) -> np.ndarray:
        v = f.values if isinstance(f, ScalarField) else np.asarray(f, dtype=float)
        if v.shape != self.shape:
            raise ValueError("field does not live on the problem grid")
        return v[self.interior]


def _combined_level(domain: Domain, obstacle: Obstacle | None):
    """Level function positive exactly in the open set domain minus (region) obstacle."""
    if obstacle is None or obstacle.kind != "region":
        return domain.level

    def phi(p):
        return np.minimum(domain.level(p), -obstacle.level(p))
    return phi


def _crossing_fraction(phi, start: np.ndarray, step: np.ndarray, iters: int = 40) -> np.ndarray:
    """Fraction t in (0, 1] with phi(start + t*step) = 0, given phi(start) > 0 >= phi(start + step)."""
    lo = np.zeros(len(start))
    hi = np.ones(len(start))
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        pos = phi(start + mid[:, None] * step) > 0
        lo = np.where(pos, mid, lo)
        hi = np.where(pos, hi, mid)
    return 0.5 * (lo + hi)


def assemble(domain: Domain, obstacle: Obstacle | None, h: float, boundary: str = "masked") -> DirichletProblem:
    """Sparse SPD matrix of -Laplace with Dirichlet data on the domain boundary and the obstacle."""
    if not h > 0:
        raise ValueError("grid spacing must be positive")
    if boundary not in BOUNDARY_MODES:
        raise ValueError(f"boundary must be one of {BOUNDARY_MODES}")
    (x0, y0), (x1, y1) = domain.bbox()
    origin, nx, ny = grid_for_box(((x0 - 2 * h, y0 - 2 * h), (x1 + 2 * h, y1 + 2 * h)), h)
    grid = ScalarField(origin, h, np.zeros((nx, ny)))
    pts = grid.points()

    dom = domain.level(pts)
    blocked = np.zeros(len(pts), dtype=bool)
    if boundary == "masked":
        inside = dom > h / 2
        if obstacle is not None:
            cand = np.nonzero(inside)[0]
            blocked[cand] = obstacle.distance(pts[cand], band=h) <= h / 2
    else:
        phi = _combined_level(domain, obstacle)
        inside = dom > 0
        if obstacle is not None and obstacle.kind == "region":
            cand = np.nonzero(inside)[0]
            inside[cand] = obstacle.level(pts[cand]) < 0
        elif obstacle is not None:
            cand = np.nonzero(inside)[0]
            blocked[cand] = obstacle.distance(pts[cand], band=h) <= h / 2
    interior = (inside & ~blocked).reshape(nx, ny)
    n = int(interior.sum())
    if n == 0:
        raise DomainBlockedError("domain fully blocked: no interior grid nodes")
    if n < MIN_INTERIOR:
        raise DomainBlockedError(f"only {n} interior grid nodes, at least {MIN_INTERIOR} required")

    index = np.full((nx, ny), -1, dtype=np.int64)
    index[interior] = np.arange(n)
    inside = inside.reshape(nx, ny)
    blocked = blocked.reshape(nx, ny)
    ii, jj = np.nonzero(interior)
    rows, cols, vals = [], [], []
    diag = np.zeros(n)
    inv_h2 = 1.0 / h ** 2
    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        ni, nj = ii + di, jj + dj
        k = index[ii, jj]
        nb = index[ni, nj]
        link = nb >= 0
        rows.append(k[link])
        cols.append(nb[link])
        vals.append(np.full(int(link.sum()), -inv_h2))
        cut = ~link
        theta = np.ones(int(cut.sum()))
        if boundary == "corrected" and cut.any():
            # arms ending on a chain-blocked node that is still inside keep theta = 1
            geometric = ~inside[ni[cut], nj[cut]]
            if geometric.any():
                start = np.column_stack([origin[0] + h * ii[cut][geometric], origin[1] + h * jj[cut][geometric]])
                step = np.tile([h * di, h * dj], (len(start), 1)).astype(float)
                theta[geometric] = _crossing_fraction(phi, start, step)
        np.add.at(diag, k[cut], inv_h2 / np.maximum(theta, THETA_MIN))
        np.add.at(diag, k[link], inv_h2)
    rows.append(np.arange(n))
    cols.append(np.arange(n))
    vals.append(diag)
    A = sp.csc_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    return DirichletProblem(domain, obstacle, float(h), origin, (nx, ny), interior, index, A, boundary)


@dataclass(frozen=True)
class EigenResult:
    lambda1: float
    u1: ScalarField
    residual: float
    iterations: int
    h: float
    n_interior: int
    component: int = 0
    n_components: int = 1
    lambda2: float | None = None
    problem: DirichletProblem | None = field(default=None, repr=False, compare=False)
    # higher computed eigenpairs (lambda_k, normalized field), ascending
    modes: tuple = field(default=(), repr=False, compare=False)

    def to_dict(self) -> dict:
        return {"lambda1": self.lambda1, "residual": self.residual, "iterations": self.iterations,
                "h": self.h, "n_interior": self.n_interior, "component": self.component,
                "n_components": self.n_components}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _block_inverse_iteration(A, lu, tol, max_iter, residual_tol, block, rng):
    n = A.shape[0]
    X = rng.standard_normal((n, max(1, min(block, n))))
    X[:, 0] = 1.0
    prev = lam = np.inf
    for it in range(1, max_iter + 1):
        Q, _ = np.linalg.qr(lu.solve(X))
        H = Q.T @ (A @ Q)
        w, V = scipy.linalg.eigh(0.5 * (H + H.T))
        X = Q @ V
        lam = float(w[0])
        x = X[:, 0]
        res = float(np.linalg.norm(A @ x - lam * x) / (abs(lam) * np.linalg.norm(x)))
        if abs(lam - prev) < tol * abs(lam) and res < residual_tol:
            return w, X, it
        prev = lam
    raise ConvergenceError(f"eigensolver did not converge in {max_iter} iterations", lam)


def _lanczos(A, lu, tol, max_iter, block, rng):
    n = A.shape[0]
    count = [0]

    def apply_inverse(x):
        count[0] += 1
        return lu.solve(np.asarray(x, dtype=float))

    op = LinearOperator((n, n), matvec=apply_inverse, dtype=float)
    k = max(1, min(block // 2 or 1, n - 2))
    try:
        w, X = eigsh(A, k=k, sigma=0.0, which="LM", OPinv=op, tol=tol, maxiter=max_iter * n,
                     v0=np.ones(n) + 0.01 * rng.standard_normal(n))
    except ArpackNoConvergence as exc:
        lam = float(np.min(exc.eigenvalues)) if len(exc.eigenvalues) else float("nan")
        raise ConvergenceError("shift-invert Lanczos did not converge", lam) from None
    order = np.argsort(w)
    return w[order], X[:, order], count[0]


def smallest_eigenpair(problem: DirichletProblem, tol: float = 1e-8, max_iter: int = 500,
                       residual_tol: float = 1e-6, block: int = 6, seed: int = 0,
                       method: str = "lanczos") -> EigenResult:
    """Smallest eigenpair of the assembled operator.

    Both methods share one sparse LU factorization of the matrix.
    ``lanczos`` runs shift-invert Lanczos at shift 0 (ARPACK), which copes
    with tightly clustered low eigenvalues such as those of thin annuli.
    ``block`` runs block inverse iteration with Rayleigh-Ritz and stops once
    the lowest Ritz value changes by less than ``tol`` relative and the
    residual is below ``residual_tol``.  ``iterations`` counts applications
    of the inverse.
    """
    A = problem.matrix
    n = A.shape[0]
    lu = splu(A, permc_spec="COLAMD")
    rng = np.random.default_rng(seed)
    if method == "lanczos" and n > block + 2:
        w, X, it = _lanczos(A, lu, tol, max_iter, block, rng)
    elif method in ("lanczos", "block"):
        w, X, it = _block_inverse_iteration(A, lu, tol, max_iter, residual_tol, block, rng)
    else:
        raise ValueError("method must be 'lanczos' or 'block'")
    lam = float(w[0])
    u = X[:, 0].copy()
    res = float(np.linalg.norm(A @ u - lam * u) / (abs(lam) * np.linalg.norm(u)))
    if res > residual_tol:
        raise ConvergenceError(f"residual {res:.2e} above {residual_tol:g}", lam)
    if u.sum() < 0:
        u = -u
    u /= np.sqrt(problem.h ** 2 * np.sum(u * u))
    labels, ncomp = scipy.ndimage.label(problem.interior)
    lab = labels[problem.interior]
    mass = np.bincount(lab, weights=u * u, minlength=ncomp + 1)
    modes = tuple((float(w[k]), problem.field_from_vector(X[:, k] / np.sqrt(problem.h ** 2 * X[:, k] @ X[:, k])))
                  for k in range(1, len(w)))
    return EigenResult(lam, problem.field_from_vector(u), res, it, problem.h, n,
                       int(np.argmax(mass[1:])) + 1 if ncomp else 0, int(ncomp),
                       float(w[1]) if len(w) > 1 else None, problem, modes)


def solve(domain: Domain, obstacle: Obstacle | None, h: float, boundary: str = "masked", **kw) -> EigenResult:
    return smallest_eigenpair(assemble(domain, obstacle, h, boundary), **kw)


def rayleigh_quotient(problem: DirichletProblem, v) -> float:
    """Discrete Rayleigh quotient of a grid function (values off the unknowns are ignored)."""
    x = problem.vector_from_field(v) if not (isinstance(v, np.ndarray) and v.ndim == 1) else v
    den = float(x @ x)
    if den == 0:
        raise ValueError("zero test function")
    return float(x @ (problem.matrix @ x)) / den


# -- boundary quantities -----------------------------------------------------

#: Offsets (in units of h) along the normal where the eigenfunction is sampled.
NORMAL_OFFSETS = (1.5, 2.0, 2.5)


def _normal_slope_sq(result: EigenResult, points: np.ndarray, normals: np.ndarray) -> np.ndarray:
    """Squared normal derivative of u at boundary points where u = 0.

    u is interpolated at s = 1.5h, 2h, 2.5h along the normal and fitted by
    u(s) = a s + b s^2; the slope a is second-order accurate in s.
    """
    h = result.h
    s = h * np.asarray(NORMAL_OFFSETS)
    if result.problem is not None:
        clear = result.problem.domain.level(points)
        if np.any(clear < 3 * h):
            raise ValueError("insufficient stencil clearance: boundary sample within 3h of the domain boundary")
    samples = np.stack([result.u1.interpolate(points + si * normals) for si in s], axis=1)
    design = np.column_stack([s, s * s])
    coef, *_ = np.linalg.lstsq(design, samples.T, rcond=None)
    return coef[0] ** 2


def boundary_gradient_sq(result: EigenResult, obstacle, thetas) -> np.ndarray:
    """|grad u|^2 on the boundary of a Fourier-form obstacle at the given angles."""
    shape = getattr(obstacle, "fourier", obstacle)
    if not isinstance(shape, FourierShape):
        raise TypeError("boundary_gradient_sq needs a Fourier-form obstacle")
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    return _normal_slope_sq(result, shape.point(thetas), shape.normal(thetas))


def boundary_samples(obstacle: Obstacle, n: int = 512):
    """Points, normals (pointing out of the obstacle) and arc-length weights on its boundary.

    Chains are sampled on both sides, so every chain point appears twice with
    opposite normals.
    """
    if obstacle.fourier is not None:
        f = obstacle.fourier
        t = f.thetas(n)
        return f.point(t), f.normal(t), f.speed(t) * (2 * np.pi / n)
    a, b = obstacle.segments()
    seg = b - a
    length = np.linalg.norm(seg, axis=1)
    keep = length > 0
    a, seg, length = a[keep], seg[keep], length[keep]
    per = np.maximum(1, np.ceil(n * length / length.sum()).astype(int))
    rep = np.repeat(np.arange(len(a)), per)
    k = np.arange(len(rep)) - np.repeat(np.cumsum(per) - per, per)
    t = (k + 0.5) / per[rep]
    pts = a[rep] + t[:, None] * seg[rep]
    nrm = np.column_stack([seg[rep, 1], -seg[rep, 0]]) / length[rep, None]
    w = length[rep] / per[rep]
    if obstacle.kind == "chain":
        return np.concatenate([pts, pts]), np.concatenate([nrm, -nrm]), np.concatenate([w, w])
    return pts, nrm, w  # rings are counter-clockwise, holes clockwise


def lagrange_multiplier(result: EigenResult, obstacle: Obstacle, content: MinkowskiEstimate | float,
                        n: int = 512, origin=None) -> float:
    """mu = integral over the obstacle boundary of (du/dn)^2 (X.n), divided by the content.

    ``X`` is measured from ``origin`` (default: the centre of the domain) and
    ``n`` points out of the obstacle.  Boundary points too close to the
    domain boundary for the stencil (touching parts) are left out.
    """
    c = content.content if isinstance(content, MinkowskiEstimate) else float(content)
    if not c > 0:
        raise ValueError("Minkowski content must be positive")
    pts, nrm, w = boundary_samples(obstacle, n)
    if result.problem is None:
        raise ValueError("result carries no problem geometry")
    if origin is None:
        origin = result.problem.domain.center
    free = result.problem.domain.level(pts) >= 3 * result.h
    g2 = _normal_slope_sq(result, pts[free], nrm[free])
    xn = np.einsum("ij,ij->i", pts[free] - np.asarray(origin), nrm[free])
    return float(np.sum(g2 * xn * w[free]) / c)
