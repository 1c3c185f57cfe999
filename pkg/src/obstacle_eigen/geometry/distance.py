"""Exact point-to-segment distances and uniform-grid scalar fields."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MAX_BLOCK = 2_000_000  # entries of a (points x segments) work array


def _pair_d2(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Squared distances between every point of ``p`` (n,2) and segment ``a``-``b`` (m,2)."""
    ab = b - a
    len2 = np.einsum("ij,ij->i", ab, ab)
    safe = np.where(len2 > 0, len2, 1.0)
    px = p[:, None, 0] - a[None, :, 0]
    py = p[:, None, 1] - a[None, :, 1]
    t = (px * ab[None, :, 0] + py * ab[None, :, 1]) / safe[None, :]
    t = np.clip(np.where(len2[None, :] > 0, t, 0.0), 0.0, 1.0)
    dx = px - t * ab[None, :, 0]
    dy = py - t * ab[None, :, 1]
    return dx * dx + dy * dy


def _brute_distance(points, starts, ends) -> np.ndarray:
    out = np.full(len(points), np.inf)
    step = max(1, _MAX_BLOCK // len(starts))
    for q in range(0, len(points), step):
        out[q:q + step] = _pair_d2(points[q:q + step], starts, ends).min(axis=1)
    return np.sqrt(out)


def segment_distance(points, starts, ends, band: float | None = None) -> np.ndarray:
    """Exact Euclidean distance from each point to the union of segments.

    Points are bucketed into square tiles.  The distance from a tile centre c
    to every segment bounds which segments can be nearest to any point of the
    tile (those within d(c) + 2 rho, rho the tile radius), and only those are
    measured.  Points farther than ``band`` from every segment come back as
    ``inf``; tiles that lie entirely beyond the band are skipped.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    starts = np.asarray(starts, dtype=float).reshape(-1, 2)
    ends = np.asarray(ends, dtype=float).reshape(-1, 2)
    out = np.full(len(points), np.inf)
    if len(starts) == 0 or len(points) == 0:
        return out
    if len(starts) * len(points) <= _MAX_BLOCK:
        out = _brute_distance(points, starts, ends)
    else:
        lo = points.min(axis=0)
        span = float(np.max(points.max(axis=0) - lo))
        size = max(span / 64, 1e-12)
        key = np.floor((points - lo) / size).astype(np.int64)
        ncol = int(key[:, 1].max()) + 1
        flat = key[:, 0] * ncol + key[:, 1]
        order = np.argsort(flat, kind="stable")
        tiles, first = np.unique(flat[order], return_index=True)
        bounds = np.append(first, len(order))
        centers = lo + size * (np.column_stack([tiles // ncol, tiles % ncol]) + 0.5)
        rho = size / np.sqrt(2)
        step = max(1, _MAX_BLOCK // len(starts))
        for t0 in range(0, len(tiles), step):
            dc = np.sqrt(_pair_d2(centers[t0:t0 + step], starts, ends))
            near = dc.min(axis=1)
            for j in range(len(dc)):
                if band is not None and near[j] - rho > band:
                    continue
                cand = dc[j] <= near[j] + 2 * rho
                idx = order[bounds[t0 + j]:bounds[t0 + j + 1]]
                out[idx] = _brute_distance(points[idx], starts[cand], ends[cand])
    if band is not None:
        out[out > band] = np.inf
    return out


@dataclass(frozen=True)
class ScalarField:
    """Samples of a function on the nodes ``origin + h * (i, j)``; ``values[i, j]``."""

    origin: tuple[float, float]
    h: float
    values: np.ndarray

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("grid spacing must be positive")
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or min(v.shape) < 2:
            raise ValueError("field needs at least 2 x 2 nodes")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", v)

    @property
    def nx(self) -> int:
        return self.values.shape[0]

    @property
    def ny(self) -> int:
        return self.values.shape[1]

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (self.origin[0] + self.h * np.arange(self.nx),
                self.origin[1] + self.h * np.arange(self.ny))

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        x, y = self.axes()
        return np.meshgrid(x, y, indexing="ij")

    def points(self) -> np.ndarray:
        X, Y = self.coords()
        return np.column_stack([X.ravel(), Y.ravel()])

    def scaled(self, c: float) -> "ScalarField":
        return ScalarField(self.origin, self.h, c * self.values)

    def interpolate(self, pts) -> np.ndarray:
        """Bilinear interpolation; points outside the grid raise."""
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        if len(pts) == 0:
            return np.zeros(0)
        fx = (pts[:, 0] - self.origin[0]) / self.h
        fy = (pts[:, 1] - self.origin[1]) / self.h
        if (fx.min() < 0 or fy.min() < 0 or fx.max() > self.nx - 1 or fy.max() > self.ny - 1):
            raise ValueError("interpolation point outside the grid")
        i = np.minimum(np.floor(fx).astype(int), self.nx - 2)
        j = np.minimum(np.floor(fy).astype(int), self.ny - 2)
        tx, ty = fx - i, fy - j
        v = self.values
        return ((1 - tx) * (1 - ty) * v[i, j] + tx * (1 - ty) * v[i + 1, j]
                + (1 - tx) * ty * v[i, j + 1] + tx * ty * v[i + 1, j + 1])

    def to_csv(self, path, name: str = "u") -> None:
        X, Y = self.coords()
        with open(path, "w", newline="\n") as fh:
            fh.write(f"x,y,{name}\n")
            for x, y, u in zip(X.ravel(), Y.ravel(), self.values.ravel()):
                fh.write(f"{x!r},{y!r},{u!r}\n")


def aligned_axis(lo: float, hi: float, h: float) -> np.ndarray:
    """Grid coordinates k*h covering [lo, hi]."""
    i0 = int(np.floor(lo / h + 1e-9))
    i1 = int(np.ceil(hi / h - 1e-9))
    return h * np.arange(i0, i1 + 1)


def grid_for_box(box, h: float) -> tuple[tuple[float, float], int, int]:
    (x0, y0), (x1, y1) = box
    xs = aligned_axis(x0, x1, h)
    ys = aligned_axis(y0, y1, h)
    return (float(xs[0]), float(ys[0])), len(xs), len(ys)
