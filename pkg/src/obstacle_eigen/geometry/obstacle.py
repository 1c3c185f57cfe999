"""Obstacles: compact connected sets removed from the domain.

An obstacle is either a ``region`` (a closed polygon, possibly with interior
rings, or a star-shaped Fourier curve together with its interior) or a
``chain``, a one-dimensional union of segments with zero area.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import shapely
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .distance import segment_distance
from .shapes import FourierShape, Polygon, ring_segments

KINDS = ("region", "chain")


@dataclass(frozen=True)
class Obstacle:
    kind: str
    vertices: np.ndarray
    edges: np.ndarray | None = None
    holes: tuple = ()
    fourier: FourierShape | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"obstacle kind must be one of {KINDS}")
        v = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        if len(v) == 0:
            raise ValueError("degenerate obstacle: no vertices")
        object.__setattr__(self, "vertices", v)
        if self.kind == "chain":
            e = np.zeros((0, 2), dtype=int) if self.edges is None else np.asarray(self.edges, dtype=int).reshape(-1, 2)
            object.__setattr__(self, "edges", e)
            if len(e) and (e.min() < 0 or e.max() >= len(v)):
                raise ValueError("edge index out of range")
            if not self._graph_connected():
                raise ValueError("chain is not connected")
        else:
            poly = Polygon(v, self.holes)  # validates simplicity
            object.__setattr__(self, "vertices", poly.vertices)
            object.__setattr__(self, "holes", poly.holes)
            if self.fourier is not None:
                self.fourier.check()

    # -- constructors -----------------------------------------------------
    @classmethod
    def point(cls, p) -> "Obstacle":
        return cls("chain", np.asarray(p, dtype=float).reshape(1, 2))

    @classmethod
    def segment(cls, a, b) -> "Obstacle":
        return cls("chain", np.array([a, b], dtype=float), np.array([[0, 1]]))

    @classmethod
    def chain(cls, vertices, closed: bool = False) -> "Obstacle":
        v = np.asarray(vertices, dtype=float).reshape(-1, 2)
        n = len(v)
        edges = [[i, i + 1] for i in range(n - 1)]
        if closed and n > 2:
            edges.append([n - 1, 0])
        return cls("chain", v, np.array(edges, dtype=int).reshape(-1, 2))

    @classmethod
    def graph(cls, vertices, edges) -> "Obstacle":
        return cls("chain", vertices, edges)

    @classmethod
    def polygon(cls, vertices, holes=()) -> "Obstacle":
        return cls("region", vertices, holes=tuple(holes))

    @classmethod
    def from_fourier(cls, shape: FourierShape, n: int = 1024) -> "Obstacle":
        shape.check()
        return cls("region", shape.boundary(n), fourier=shape)

    @classmethod
    def disk(cls, center, radius: float, n: int = 1024) -> "Obstacle":
        return cls.from_fourier(FourierShape(tuple(center), radius), n)

    @classmethod
    def annulus(cls, center, r_in: float, r_out: float, n: int = 1024) -> "Obstacle":
        t = 2 * np.pi * np.arange(n) / n
        e = np.column_stack([np.cos(t), np.sin(t)])
        c = np.asarray(center, dtype=float)
        return cls("region", c + r_out * e, holes=(c + r_in * e[::-1],))

    @classmethod
    def circle_chain(cls, center, radius: float, n: int = 1024) -> "Obstacle":
        t = 2 * np.pi * np.arange(n) / n
        c = np.asarray(center, dtype=float)
        return cls.chain(c + radius * np.column_stack([np.cos(t), np.sin(t)]), closed=True)

    # -- queries ------------------------------------------------------------
    def _graph_connected(self) -> bool:
        n = len(self.vertices)
        if n == 1:
            return True
        e = self.edges
        if len(e) == 0:
            return bool(np.all(np.ptp(self.vertices, axis=0) == 0))
        g = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
        ncomp, _ = connected_components(g, directed=False)
        return ncomp == 1

    def rings(self) -> list[np.ndarray]:
        return [self.vertices, *self.holes]

    def segments(self) -> tuple[np.ndarray, np.ndarray]:
        if self.kind == "chain":
            return self.vertices[self.edges[:, 0]], self.vertices[self.edges[:, 1]]
        a, b = zip(*(ring_segments(r) for r in self.rings()))
        return np.concatenate(a), np.concatenate(b)

    def to_shapely(self):
        if self.kind == "region":
            return shapely.Polygon(self.vertices, list(self.holes))
        if len(self.edges) == 0:
            return shapely.Point(self.vertices[0])
        return shapely.MultiLineString([[self.vertices[i], self.vertices[j]] for i, j in self.edges])

    def contains(self, points) -> np.ndarray:
        """Strict interior membership; always false for chains."""
        p = np.asarray(points, dtype=float).reshape(-1, 2)
        if self.kind == "chain":
            return np.zeros(len(p), dtype=bool)
        return shapely.contains_xy(self.to_shapely(), p[:, 0], p[:, 1])

    def distance(self, points, band: float | None = None) -> np.ndarray:
        """Euclidean distance from each point to the obstacle (zero inside regions)."""
        p = np.asarray(points, dtype=float).reshape(-1, 2)
        a, b = self.segments()
        if len(a) == 0:
            d = np.hypot(p[:, 0] - self.vertices[0, 0], p[:, 1] - self.vertices[0, 1])
            if band is not None:
                d[d > band] = np.inf
        else:
            d = segment_distance(p, a, b, band=band)
        if self.kind == "region":
            d[self.contains(p)] = 0.0
        return d

    def level(self, points) -> np.ndarray:
        """Positive inside a region obstacle, zero on its boundary."""
        if self.kind != "region":
            raise ValueError("chains have no interior level function")
        if self.fourier is not None:
            return self.fourier.level(points)
        p = np.asarray(points, dtype=float).reshape(-1, 2)
        d = segment_distance(p, *self.segments())
        return np.where(self.contains(p), d, -d)

    @property
    def area(self) -> float:
        return float(self.to_shapely().area) if self.kind == "region" else 0.0

    @property
    def boundary_length(self) -> float:
        """Length of the boundary (regions) or of the chain itself."""
        a, b = self.segments()
        return float(np.sum(np.linalg.norm(b - a, axis=1)))

    def bbox(self):
        return tuple(self.vertices.min(axis=0)), tuple(self.vertices.max(axis=0))

    @property
    def diameter(self) -> float:
        v = self.vertices
        if len(v) > 2000:
            from scipy.spatial import ConvexHull
            v = v[ConvexHull(v).vertices]
        diff = v[:, None, :] - v[None, :, :]
        return float(np.sqrt((diff ** 2).sum(axis=-1)).max())

    def sample_points(self, step: float) -> np.ndarray:
        """Points of the obstacle no farther than ``step`` apart along every segment,
        plus interior grid points at spacing ``step`` for regions."""
        pts = [self.vertices]
        a, b = self.segments()
        for p, q in zip(a, b):
            n = int(np.ceil(np.linalg.norm(q - p) / step))
            if n > 1:
                t = np.arange(1, n)[:, None] / n
                pts.append(p + t * (q - p))
        if self.kind == "region":
            (x0, y0), (x1, y1) = self.bbox()
            xs = np.arange(x0, x1 + step, step)
            ys = np.arange(y0, y1 + step, step)
            X, Y = np.meshgrid(xs, ys, indexing="ij")
            g = np.column_stack([X.ravel(), Y.ravel()])
            pts.append(g[self.contains(g)])
        return np.concatenate(pts)

    def scaled(self, t: float) -> "Obstacle":
        if self.fourier is not None:
            return Obstacle.from_fourier(self.fourier.scaled(t), len(self.vertices))
        return Obstacle(self.kind, t * self.vertices, self.edges, tuple(t * h for h in self.holes))
