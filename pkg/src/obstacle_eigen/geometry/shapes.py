"""Planar shapes: circles, polygons, star-shaped Fourier curves, and domains.

Every closed shape exposes ``level(points)``, a function that is positive in
the open interior, zero on the boundary and negative outside.  For circles
and polygons it is the signed distance; for Fourier curves it is the radial
gap ``r(theta) - |x - c|``, which has the right zero set and sign but is not
a distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import shapely

from .distance import segment_distance

Point = tuple[float, float]


def _as_points(points) -> np.ndarray:
    return np.asarray(points, dtype=float).reshape(-1, 2)


def ring_segments(ring: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return ring, np.roll(ring, -1, axis=0)


def signed_area(ring: np.ndarray) -> float:
    x, y = ring[:, 0], ring[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def ring_length(ring: np.ndarray) -> float:
    return float(np.sum(np.linalg.norm(np.roll(ring, -1, axis=0) - ring, axis=1)))


def is_convex_ring(ring: np.ndarray, tol: float = 1e-12) -> bool:
    if len(ring) < 3:
        return True
    e = np.roll(ring, -1, axis=0) - ring
    cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
    scale = tol * float(np.max(np.abs(ring))) ** 2 + tol
    return bool(np.all(cross >= -scale) or np.all(cross <= scale))


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("circle radius must be positive")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    def level(self, points) -> np.ndarray:
        p = _as_points(points)
        return self.radius - np.hypot(p[:, 0] - self.center[0], p[:, 1] - self.center[1])

    def contains(self, points) -> np.ndarray:
        return self.level(points) > 0

    def boundary(self, n: int = 720) -> np.ndarray:
        t = 2 * np.pi * np.arange(n) / n
        return np.column_stack([self.center[0] + self.radius * np.cos(t),
                                self.center[1] + self.radius * np.sin(t)])

    @property
    def perimeter(self) -> float:
        return 2 * math.pi * self.radius

    @property
    def area(self) -> float:
        return math.pi * self.radius ** 2

    def bbox(self):
        c, r = self.center, self.radius
        return (c[0] - r, c[1] - r), (c[0] + r, c[1] + r)

    def is_convex(self) -> bool:
        return True

    def scaled(self, t: float) -> "Circle":
        return Circle((t * self.center[0], t * self.center[1]), t * self.radius)

    def to_shapely(self, n: int = 1024):
        return shapely.Polygon(self.boundary(n))


@dataclass(frozen=True)
class Polygon:
    """Simple polygon, stored counter-clockwise, with optional interior rings."""

    vertices: np.ndarray
    holes: tuple = ()

    def __post_init__(self):
        v = _as_points(self.vertices)
        if len(v) < 3:
            raise ValueError("polygon needs at least three vertices")
        if signed_area(v) < 0:
            v = v[::-1].copy()
        holes = []
        for hr in self.holes:
            hr = _as_points(hr)
            if signed_area(hr) > 0:
                hr = hr[::-1].copy()
            holes.append(hr)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "holes", tuple(holes))
        if not self.to_shapely().is_valid:
            raise ValueError("polygon is not simple")

    def rings(self) -> list[np.ndarray]:
        return [self.vertices, *self.holes]

    def segments(self) -> tuple[np.ndarray, np.ndarray]:
        a, b = zip(*(ring_segments(r) for r in self.rings()))
        return np.concatenate(a), np.concatenate(b)

    def to_shapely(self, n: int = 0):
        return shapely.Polygon(self.vertices, [h for h in self.holes])

    def contains(self, points) -> np.ndarray:
        p = _as_points(points)
        return shapely.contains_xy(self.to_shapely(), p[:, 0], p[:, 1])

    def level(self, points) -> np.ndarray:
        p = _as_points(points)
        d = segment_distance(p, *self.segments())
        return np.where(self.contains(p), d, -d)

    def boundary(self, n: int = 0) -> np.ndarray:
        return self.vertices

    @property
    def perimeter(self) -> float:
        return sum(ring_length(r) for r in self.rings())

    @property
    def area(self) -> float:
        return float(self.to_shapely().area)

    def bbox(self):
        return tuple(self.vertices.min(axis=0)), tuple(self.vertices.max(axis=0))

    def is_convex(self) -> bool:
        return not self.holes and is_convex_ring(self.vertices)

    def scaled(self, t: float) -> "Polygon":
        return Polygon(t * self.vertices, tuple(t * h for h in self.holes))


@dataclass(frozen=True)
class FourierShape:
    """Star-shaped curve ``c + r(theta) (cos theta, sin theta)`` with
    ``r(theta) = a0 + sum_k a_k cos(k theta) + b_k sin(k theta)``."""

    center: Point
    a0: float
    a: tuple = ()
    b: tuple = ()

    def __post_init__(self):
        a = tuple(float(x) for x in np.ravel(self.a))
        b = tuple(float(x) for x in np.ravel(self.b))
        if len(b) < len(a):
            b = b + (0.0,) * (len(a) - len(b))
        if len(a) < len(b):
            a = a + (0.0,) * (len(b) - len(a))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, "a0", float(self.a0))
        if not self.a0 > 0:
            raise ValueError("a0 must be positive")

    @property
    def kmax(self) -> int:
        return len(self.a)

    def radius(self, theta, deriv: int = 0) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        r = np.full(theta.shape, self.a0 if deriv == 0 else 0.0)
        for k, (ak, bk) in enumerate(zip(self.a, self.b), start=1):
            c, s = np.cos(k * theta), np.sin(k * theta)
            if deriv == 0:
                r = r + ak * c + bk * s
            elif deriv == 1:
                r = r + k * (-ak * s + bk * c)
            elif deriv == 2:
                r = r - k * k * (ak * c + bk * s)
            else:
                raise ValueError("deriv must be 0, 1 or 2")
        return r

    def thetas(self, n: int) -> np.ndarray:
        return 2 * np.pi * np.arange(n) / n

    def min_radius(self, n: int = 4096) -> float:
        return float(self.radius(self.thetas(n)).min())

    def check(self, n: int = 4096) -> None:
        if self.min_radius(n) <= 0:
            raise ValueError("self-intersecting parametrization: r(theta) <= 0")

    def point(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        r = self.radius(theta)
        return np.stack([self.center[0] + r * np.cos(theta), self.center[1] + r * np.sin(theta)], axis=-1)

    def normal(self, theta) -> np.ndarray:
        """Outward unit normal (pointing away from the enclosed region)."""
        theta = np.asarray(theta, dtype=float)
        r, dr = self.radius(theta), self.radius(theta, 1)
        c, s = np.cos(theta), np.sin(theta)
        nx = r * c + dr * s
        ny = r * s - dr * c
        norm = np.hypot(nx, ny)
        return np.stack([nx / norm, ny / norm], axis=-1)

    def speed(self, theta) -> np.ndarray:
        return np.hypot(self.radius(theta), self.radius(theta, 1))

    def curvature(self, theta) -> np.ndarray:
        r, dr, ddr = self.radius(theta), self.radius(theta, 1), self.radius(theta, 2)
        return (r * r + 2 * dr * dr - r * ddr) / (r * r + dr * dr) ** 1.5

    def level(self, points) -> np.ndarray:
        p = _as_points(points)
        dx, dy = p[:, 0] - self.center[0], p[:, 1] - self.center[1]
        return self.radius(np.arctan2(dy, dx)) - np.hypot(dx, dy)

    def contains(self, points) -> np.ndarray:
        return self.level(points) > 0

    def boundary(self, n: int = 1024) -> np.ndarray:
        return self.point(self.thetas(n))

    def perimeter_exact(self, n: int = 4096) -> float:
        # trapezoid rule is spectrally accurate for periodic integrands
        return float(np.mean(self.speed(self.thetas(n))) * 2 * np.pi)

    @property
    def perimeter(self) -> float:
        return self.perimeter_exact()

    @property
    def area(self) -> float:
        return math.pi * self.a0 ** 2 + 0.5 * math.pi * float(np.sum(np.square(self.a)) + np.sum(np.square(self.b)))

    def centroid(self, n: int = 4096) -> np.ndarray:
        t = self.thetas(n)
        r = self.radius(t)
        mx = np.mean(r ** 3 * np.cos(t)) * 2 * np.pi / 3
        my = np.mean(r ** 3 * np.sin(t)) * 2 * np.pi / 3
        return np.array(self.center) + np.array([mx, my]) / self.area

    def bbox(self, n: int = 4096):
        p = self.boundary(n)
        return tuple(p.min(axis=0)), tuple(p.max(axis=0))

    def is_convex(self, n: int = 4096) -> bool:
        return bool(np.all(self.curvature(self.thetas(n)) >= 0))

    # parameter-vector helpers used by the optimizer
    def to_vector(self) -> np.ndarray:
        return np.concatenate([[self.center[0], self.center[1], self.a0], self.a, self.b])

    @classmethod
    def from_vector(cls, v, kmax: int) -> "FourierShape":
        v = np.asarray(v, dtype=float)
        return cls((v[0], v[1]), v[2], tuple(v[3:3 + kmax]), tuple(v[3 + kmax:3 + 2 * kmax]))

    def radial_scaled(self, s: float) -> "FourierShape":
        return FourierShape(self.center, s * self.a0, tuple(s * x for x in self.a), tuple(s * x for x in self.b))

    def scaled(self, t: float) -> "FourierShape":
        """Homothety about the origin."""
        return FourierShape((t * self.center[0], t * self.center[1]), t * self.a0,
                            tuple(t * x for x in self.a), tuple(t * x for x in self.b))

    def translated(self, d) -> "FourierShape":
        return FourierShape((self.center[0] + d[0], self.center[1] + d[1]), self.a0, self.a, self.b)

    def with_kmax(self, kmax: int) -> "FourierShape":
        a = (self.a + (0.0,) * kmax)[:kmax]
        b = (self.b + (0.0,) * kmax)[:kmax]
        return FourierShape(self.center, self.a0, a, b)

    def recentered(self, new_center, kmax: int | None = None, n: int = 1024) -> "FourierShape":
        """Re-expand the same curve in polar form about ``new_center``.

        The curve must be star-shaped with respect to the new center.  The
        result is truncated to ``kmax`` modes (default: same as self).
        """
        kmax = self.kmax if kmax is None else kmax
        c = np.asarray(new_center, dtype=float)
        if not self.contains(c[None, :])[0]:
            raise ValueError("new center lies outside the shape")
        t = self.thetas(n)
        e = np.column_stack([np.cos(t), np.sin(t)])
        lo = np.zeros(n)
        hi = np.full(n, 2.0 * (self.radius(t).max() + np.hypot(*(c - np.array(self.center)))))
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            inside = self.level(c + mid[:, None] * e) > 0
            lo = np.where(inside, mid, lo)
            hi = np.where(inside, hi, mid)
        rho = 0.5 * (lo + hi)
        spec = np.fft.rfft(rho) / n
        a = tuple(2 * spec[1:kmax + 1].real)
        b = tuple(-2 * spec[1:kmax + 1].imag)
        return FourierShape((c[0], c[1]), spec[0].real, a, b).with_kmax(kmax)


def boundary_curvature(shape, theta) -> np.ndarray:
    """Signed curvature of a polar Fourier curve, positive where it is convex.

    ``shape`` is a FourierShape or any object carrying one as ``.fourier``.
    """
    shape = getattr(shape, "fourier", shape)
    if not isinstance(shape, FourierShape):
        raise TypeError("curvature needs a Fourier-form boundary")
    r = shape.radius(theta)
    if np.any(r <= 0):
        raise ValueError("self-intersecting parametrization: r(theta) <= 0")
    return shape.curvature(theta)


@dataclass(frozen=True)
class Domain:
    """The ambient open set: an outer circle or polygon minus closed convex holes."""

    outer: Circle | Polygon
    holes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "holes", tuple(self.holes))
        self.validate()

    def validate(self) -> None:
        outer = self.outer.to_shapely()
        shells = []
        for i, hole in enumerate(self.holes):
            if not hole.is_convex():
                raise ValueError(f"hole {i} is not convex")
            hs = hole.to_shapely()
            if not outer.contains(hs) or outer.exterior.distance(hs) <= 0:
                raise ValueError(f"hole {i} is not strictly inside the outer boundary")
            for j, other in enumerate(shells):
                if hs.distance(other) <= 0:
                    raise ValueError(f"holes {j} and {i} are not disjoint")
            shells.append(hs)

    def level(self, points) -> np.ndarray:
        """Signed distance to the boundary, positive inside the domain."""
        val = self.outer.level(points)
        for hole in self.holes:
            val = np.minimum(val, -hole.level(points))
        return val

    def contains(self, points) -> np.ndarray:
        return self.level(points) > 0

    def bbox(self):
        return self.outer.bbox()

    @property
    def center(self) -> np.ndarray:
        if isinstance(self.outer, Circle):
            return np.array(self.outer.center)
        c = self.outer.to_shapely().centroid
        return np.array([c.x, c.y])

    @property
    def perimeter(self) -> float:
        """One-dimensional measure of the whole boundary, outer plus holes."""
        return self.outer.perimeter + sum(h.perimeter for h in self.holes)

    def is_convex(self) -> bool:
        return not self.holes and self.outer.is_convex()

    def to_shapely(self, n: int = 1024):
        region = self.outer.to_shapely(n)
        for hole in self.holes:
            region = region.difference(hole.to_shapely(n))
        return region

    def scaled(self, t: float) -> "Domain":
        return Domain(self.outer.scaled(t), tuple(h.scaled(t) for h in self.holes))
