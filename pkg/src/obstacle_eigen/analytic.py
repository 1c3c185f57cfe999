"""Closed-form Dirichlet eigenvalues of disks, annuli and half-annuli.

Everything here is built on a small self-contained implementation of the
Bessel functions J0, J1, Y0 and Y1: ascending power series for x <= 12 and
the Hankel asymptotic expansion beyond.  The annulus eigenvalues are the
squares of the smallest positive roots of the Bessel cross products

    J_n(w a) Y_n(w b) - J_n(w b) Y_n(w a),    n = 0 (full ring), n = 1 (half ring)

located by a geometric scan followed by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

EULER_GAMMA = 0.57721566490153286060651209
SERIES_CUTOFF = 12.0
SCAN_RATIO = 1.05
ROOT_RTOL = 1e-12
WRONSKIAN_RTOL = 1e-8


class BracketError(RuntimeError):
    """Raised when no sign change of a cross product is found on the scan."""


# ---------------------------------------------------------------------------
# Bessel functions
# ---------------------------------------------------------------------------

def _series_j(order: int, x: float) -> float:
    half = 0.5 * x
    q = -half * half
    term = 1.0 if order == 0 else half
    total = [term]
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + order))
        total.append(term)
        if abs(term) < 1e-18 * max(1.0, abs(total[0])) and k > 4:
            break
    return math.fsum(total)


def _series_y0(x: float) -> float:
    half = 0.5 * x
    q = -half * half
    term = 1.0
    harmonic = 0.0
    acc = []
    k = 0
    while True:
        k += 1
        term *= q / (k * k)
        harmonic += 1.0 / k
        acc.append(-term * harmonic)
        if abs(term * harmonic) < 1e-18 and k > 4:
            break
    return (2.0 / math.pi) * ((math.log(half) + EULER_GAMMA) * _series_j(0, x) + math.fsum(acc))


def _series_y1(x: float) -> float:
    half = 0.5 * x
    q = -half * half
    # k = 0 term: psi(1) + psi(2) = 1 - 2 gamma
    term = half
    psi_sum = 1.0 - 2.0 * EULER_GAMMA
    acc = [psi_sum * term]
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + 1))
        psi_sum += 1.0 / k + 1.0 / (k + 1)
        acc.append(psi_sum * term)
        if abs(psi_sum * term) < 1e-18 and k > 4:
            break
    return (2.0 / math.pi) * math.log(half) * _series_j(1, x) - 2.0 / (math.pi * x) - math.fsum(acc) / math.pi


def _hankel(order: int, x: float) -> tuple[float, float]:
    """Return (J_order(x), Y_order(x)) from the Hankel asymptotic expansion."""
    mu = 4.0 * order * order
    p_terms = [1.0]
    q_terms = []
    coeff = 1.0
    prev = math.inf
    k = 0
    while True:
        k += 1
        coeff *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = abs(coeff)
        if mag > prev or mag < 1e-17:
            break
        prev = mag
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            q_terms.append(sign * coeff)
        else:
            p_terms.append(sign * coeff)
    p = math.fsum(p_terms)
    q = math.fsum(q_terms)
    chi = x - (0.5 * order + 0.25) * math.pi
    amp = math.sqrt(2.0 / (math.pi * x))
    c, s = math.cos(chi), math.sin(chi)
    return amp * (p * c - q * s), amp * (p * s + q * c)


def _check_order(order: int) -> None:
    if order not in (0, 1):
        raise ValueError(f"only orders 0 and 1 are supported, got {order}")


def _j_scalar(order: int, x: float) -> float:
    sign = 1.0
    if x < 0:
        x = -x
        sign = -1.0 if order == 1 else 1.0
    if x <= SERIES_CUTOFF:
        return sign * _series_j(order, x)
    return sign * _hankel(order, x)[0]


def _y_scalar(order: int, x: float) -> float:
    if not x > 0:
        raise ValueError(f"Y_{order}(x) requires x > 0, got {x}")
    if x <= SERIES_CUTOFF:
        return _series_y0(x) if order == 0 else _series_y1(x)
    return _hankel(order, x)[1]


def bessel_j(order: int, x):
    """Bessel function of the first kind J_order(x) for order 0 or 1."""
    _check_order(order)
    if np.ndim(x) == 0:
        return _j_scalar(order, float(x))
    arr = np.asarray(x, dtype=float)
    return np.array([_j_scalar(order, v) for v in arr.ravel()]).reshape(arr.shape)


def bessel_y(order: int, x):
    """Bessel function of the second kind Y_order(x) for order 0 or 1; x must be positive."""
    _check_order(order)
    if np.ndim(x) == 0:
        return _y_scalar(order, float(x))
    arr = np.asarray(x, dtype=float)
    return np.array([_y_scalar(order, v) for v in arr.ravel()]).reshape(arr.shape)


def wronskian_defect(x: float) -> float:
    """Relative defect of J1 Y0 - J0 Y1 = 2 / (pi x)."""
    exact = 2.0 / (math.pi * x)
    got = _j_scalar(1, x) * _y_scalar(0, x) - _j_scalar(0, x) * _y_scalar(1, x)
    return abs(got - exact) / exact


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BesselRootQuery:
    """Smallest positive root request for J_order or a Bessel cross product."""

    order: int
    kind: str = "cross-product-zero"  # or "J-zero"
    r_inner: float = 0.0
    r_outer: float = 1.0
    bracket: Optional[tuple[float, float]] = None

    def function(self) -> Callable[[float], float]:
        _check_order(self.order)
        n = self.order
        if self.kind == "J-zero":
            return lambda w: _j_scalar(n, w)
        if self.kind != "cross-product-zero":
            raise ValueError(f"unknown root kind {self.kind!r}")
        a, b = self.r_inner, self.r_outer
        if not 0 < a < b:
            raise ValueError("cross-product queries need 0 < r_inner < r_outer")
        return lambda w: _j_scalar(n, w * a) * _y_scalar(n, w * b) - _j_scalar(n, w * b) * _y_scalar(n, w * a)


def scan_bracket(f: Callable[[float], float], start: float, ratio: float = SCAN_RATIO,
                 stop: float = 1e4) -> tuple[float, float]:
    """First sign change of ``f`` on the geometric grid start * ratio**k."""
    lo = start
    f_lo = f(lo)
    scanned = 1
    while lo < stop:
        hi = lo * ratio
        f_hi = f(hi)
        scanned += 1
        if f_lo == 0.0:
            return lo, lo
        if np.sign(f_hi) != np.sign(f_lo):
            return lo, hi
        lo, f_lo = hi, f_hi
    raise BracketError(f"no sign change found scanning {scanned} points from {start:g} up to {stop:g}")


def bisect_root(f: Callable[[float], float], lo: float, hi: float, rtol: float = ROOT_RTOL) -> float:
    f_lo = f(lo)
    if lo == hi:
        return lo
    if np.sign(f_lo) == np.sign(f(hi)):
        raise BracketError(f"bracket [{lo}, {hi}] has no sign change")
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def smallest_root(query: BesselRootQuery) -> float:
    f = query.function()
    if query.bracket is not None:
        lo, hi = query.bracket
    else:
        scale = query.r_outer if query.kind == "cross-product-zero" else 1.0
        lo, hi = scan_bracket(f, 1e-3 / scale)
    root = bisect_root(f, lo, hi)
    x = root * (query.r_outer if query.kind == "cross-product-zero" else 1.0)
    if wronskian_defect(x) > WRONSKIAN_RTOL:
        raise ArithmeticError(f"Bessel accuracy sentinel tripped at x={x:g}")
    return root


def j01() -> float:
    """First positive zero of J0 (about 2.404826)."""
    return smallest_root(BesselRootQuery(order=0, kind="J-zero", bracket=(2.0, 3.0)))


# ---------------------------------------------------------------------------
# Eigenvalues
# ---------------------------------------------------------------------------

def disk_lambda1(R: float) -> float:
    """First Dirichlet eigenvalue of a disk of radius R, (j01 / R)**2."""
    if R <= 0:
        raise ValueError("radius must be positive")
    return (j01() / R) ** 2


def annulus_lambda1(r_in: float, r_out: float) -> float:
    """First Dirichlet eigenvalue of the annulus r_in < |x| < r_out."""
    return smallest_root(BesselRootQuery(order=0, r_inner=r_in, r_outer=r_out)) ** 2


def half_annulus_lambda1(r_in: float, r_out: float) -> float:
    """First Dirichlet eigenvalue of a half annulus, i.e. the second one of the full annulus."""
    return smallest_root(BesselRootQuery(order=1, r_inner=r_in, r_outer=r_out)) ** 2


def annulus_mode(r_in: float, r_out: float):
    """Radial profile of the first annulus eigenfunction, L2-normalized on the annulus.

    Returns ``(lam, u, du)`` where ``u(r)`` and ``du(r)`` evaluate the profile
    and its radial derivative.
    """
    w = smallest_root(BesselRootQuery(order=0, r_inner=r_in, r_outer=r_out))
    y0a, j0a = _y_scalar(0, w * r_in), _j_scalar(0, w * r_in)

    def raw(r):
        return _j_scalar(0, w * r) * y0a - j0a * _y_scalar(0, w * r)

    def raw_d(r):
        return w * (-_j_scalar(1, w * r) * y0a + j0a * _y_scalar(1, w * r))

    # Gauss-Legendre quadrature of 2 pi int u^2 r dr
    nodes, weights = np.polynomial.legendre.leggauss(80)
    rs = 0.5 * (r_out - r_in) * nodes + 0.5 * (r_out + r_in)
    vals = np.array([raw(r) for r in rs])
    norm2 = 2 * math.pi * 0.5 * (r_out - r_in) * float(np.sum(weights * vals**2 * rs))
    scale = 1.0 / math.sqrt(norm2)
    if raw(0.5 * (r_in + r_out)) < 0:
        scale = -scale
    return w * w, (lambda r: scale * raw(r)), (lambda r: scale * raw_d(r))


def ring_admissible_h(r0: float) -> float:
    """Ring thickness whose perimeter budget matches the half ring, with inner radius 1.

    The glued ring of thickness h has perimeter 2 pi (2 + h); the upper half of
    B(r0) minus B(1) has perimeter pi r0 + pi + 2 (r0 - 1).  Equating gives
    h = (r0 - 3)/2 + (r0 - 1)/pi.  Negative values mean the half ring is not
    admissible at this r0.
    """
    if r0 <= 1:
        raise ValueError("r0 must exceed the inner radius 1")
    return (r0 - 3.0) / 2.0 + (r0 - 1.0) / math.pi


def ring_critical_r0() -> float:
    """Outer radius at which the admissible thickness vanishes, (3 pi + 2)/(pi + 2)."""
    return (3 * math.pi + 2) / (math.pi + 2)


@dataclass(frozen=True)
class HPWResult:
    met: bool
    defect: float  # L0^2 - L1^2 - 4 pi area
    eigenvalue: Optional[float] = None


def hpw_bound(L0: float, L1: float, area: float, tol: float = 1e-9) -> HPWResult:
    """Hersch-Payne-Weinberger admissibility and the ring eigenvalue it certifies.

    When L0^2 - L1^2 = 4 pi area (within ``tol`` relative to L0^2) the ring with
    boundary lengths L0 and L1 is the unique maximizer and its eigenvalue is
    returned; otherwise only the defect is reported.
    """
    if not (L0 > L1 > 0):
        raise ValueError("need L0 > L1 > 0")
    defect = L0 * L0 - L1 * L1 - 4 * math.pi * area
    if abs(defect) <= tol * L0 * L0:
        lam = annulus_lambda1(L1 / (2 * math.pi), L0 / (2 * math.pi))
        return HPWResult(True, defect, lam)
    return HPWResult(False, defect, None)


def sweep_table(pairs) -> list[tuple[float, float, float, float]]:
    """Rows ``(r_in, r_out, lambda1_annulus, lambda1_half)`` for CSV emission."""
    return [(a, b, annulus_lambda1(a, b), half_annulus_lambda1(a, b)) for a, b in pairs]
