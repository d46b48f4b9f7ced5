"""Numerical kernel: adaptive quadrature, root finding, maximization, derivatives.

Integrands are expected to be numpy-vectorized callables (array in, array
out).  Scalar-returning callables such as ``lambda x: 1.0`` are broadcast.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

__all__ = [
    "QuadratureConfig",
    "QuadratureError",
    "RootError",
    "DEFAULT",
    "integrate",
    "find_root",
    "invert_monotone",
    "maximize",
    "derivative",
]

# Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
# Full symmetric node set on [-1, 1] and matching weights.
_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[:-1][::-1]])
_WK = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[:-1][::-1]])
_WG_FULL = np.zeros(15)
_WG_FULL[[1, 3, 5]] = _WG[:3]
_WG_FULL[[13, 11, 9]] = _WG[:3]
_WG_FULL[7] = _WG[3]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_depth: int = 60
    tail_cut: float = 1e-12
    max_intervals: int = 20000

    def __post_init__(self):
        if not self.abs_tol > 0 or not self.rel_tol > 0:
            raise ValueError("abs_tol and rel_tol must be positive")
        if self.max_depth < 10:
            raise ValueError("max_depth must be at least 10")
        if not 0 < self.tail_cut < 1e-6:
            raise ValueError("tail_cut must lie in (0, 1e-6)")


DEFAULT = QuadratureConfig()


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, interval=None, error=None):
        super().__init__(message)
        self.interval = interval
        self.error = error


class RootError(ValueError):
    pass


def _call(g, x):
    with np.errstate(all="ignore"):
        r = np.asarray(g(x), dtype=float)
    return np.broadcast_to(r, x.shape)


def _gk15(g, a, b):
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fx = _call(g, center + half * _NODES)
    resk = np.dot(_WK, fx)
    resg = np.dot(_WG_FULL, fx)
    reskh = 0.5 * resk
    resasc = np.dot(_WK, np.abs(fx - reskh))
    resabs = np.dot(_WK, np.abs(fx))
    err = abs((resk - resg) * half)
    resasc *= abs(half)
    resabs *= abs(half)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    if resabs > np.finfo(float).tiny / (50 * _EPS):
        err = max(50 * _EPS * resabs, err)
    val = resk * half
    if not (math.isfinite(val) and math.isfinite(err)):
        raise QuadratureError(f"non-finite integrand on [{a}, {b}]", (a, b), err)
    return val, err


def _to_finite(g, a, b, points):
    """Map an infinite range onto a finite one by a rational substitution."""
    if math.isfinite(a) and math.isfinite(b):
        return g, a, b, points
    if not math.isfinite(a) and not math.isfinite(b):
        def h(t):
            s = 1.0 - t * t
            return g(t / s) * (1.0 + t * t) / (s * s)

        def inv(x):
            return 0.0 if x == 0 else (-1.0 + math.sqrt(1.0 + 4.0 * x * x)) / (2.0 * x)

        return h, -1.0, 1.0, [inv(p) for p in points]
    if math.isfinite(a):
        def h(t):
            s = 1.0 - t
            return g(a + t / s) / (s * s)

        return h, 0.0, 1.0, [(p - a) / (1.0 + p - a) for p in points]

    def h(t):
        s = 1.0 - t
        return g(b - t / s) / (s * s)

    # orientation flips: integral over (-inf, b] equals integral over t in [0, 1)
    return h, 0.0, 1.0, [(b - p) / (1.0 + b - p) for p in points]


def integrate(g, a, b, cfg: QuadratureConfig | None = None, points=(), density=None):
    """Adaptive Gauss-Kronrod integral of ``g`` over (a, b).

    ``points`` are known kinks or jumps of the integrand; they become initial
    breakpoints.  Infinite limits are truncated to ``density``'s tail-cut
    quantile window when a density is given, otherwise they are mapped to a
    finite interval by substitution.
    """
    cfg = cfg or DEFAULT
    if a == b:
        return 0.0
    if a > b:
        return -integrate(g, b, a, cfg, points, density)
    if density is not None and not (math.isfinite(a) and math.isfinite(b)):
        lo, hi = density.window(cfg.tail_cut)
        a, b = max(a, lo), min(b, hi)
    g, a, b, pts = _to_finite(g, a, b, list(points))
    edges = sorted({a, b, *(p for p in pts if a < p < b)})

    heap = []
    total = 0.0
    total_err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e = _gk15(g, lo, hi)
        total += v
        total_err += e
        heapq.heappush(heap, (-e, lo, hi, v, 0))

    while total_err > max(cfg.abs_tol, cfg.rel_tol * abs(total)):
        negerr, lo, hi, v, depth = heapq.heappop(heap)
        if depth >= cfg.max_depth or len(heap) >= cfg.max_intervals:
            raise QuadratureError(
                f"no convergence: error {total_err:.3e} after {len(heap) + 1} intervals; "
                f"worst subinterval [{lo!r}, {hi!r}] (depth {depth})",
                (lo, hi),
                total_err,
            )
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(g, lo, mid)
        v2, e2 = _gk15(g, mid, hi)
        total += v1 + v2 - v
        total_err += e1 + e2 + negerr
        heapq.heappush(heap, (-e1, lo, mid, v1, depth + 1))
        heapq.heappush(heap, (-e2, mid, hi, v2, depth + 1))
        if not heap or total_err < 0:
            total_err = sum(-h[0] for h in heap)
    return float(total)


def find_root(g, lo, hi, tol=1e-12):
    """Root of scalar ``g`` bracketed by [lo, hi] (Brent's method)."""
    glo, ghi = g(lo), g(hi)
    if glo == 0:
        return float(lo)
    if ghi == 0:
        return float(hi)
    if glo * ghi > 0:
        raise RootError(f"root not bracketed: g({lo})={glo:.3g}, g({hi})={ghi:.3g}")
    return float(optimize.brentq(g, lo, hi, xtol=tol, rtol=4 * _EPS, maxiter=500))


def invert_monotone(fn, targets, lo, hi, tol=1e-13, max_iter=200):
    """Vectorized bisection: x with fn(x) = target for non-decreasing ``fn``."""
    t = np.asarray(targets, dtype=float)
    a = np.full(t.shape, float(lo))
    b = np.full(t.shape, float(hi))
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        below = fn(m) < t
        a = np.where(below, m, a)
        b = np.where(below, b, m)
        if np.all(b - a <= tol * (1.0 + np.abs(m))):
            break
    return 0.5 * (a + b)


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden(g, a, b, tol=1e-12):
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    gc, gd = float(g(np.array([c]))[0]), float(g(np.array([d]))[0])
    while b - a > tol * (1.0 + abs(a) + abs(b)):
        if gc >= gd:
            b, d, gd = d, c, gc
            c = b - _INVPHI * (b - a)
            gc = float(g(np.array([c]))[0])
        else:
            a, c, gc = c, d, gd
            d = a + _INVPHI * (b - a)
            gd = float(g(np.array([d]))[0])
    return (c, gc) if gc >= gd else (d, gd)


def maximize(g, a, b, grid=256, points=()):
    """Grid scan of [a, b] followed by golden-section refinement.

    Each piece between consecutive ``points`` is scanned separately so that
    jumps in ``g`` never fall inside a refinement bracket.
    """
    if grid < 64:
        raise ValueError("grid must be at least 64")
    edges = sorted({a, b, *(p for p in points if a < p < b)})
    best_x, best_g = a, -np.inf

    def gv(x):
        return _call(g, np.asarray(x, dtype=float))

    for lo, hi in zip(edges[:-1], edges[1:]):
        xs = np.linspace(lo, hi, grid)
        # keep open-interval semantics at piece edges
        span = hi - lo
        xs[0] += 1e-12 * span
        xs[-1] -= 1e-12 * span
        vals = gv(xs)
        i = int(np.argmax(vals))
        if vals[i] > best_g:
            best_x, best_g = xs[i], vals[i]
        x, v = _golden(gv, xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)])
        if v > best_g:
            best_x, best_g = x, v
    return float(best_x), float(best_g)


def derivative(g, x, h=1e-5):
    if not h > 0:
        raise ValueError("h must be positive")
    return (g(x + h) - g(x - h)) / (2.0 * h)
