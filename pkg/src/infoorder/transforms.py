"""Location/scale-free density transforms and partial-ordering checks.

The transforms map a density on the real line to a density on (0, 1):

* ``pdq``:        f*(u) = f(F^-1(u)) / H*(f)
* ``f_colon_g``:  (f:g)(u) = f(G^-1(u)) / g(G^-1(u))
* ``f_tilde``:    f:phi with phi the normal sharing mean and variance with f

Each comes in two flavours.  The ``*_density`` functions return an exact
:class:`QuantileRatio` whose functionals are integrated in x-space after the
substitution u = G(x).  The plain functions tabulate it on a midpoint grid
and return a :class:`~infoorder.dist.GridDensity`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dist import DEFAULT, Density, GridDensity, Normal
from .measures import h_star
from .quadrature import QuadratureConfig, integrate, maximize

__all__ = [
    "ShiftFunction",
    "OrderingVerdict",
    "QuantileRatio",
    "shift_function",
    "check_ordering",
    "dilation_check",
    "DILATION_FAMILY",
    "pdq",
    "pdq_density",
    "f_colon_g",
    "f_colon_g_density",
    "f_tilde",
    "f_tilde_density",
    "kl_divergence",
    "decreasing_rearrangement",
    "simple_function",
    "simple_rearrangement",
    "info_order",
]

LOG_CLIP = 700.0
RELATIONS = ("location", "dispersion", "skewness", "kurtosis", "information")


@dataclass(frozen=True)
class OrderingVerdict:
    relation: str
    holds: bool
    witness: float | str | None
    margin: float

    def __str__(self):
        state = "holds" if self.holds else "does not hold"
        out = f"{self.relation} ordering {state} (margin {self.margin:.6g})"
        if not self.holds:
            out += f"; witness {self.witness}"
        return out


@dataclass(frozen=True)
class ShiftFunction:
    """Delta(x) = G^-1(F(x)) - x, the monotone transport shift from F to G."""

    dF: Density
    dG: Density

    @property
    def domain(self):
        return self.dF.support

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.domain
        if np.any(x <= lo) or np.any(x >= hi):
            raise ValueError(f"shift function evaluated outside ({lo}, {hi})")
        return self.dG.quantile(self.dF.cdf(x)) - x


def shift_function(dF: Density, dG: Density) -> ShiftFunction:
    return ShiftFunction(dF, dG)


def check_ordering(dF: Density, dG: Density, relation: str, grid: int = 401) -> OrderingVerdict:
    """Test the shift-function ordering of ``dG`` relative to ``dF``.

    location: Delta >= 0; dispersion: Delta non-decreasing; skewness: Delta
    convex; kurtosis: Delta concave then convex (smoothed second differences
    change sign at most once, from <= 0 to >= 0).  ``information`` compares
    the pdQ transforms with :func:`info_order`.
    """
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    if relation == "information":
        return info_order(pdq(dF), pdq(dG))
    if grid < 201:
        raise ValueError("grid must be at least 201")
    u = np.linspace(0.001, 0.999, grid)
    x = np.asarray(dF.quantile(u), dtype=float)
    # G^-1(F(x)) at x = F^-1(u) is G^-1(u)
    delta = np.asarray(dG.quantile(u), dtype=float) - x
    scale = max(1.0, float(np.ptp(x)), float(np.max(np.abs(delta))))
    tol = 1e-7 * scale

    if relation == "location":
        i = int(np.argmin(delta))
        return OrderingVerdict(relation, bool(delta[i] >= -tol), float(x[i]), float(delta[i]))
    if relation == "dispersion":
        d1 = np.diff(delta)
        i = int(np.argmin(d1))
        return OrderingVerdict(relation, bool(d1[i] >= -tol), float(x[i + 1]), float(d1[i]))

    slopes = np.diff(delta) / np.diff(x)
    second = np.diff(slopes)
    stol = 1e-7 * max(1.0, float(np.max(np.abs(slopes))))
    if relation == "skewness":
        i = int(np.argmin(second))
        return OrderingVerdict(relation, bool(second[i] >= -stol), float(x[i + 1]), float(second[i]))

    smooth = np.convolve(second, np.ones(3) / 3.0, mode="same")
    positive = np.flatnonzero(smooth > stol)
    if positive.size == 0:
        return OrderingVerdict(relation, True, None, 0.0)
    tail = smooth[positive[0]:]
    j = int(np.argmin(tail))
    k = positive[0] + j
    return OrderingVerdict(relation, bool(tail[j] >= -stol), float(x[k + 1]), float(min(tail[j], 0.0)))


def _dilation_family():
    fam = [("t^2", np.square, ()), ("|t|", np.abs, (0.0,)), ("|t|^3", lambda t: np.abs(t) ** 3, ())]
    for k in (-1.0, 0.0, 1.0):
        fam.append((f"max(0,t-{k:g})", lambda t, k=k: np.maximum(0.0, t - k), (k,)))
        fam.append((f"max(0,-t-{k:g})", lambda t, k=k: np.maximum(0.0, -t - k), (-k,)))
    return fam


DILATION_FAMILY = _dilation_family()


def _centered_expect(d: Density, C, kinks, cfg):
    m = d.mean
    lo, hi = d.window(cfg.tail_cut)
    pts = list(d.breakpoints) + [m + k for k in kinks]
    return integrate(lambda x: C(x - m) * d.pdf(x), lo, hi, cfg, points=pts)


def dilation_check(dF: Density, dG: Density, cs=None, cfg: QuadratureConfig | None = None) -> OrderingVerdict:
    """E[C(x - Ex)] <= E[C(y - Ey)] for each convex C in the test family.

    A necessary condition for the dispersion ordering; witness is the name
    of the first failing C.
    """
    cfg = cfg or DEFAULT
    cs = DILATION_FAMILY if cs is None else cs
    margin, witness = math.inf, None
    for name, C, kinks in cs:
        slack = _centered_expect(dG, C, kinks, cfg) - _centered_expect(dF, C, kinks, cfg)
        if slack < -1e-8 and witness is None:
            witness = name
        margin = min(margin, slack)
    if abs(margin) < 1e-8:
        margin = 0.0
    return OrderingVerdict("dispersion", witness is None, witness, float(margin))


# -- densities on (0, 1) ------------------------------------------------------------


class QuantileRatio(Density):
    """Density u -> f(G^-1(u)) / k(G^-1(u)) on (0, 1).

    With ``const`` set, k is that constant (the pdQ case, G = F); otherwise k
    is the pdf of ``ref``.
    """

    support = (0.0, 1.0)

    def __init__(self, num: Density, ref: Density, const: float | None = None, label=None):
        self.num, self.ref, self.const = num, ref, const
        self.kinks = ()
        self.label = label or f"{num.label}:{ref.label}"

    def log_ratio(self, x):
        lf = self.num.logpdf(x)
        lk = math.log(self.const) if self.const is not None else self.ref.logpdf(x)
        with np.errstate(invalid="ignore"):
            out = np.where(np.isfinite(lf), lf - lk, -np.inf)
        return out

    def ratio(self, x):
        return np.exp(np.minimum(self.log_ratio(x), LOG_CLIP))

    def pdf(self, u):
        u = np.asarray(u, dtype=float)
        inside = (u > 0) & (u < 1)
        x = self.ref.quantile(np.where(inside, u, 0.5))
        return np.where(inside, self.ratio(x), 0.0)

    def logpdf(self, u):
        with np.errstate(divide="ignore"):
            return np.log(self.pdf(u))

    def cdf(self, u):
        u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
        if self.const is None:
            # integral of f(G^-1(s)) / g(G^-1(s)) ds up to u is F(G^-1(u))
            inner = np.clip(u, 1e-300, 1 - 1e-16)
            out = self.num.cdf(self.ref.quantile(inner))
            return np.where(u <= 0, 0.0, np.where(u >= 1, 1.0, out))
        return super().cdf(u)

    def window(self, tail_cut=DEFAULT.tail_cut):
        return (0.0, 1.0)

    def _xwindow(self, cfg):
        # hull of both windows: f:g puts weight f log(f/g) wherever f lives
        rlo, rhi = self.ref.window(cfg.tail_cut)
        nlo, nhi = self.num.window(cfg.tail_cut)
        lo, hi = min(rlo, nlo), max(rhi, nhi)
        pts = sorted(set(self.ref.breakpoints) | set(self.num.breakpoints) | {rlo, rhi, nlo, nhi})
        return lo, hi, [p for p in pts if lo < p < hi]

    def escaped_mass(self) -> float:
        """Mass of f outside the support of the reference density."""
        lo, hi = self.ref.support
        out = 0.0
        if math.isfinite(lo):
            out += float(self.num.cdf(lo))
        if math.isfinite(hi):
            out += 1.0 - float(self.num.cdf(hi))
        return out if out > 1e-15 else 0.0

    def integrate_pdf(self, h, cfg: QuadratureConfig | None = None):
        """Integral over (0, 1) of h(pdf(u)) du, computed as an x-integral."""
        cfg = cfg or DEFAULT
        lo, hi, pts = self._xwindow(cfg)
        return integrate(lambda x: h(self.ratio(x)) * self.ref.pdf(x), lo, hi, cfg, points=pts)

    def entropy(self, cfg: QuadratureConfig | None = None):
        """-integral of r log r du, written as -E_f[log r(x)] to avoid overflow.

        The log-ratio grows without bound in the tails, so the integral runs
        over the full support of f (infinite ends mapped by substitution).
        """
        cfg = cfg or DEFAULT
        if self.const is None and self.escaped_mass() > 0:
            # f puts mass where g vanishes: KL(f || g) is infinite
            return -math.inf
        lo, hi = self.num.support
        _, _, pts = self._xwindow(cfg)
        lk_const = math.log(self.const) if self.const is not None else None

        def g(x):
            lf = self.num.logpdf(x)
            lk = lk_const if lk_const is not None else self.ref.logpdf(x)
            with np.errstate(invalid="ignore"):
                return np.where(np.isfinite(lf), -np.exp(lf) * (lf - lk), 0.0)

        return integrate(g, lo, hi, cfg, points=[p for p in pts if lo < p < hi])

    def expect(self, h, cfg: QuadratureConfig | None = None):
        cfg = cfg or DEFAULT
        lo, hi, pts = self._xwindow(cfg)
        return integrate(lambda x: h(self.ref.cdf(x)) * self.ratio(x) * self.ref.pdf(x), lo, hi, cfg, points=pts)

    def sup_pdf(self, cfg: QuadratureConfig | None = None):
        cfg = cfg or DEFAULT
        lo, hi, pts = self._xwindow(cfg)
        return maximize(self.ratio, lo, hi, grid=2048, points=pts)[1]

    def to_grid(self, n: int = 1000) -> GridDensity:
        u = (np.arange(n) + 0.5) / n
        x = self.ref.quantile(u)
        lr = self.log_ratio(x)
        clipped = int(np.sum(lr > LOG_CLIP))
        vals = np.exp(np.minimum(lr, LOG_CLIP))
        vals = np.where(np.isfinite(vals), vals, 0.0)
        g = GridDensity(0.0, 1.0, vals, layout="cells", label=self.label,
                        meta={"clip_count": clipped})
        g.meta["raw_mass"] = g.mass
        return g


def pdq_density(d: Density, cfg=None) -> QuantileRatio:
    hs = h_star(d, cfg)
    if not (hs > 0 and math.isfinite(hs)):
        raise ValueError("H* must be finite and positive")
    return QuantileRatio(d, d, const=hs, label=f"pdq[{d.label}]")


def pdq(d: Density, grid: int = 1000) -> GridDensity:
    """Probability density quantile f* tabulated at u_i = (i - 1/2) / grid."""
    if grid < 512:
        raise ValueError("grid must be at least 512")
    return pdq_density(d).to_grid(grid)


def f_colon_g_density(dF: Density, dG: Density) -> QuantileRatio:
    return QuantileRatio(dF, dG, label=f"{dF.label}:{dG.label}")


def f_colon_g(dF: Density, dG: Density, grid: int = 1000) -> GridDensity:
    """f:g tabulated on a midpoint grid of (0, 1)."""
    if grid < 128:
        raise ValueError("grid must be at least 128")
    q = f_colon_g_density(dF, dG)
    if q.escaped_mass() > 0:
        raise ValueError(f"{dG.label} vanishes where {dF.label} has mass")
    return q.to_grid(grid)


def f_tilde_density(d: Density) -> QuantileRatio:
    ref = Normal(d.mean, math.sqrt(d.variance))
    return QuantileRatio(d, ref, label=f"tilde[{d.label}]")


def f_tilde(d: Density, grid: int = 1000) -> GridDensity:
    """f:phi with phi the normal of equal mean and variance."""
    if grid < 128:
        raise ValueError("grid must be at least 128")
    return f_tilde_density(d).to_grid(grid)


def kl_divergence(dF: Density, dG: Density, cfg=None) -> float:
    """KL(f || g) computed as minus the entropy of f:g."""
    return -f_colon_g_density(dF, dG).entropy(cfg)


# -- rearrangement and information order ----------------------------------------------


def decreasing_rearrangement(g: GridDensity) -> GridDensity:
    """Grid version of f_down: values sorted into non-increasing order."""
    if g.layout != "cells":
        raise ValueError("rearrangement needs a midpoint (cells) grid")
    return GridDensity(g.lo, g.hi, g.sorted_desc(), layout="cells",
                       label=f"down[{g.label}]", normalize=False)


def simple_function(levels, sets) -> Callable:
    """f(u) = sum_i levels[i] * indicator(u in sets[i]); sets are lists of (lo, hi)."""
    levels = [float(a) for a in levels]

    def f(u):
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        for a, s in zip(levels, sets):
            for lo, hi in s:
                out = np.where((u >= lo) & (u < hi), a, out)
        return out

    return f


def simple_rearrangement(levels, sets):
    """Decreasing rearrangement of a simple function by the level-set formula.

    Levels are ordered from largest to smallest, beta_i is the cumulative
    Lebesgue measure of the first i level sets, and f_down equals level i on
    [beta_{i-1}, beta_i).  Returns (f_down, m, betas) where m(y) is the
    measure of {f > y}.
    """
    order = np.argsort(levels)[::-1]
    alpha = np.array([float(levels[i]) for i in order])
    meas = np.array([sum(hi - lo for lo, hi in sets[i]) for i in order])
    beta = np.concatenate([[0.0], np.cumsum(meas)])

    def f_down(u):
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        for i in range(alpha.size):
            out = np.where((u >= beta[i]) & (u < beta[i + 1]), alpha[i], out)
        return out

    nxt = np.concatenate([alpha[1:], [0.0]])

    def m(y):
        y = np.asarray(y, dtype=float)
        out = np.zeros_like(y)
        for i in range(alpha.size):
            # on [alpha_{i+1}, alpha_i) exactly the first i+1 level sets exceed y
            out = np.where((y >= nxt[i]) & (y < alpha[i]), beta[i + 1], out)
        return out

    return f_down, m, beta


def info_order(g1: GridDensity, g2: GridDensity, slack: float = 1e-9) -> OrderingVerdict:
    """g1 < g2 in information: cumulative integrals of the rearrangements of g1
    stay below those of g2 at every node.  ``holds`` means g2 has more
    information."""
    if g1.values.size != g2.values.size or g1.layout != g2.layout or (g1.lo, g1.hi) != (g2.lo, g2.hi):
        raise ValueError("information order needs densities on the same grid")
    c1 = np.cumsum(g1.sorted_desc() * g1.weights)
    c2 = np.cumsum(g2.sorted_desc() * g2.weights)
    # both totals are 1, so the final node carries no information
    diff = (c2 - c1)[:-1]
    i = int(np.argmin(diff))
    edges = g1.lo + g1.h * np.arange(1, g1.values.size + 1)
    margin = float(diff[i])
    if abs(margin) < slack:
        margin = 0.0 if margin < 0 else margin
    return OrderingVerdict("information", bool(diff[i] >= -slack), float(edges[i]), margin)
