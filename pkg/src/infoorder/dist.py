"""Univariate densities: analytic catalog, affine images, swap transform, grids.

Every density exposes ``pdf``, ``logpdf``, ``score`` (d/dx log f), ``cdf``,
``quantile``, ``mean``, ``variance``, ``support``, ``kinks`` and ``sample``.
All callables are numpy-vectorized.

Distribution specs use the mini-language ``name[:p1,p2,...]`` with names
``norm``, ``laplace``, ``lognorm``, ``unif``, ``gmm`` and ``exp``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import special

from . import kernels
from .quadrature import DEFAULT, QuadratureConfig, integrate, invert_monotone

__all__ = [
    "Density",
    "Normal",
    "Laplace",
    "LogNormal",
    "Uniform",
    "Exponential",
    "Gmm",
    "GmmSpec",
    "Affine",
    "Swapped",
    "GridDensity",
    "SpecError",
    "make_density",
    "parse_spec",
    "parse_spec_list",
    "affine",
    "standardize",
    "swap_transform",
    "convolve",
    "sample",
    "uniform_stream",
]

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_BREAK_U = np.array([1e-9, 1e-6, 1e-4, 1e-2, 0.1, 0.25, 0.5, 0.75, 0.9, 1 - 1e-2, 1 - 1e-4, 1 - 1e-6, 1 - 1e-9])


class SpecError(ValueError):
    """Malformed distribution spec or invalid parameters."""


def uniform_stream(n, seed):
    """n uniforms in the open interval (0, 1) from a PCG64 stream.

    Draws are taken from ``numpy.random.Generator(PCG64(seed))`` and shifted
    by half an ulp so that quantile functions never see 0.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.random(n) + 2.0**-54


class Density:
    """Base class; subclasses fill in the closed forms they have."""

    kinks: tuple = ()
    label: str = "density"

    # -- required by subclasses: pdf, support --------------------------------
    def pdf(self, x):
        raise NotImplementedError

    @property
    def support(self):
        raise NotImplementedError

    # -- generic fallbacks ---------------------------------------------------
    def logpdf(self, x):
        with np.errstate(divide="ignore"):
            return np.log(self.pdf(x))

    def score(self, x):
        h = 1e-6
        x = np.asarray(x, dtype=float)
        return (self.logpdf(x + h) - self.logpdf(x - h)) / (2 * h)

    @property
    def edge_jump(self):
        """True when the density is positive at a finite support endpoint."""
        return False

    def window(self, tail_cut=DEFAULT.tail_cut):
        lo, hi = self.support
        if not math.isfinite(lo):
            lo = float(self.quantile(tail_cut))
        if not math.isfinite(hi):
            hi = float(self.quantile(1.0 - tail_cut))
        return lo, hi

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        lo, _ = self.window()
        out = np.array([integrate(self.pdf, lo, xi, points=self.kinks) if xi > lo else 0.0
                        for xi in np.ravel(x)])
        return np.clip(out.reshape(x.shape), 0.0, 1.0)

    def quantile(self, u):
        lo, hi = self.window()
        return invert_monotone(self.cdf, u, lo, hi)

    @cached_property
    def breakpoints(self):
        """Kinks plus a ladder of quantiles.

        Seeding adaptive quadrature with these keeps a narrow peak inside a
        wide window from slipping between the first set of nodes.
        """
        q = np.asarray(self.quantile(_BREAK_U), dtype=float)
        return tuple(sorted(set(self.kinks) | set(q[np.isfinite(q)].tolist())))

    def expect(self, h, cfg: QuadratureConfig | None = None):
        """E[h(x)] by adaptive quadrature over the tail-cut window."""
        cfg = cfg or DEFAULT
        lo, hi = self.window(cfg.tail_cut)
        return integrate(lambda x: h(x) * self.pdf(x), lo, hi, cfg, points=self.breakpoints)

    def integrate_pdf(self, h, cfg: QuadratureConfig | None = None):
        """Integral of h(f(x)) over the support, e.g. h(t) = t**2 for H*."""
        cfg = cfg or DEFAULT
        lo, hi = self.window(cfg.tail_cut)
        return integrate(lambda x: h(self.pdf(x)), lo, hi, cfg, points=self.breakpoints)

    @cached_property
    def mean(self):
        return self.expect(lambda x: x)

    @cached_property
    def variance(self):
        m = self.mean
        return self.expect(lambda x: (x - m) ** 2)

    @property
    def sd(self):
        return math.sqrt(self.variance)

    def sample(self, n, seed):
        return np.asarray(self.quantile(uniform_stream(n, seed)), dtype=float)

    def __repr__(self):
        return f"<{type(self).__name__} {self.label}>"


# -- analytic catalog ---------------------------------------------------------


class Normal(Density):
    def __init__(self, mu=0.0, sigma=1.0):
        if not sigma > 0:
            raise SpecError(f"normal sigma must be positive, got {sigma}")
        self.mu, self.sigma = float(mu), float(sigma)
        self.label = f"N({self.mu:g},{self.sigma:g})"

    support = (-math.inf, math.inf)

    def logpdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        return -0.5 * z * z - _LOG_SQRT_2PI - math.log(self.sigma)

    def pdf(self, x):
        return np.exp(self.logpdf(x))

    def score(self, x):
        return -(np.asarray(x, dtype=float) - self.mu) / self.sigma**2

    def cdf(self, x):
        return special.ndtr((np.asarray(x, dtype=float) - self.mu) / self.sigma)

    def quantile(self, u):
        return self.mu + self.sigma * special.ndtri(u)

    @property
    def mean(self):
        return self.mu

    @property
    def variance(self):
        return self.sigma**2


class Laplace(Density):
    """Zero-mean Laplace with pdf exp(-|x|/b) / (2b)."""

    kinks = (0.0,)
    support = (-math.inf, math.inf)

    def __init__(self, b=1.0):
        if not b > 0:
            raise SpecError(f"laplace scale must be positive, got {b}")
        self.b = float(b)
        self.label = f"Laplace({self.b:g})"

    def logpdf(self, x):
        return -np.abs(np.asarray(x, dtype=float)) / self.b - math.log(2 * self.b)

    def pdf(self, x):
        return np.exp(self.logpdf(x))

    def score(self, x):
        return -np.sign(np.asarray(x, dtype=float)) / self.b

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        e = 0.5 * np.exp(-np.abs(x) / self.b)
        return np.where(x < 0, e, 1.0 - e)

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(u < 0.5, self.b * np.log(2 * u), -self.b * np.log(2 * (1 - u)))

    mean = 0.0

    @property
    def variance(self):
        return 2 * self.b**2


class LogNormal(Density):
    """exp of N(mu, sigma**2)."""

    support = (0.0, math.inf)

    def __init__(self, mu=0.0, sigma=1.0):
        if not sigma > 0:
            raise SpecError(f"lognormal sigma must be positive, got {sigma}")
        self.mu, self.sigma = float(mu), float(sigma)
        self.label = f"Lognormal({self.mu:g},{self.sigma:g})"

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            lx = np.log(np.where(x > 0, x, 1.0))
            z = (lx - self.mu) / self.sigma
            out = -0.5 * z * z - _LOG_SQRT_2PI - math.log(self.sigma) - lx
        return np.where(x > 0, out, -np.inf)

    def pdf(self, x):
        return np.exp(self.logpdf(x))

    def score(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(x > 0, -(1.0 + (np.log(x) - self.mu) / self.sigma**2) / x, 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(x > 0, special.ndtr((np.log(np.where(x > 0, x, 1)) - self.mu) / self.sigma), 0.0)

    def quantile(self, u):
        return np.exp(self.mu + self.sigma * special.ndtri(u))

    @property
    def mean(self):
        return math.exp(self.mu + self.sigma**2 / 2)

    @property
    def variance(self):
        s2 = self.sigma**2
        return math.expm1(s2) * math.exp(2 * self.mu + s2)


class Uniform(Density):
    def __init__(self, a=0.0, b=1.0):
        if not b > a:
            raise SpecError(f"uniform needs a < b, got ({a}, {b})")
        self.a, self.b = float(a), float(b)
        self.label = f"U({self.a:g},{self.b:g})"

    @property
    def support(self):
        return (self.a, self.b)

    edge_jump = True

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.a) & (x <= self.b), 1.0 / (self.b - self.a), 0.0)

    def score(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def cdf(self, x):
        return np.clip((np.asarray(x, dtype=float) - self.a) / (self.b - self.a), 0.0, 1.0)

    def quantile(self, u):
        return self.a + (self.b - self.a) * np.asarray(u, dtype=float)

    @property
    def mean(self):
        return 0.5 * (self.a + self.b)

    @property
    def variance(self):
        return (self.b - self.a) ** 2 / 12.0


class Exponential(Density):
    support = (0.0, math.inf)
    edge_jump = True

    def __init__(self, rate=1.0):
        if not rate > 0:
            raise SpecError(f"exponential rate must be positive, got {rate}")
        self.rate = float(rate)
        self.label = f"Exp({self.rate:g})"

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0, math.log(self.rate) - self.rate * x, -np.inf)

    def pdf(self, x):
        return np.exp(self.logpdf(x))

    def score(self, x):
        return np.full_like(np.asarray(x, dtype=float), -self.rate)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x > 0, -np.expm1(-self.rate * np.maximum(x, 0)), 0.0)

    def quantile(self, u):
        return -np.log1p(-np.asarray(u, dtype=float)) / self.rate

    @property
    def mean(self):
        return 1.0 / self.rate

    @property
    def variance(self):
        return 1.0 / self.rate**2


@dataclass(frozen=True)
class GmmSpec:
    """Two-component Gaussian mixture, weight ``w`` on the first component."""

    mu1: float
    mu2: float
    sigma1: float
    sigma2: float
    w: float

    def __post_init__(self):
        if not (self.sigma1 > 0 and self.sigma2 > 0):
            raise SpecError("gmm sigmas must be positive")
        if not 0.0 <= self.w <= 1.0:
            raise SpecError(f"gmm weight must lie in [0, 1], got {self.w}")


class Gmm(Density):
    support = (-math.inf, math.inf)

    def __init__(self, spec: GmmSpec):
        self.spec = spec
        s = spec
        self.label = f"GMM({s.mu1:g},{s.mu2:g},{s.sigma1:g},{s.sigma2:g},{s.w:g})"
        self._mu = np.array([s.mu1, s.mu2])
        self._sig = np.array([s.sigma1, s.sigma2])
        with np.errstate(divide="ignore"):
            self._logw = np.log(np.array([s.w, 1.0 - s.w]))

    def _comp_log(self, x):
        x = np.asarray(x, dtype=float)[..., None]
        z = (x - self._mu) / self._sig
        return self._logw - 0.5 * z * z - _LOG_SQRT_2PI - np.log(self._sig)

    def logpdf(self, x):
        return special.logsumexp(self._comp_log(x), axis=-1)

    def pdf(self, x):
        return np.exp(self.logpdf(x))

    def score(self, x):
        lc = self._comp_log(x)
        r = np.exp(lc - special.logsumexp(lc, axis=-1, keepdims=True))
        xx = np.asarray(x, dtype=float)[..., None]
        return np.sum(r * (-(xx - self._mu) / self._sig**2), axis=-1)

    def cdf(self, x):
        s = self.spec
        x = np.asarray(x, dtype=float)
        return s.w * special.ndtr((x - s.mu1) / s.sigma1) + (1 - s.w) * special.ndtr((x - s.mu2) / s.sigma2)

    def quantile(self, u):
        s = self.spec
        z = float(special.ndtri(1e-300)) - 1.0  # about -38
        lo = min(s.mu1 + z * s.sigma1, s.mu2 + z * s.sigma2)
        hi = max(s.mu1 - z * s.sigma1, s.mu2 - z * s.sigma2)
        return invert_monotone(self.cdf, u, lo, hi, tol=1e-15)

    def window(self, tail_cut=DEFAULT.tail_cut):
        return float(self.quantile(tail_cut)), float(self.quantile(1.0 - tail_cut))

    @property
    def mean(self):
        s = self.spec
        return s.w * s.mu1 + (1 - s.w) * s.mu2

    @property
    def variance(self):
        s = self.spec
        m2 = s.w * (s.sigma1**2 + s.mu1**2) + (1 - s.w) * (s.sigma2**2 + s.mu2**2)
        return m2 - self.mean**2


# -- derived densities ----------------------------------------------------------


class Affine(Density):
    """Density of scale * x + shift for x ~ base (scale != 0)."""

    def __init__(self, base: Density, scale: float, shift: float):
        if scale == 0 or not math.isfinite(scale):
            raise ValueError("affine scale must be finite and non-zero")
        self.base, self.s, self.c = base, float(scale), float(shift)
        self.label = f"{self.s:g}*{base.label}{self.c:+g}"
        self.kinks = tuple(sorted(self.s * k + self.c for k in base.kinks))

    def _back(self, y):
        return (np.asarray(y, dtype=float) - self.c) / self.s

    @property
    def support(self):
        lo, hi = (self.s * v + self.c for v in self.base.support)
        return (min(lo, hi), max(lo, hi))

    @property
    def edge_jump(self):
        return self.base.edge_jump

    def pdf(self, y):
        return self.base.pdf(self._back(y)) / abs(self.s)

    def logpdf(self, y):
        return self.base.logpdf(self._back(y)) - math.log(abs(self.s))

    def score(self, y):
        return self.base.score(self._back(y)) / self.s

    def cdf(self, y):
        F = self.base.cdf(self._back(y))
        return F if self.s > 0 else 1.0 - F

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        q = self.base.quantile(u if self.s > 0 else 1.0 - u)
        return self.s * q + self.c

    def window(self, tail_cut=DEFAULT.tail_cut):
        lo, hi = (self.s * v + self.c for v in self.base.window(tail_cut))
        return (min(lo, hi), max(lo, hi))

    @property
    def mean(self):
        return self.s * self.base.mean + self.c

    @property
    def variance(self):
        return self.s**2 * self.base.variance


def affine(d: Density, scale: float, shift: float = 0.0) -> Density:
    """Density of ``scale * x + shift``; closed-form families stay closed-form."""
    if isinstance(d, Normal):
        return Normal(scale * d.mu + shift, abs(scale) * d.sigma)
    if isinstance(d, Uniform) and scale > 0:
        return Uniform(scale * d.a + shift, scale * d.b + shift)
    if isinstance(d, Laplace) and shift == 0:
        return Laplace(abs(scale) * d.b)
    if isinstance(d, Affine):
        return affine(d.base, scale * d.s, scale * d.c + shift)
    if scale == 1 and shift == 0:
        return d
    return Affine(d, scale, shift)


def standardize(d: Density) -> Density:
    """Affine image with mean 0 and variance 1."""
    sd = math.sqrt(d.variance)
    if not sd > 0:
        raise ValueError("variance must be positive")
    return affine(d, 1.0 / sd, -d.mean / sd)


class Swapped(Density):
    """f with its values on [a, a+delta) and [b, b+delta) exchanged."""

    def __init__(self, base: Density, a: float, b: float, delta: float):
        if delta < 0:
            raise ValueError("delta must be non-negative")
        if a + delta > b:
            raise ValueError(f"swap intervals overlap: [{a}, {a + delta}] and [{b}, {b + delta}]")
        lo, hi = base.support
        if delta > 0 and (a < lo or b + delta > hi):
            raise ValueError("swap intervals must lie inside the support")
        self.base, self.a, self.b, self.delta = base, float(a), float(b), float(delta)
        self.label = f"swap({base.label};{a:g},{b:g},{delta:g})"
        cuts = (a, a + delta, b, b + delta) if delta > 0 else ()
        self.kinks = tuple(sorted(set(base.kinks) | set(cuts)))

    @property
    def support(self):
        return self.base.support

    @property
    def edge_jump(self):
        return self.base.edge_jump

    def window(self, tail_cut=DEFAULT.tail_cut):
        lo, hi = self.base.window(tail_cut)
        if self.delta > 0:
            lo, hi = min(lo, self.a), max(hi, self.b + self.delta)
        return lo, hi

    def source(self, x):
        """Point of the base density whose value appears at x."""
        x = np.asarray(x, dtype=float)
        a, b, d = self.a, self.b, self.delta
        in_a = (x >= a) & (x < a + d)
        in_b = (x >= b) & (x < b + d)
        return np.where(in_a, b + (x - a), np.where(in_b, a + (x - b), x))

    def pdf(self, x):
        return self.base.pdf(self.source(x))

    def logpdf(self, x):
        return self.base.logpdf(self.source(x))

    def score(self, x):
        return self.base.score(self.source(x))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        F = self.base.cdf
        a, b, d = self.a, self.b, self.delta
        Fa, Fad, Fb, Fbd = (float(F(v)) for v in (a, a + d, b, b + d))
        mass_a, mass_b = Fad - Fa, Fbd - Fb
        out = F(x)
        out = np.where((x >= a) & (x < a + d), Fa + F(b + (x - a)) - Fb, out)
        out = np.where((x >= a + d) & (x < b), F(x) + mass_b - mass_a, out)
        out = np.where((x >= b) & (x < b + d), Fb + mass_b - Fad + F(a + (x - b)), out)
        return np.clip(out, 0.0, 1.0)

    def quantile(self, u):
        lo, hi = self.window(1e-15)
        return invert_monotone(self.cdf, u, lo, hi, tol=1e-15)


def swap_transform(d: Density, a: float, b: float, delta: float) -> Density:
    return Swapped(d, a, b, delta)


class GridDensity(Density):
    """Tabulated density on [lo, hi] with linear interpolation.

    ``layout="nodes"``: values at ``linspace(lo, hi, n)``, trapezoid weights.
    ``layout="cells"``: values at cell midpoints ``lo + (i + 1/2) h``,
    midpoint weights (used on (0, 1) so quantile maps are never evaluated at
    the endpoints).
    """

    def __init__(self, lo, hi, values, layout="nodes", label="grid", normalize=True, meta=None):
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or values.size < 128:
            raise ValueError("grid densities need at least 128 values")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValueError("grid values must be finite and non-negative")
        if layout not in ("nodes", "cells"):
            raise ValueError(f"unknown layout {layout!r}")
        self.lo, self.hi, self.layout = float(lo), float(hi), layout
        n = values.size
        if layout == "nodes":
            self.x = np.linspace(self.lo, self.hi, n)
            h = (self.hi - self.lo) / (n - 1)
            w = np.full(n, h)
            w[0] = w[-1] = h / 2
        else:
            h = (self.hi - self.lo) / n
            self.x = self.lo + (np.arange(n) + 0.5) * h
            w = np.full(n, h)
        self.h, self.weights = h, w
        self.mass = float(w @ values)
        if normalize:
            values = values / self.mass
        self.values = values
        self.label = label
        self.meta = dict(meta or {})

    @property
    def support(self):
        return (self.lo, self.hi)

    def window(self, tail_cut=DEFAULT.tail_cut):
        return self.support

    @property
    def edge_jump(self):
        v = self.values
        return bool(max(v[0], v[-1]) > 1e-3 * v.max())

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.interp(x, self.x, self.values)
        return np.where((x >= self.lo) & (x <= self.hi), out, 0.0)

    def score(self, x):
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.gradient(self.values, self.x) / self.values
        return np.interp(np.asarray(x, dtype=float), self.x, np.where(np.isfinite(s), s, 0.0))

    def _cdf_nodes(self):
        if self.layout == "nodes":
            inc = 0.5 * (self.values[1:] + self.values[:-1]) * self.h
            return self.x, np.concatenate([[0.0], np.cumsum(inc)])
        edges = self.lo + np.arange(self.values.size + 1) * self.h
        return edges, np.concatenate([[0.0], np.cumsum(self.values * self.h)])

    def cdf(self, x):
        xs, cs = self._cdf_nodes()
        return np.clip(np.interp(np.asarray(x, dtype=float), xs, cs / cs[-1]), 0.0, 1.0)

    def quantile(self, u):
        xs, cs = self._cdf_nodes()
        cs = cs / cs[-1]
        keep = np.concatenate([[True], np.diff(cs) > 0])
        return np.interp(np.asarray(u, dtype=float), cs[keep], xs[keep])

    def expect(self, h, cfg=None):
        return float(self.weights @ (np.asarray(h(self.x), dtype=float) * self.values))

    def integrate_pdf(self, h, cfg=None):
        return float(self.weights @ np.asarray(h(self.values), dtype=float))

    @cached_property
    def mean(self):
        return self.expect(lambda x: x)

    @cached_property
    def variance(self):
        m = self.mean
        return self.expect(lambda x: (x - m) ** 2)

    def sorted_desc(self):
        return np.sort(self.values)[::-1]

    def to_csv(self, fh, header=("u", "value")):
        fh.write(",".join(header) + "\n")
        for x, v in zip(self.x, self.values):
            fh.write(f"{x:.12g},{v:.12g}\n")


# -- spec mini-language ------------------------------------------------------------

_DEFAULTS = {
    "norm": (0.0, 1.0),
    "laplace": (1.0,),
    "lognorm": (0.0, 1.0),
    "unif": (0.0, 1.0),
    "gmm": (0.0, 4.0, 1.0, 2.0, 0.4),
    "exp": (1.0,),
}
_ALIASES = {"normal": "norm", "lognormal": "lognorm", "uniform": "unif", "exponential": "exp"}
_NUM = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def make_density(name: str, params=None) -> Density:
    name = _ALIASES.get(name, name)
    if name not in _DEFAULTS:
        raise SpecError(f"unknown distribution {name!r}")
    params = tuple(float(p) for p in (params if params else _DEFAULTS[name]))
    if len(params) != len(_DEFAULTS[name]):
        raise SpecError(f"{name} takes {len(_DEFAULTS[name])} parameters, got {len(params)}")
    if name == "norm":
        return Normal(*params)
    if name == "laplace":
        return Laplace(*params)
    if name == "lognorm":
        return LogNormal(*params)
    if name == "unif":
        return Uniform(*params)
    if name == "exp":
        return Exponential(*params)
    return Gmm(GmmSpec(*params))


def parse_spec(text: str) -> Density:
    """Parse ``name[:p1,p2,...]``, e.g. ``"gmm:0,4,1,2,0.4"``."""
    text = text.strip()
    name, _, rest = text.partition(":")
    params = []
    if rest.strip():
        for tok in rest.split(","):
            tok = tok.strip()
            if not _NUM.match(tok):
                raise SpecError(f"bad parameter {tok!r} in spec {text!r}")
            params.append(float(tok))
    d = make_density(name.strip().lower(), params)
    d.spec_text = text
    return d


def parse_spec_list(text: str) -> list[Density]:
    """Split ``"unif:0,1,laplace:1"`` into specs; numbers attach to the previous name."""
    groups: list[list[str]] = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            raise SpecError(f"empty token in {text!r}")
        if _NUM.match(tok):
            if not groups:
                raise SpecError(f"spec list {text!r} starts with a number")
            groups[-1].append(tok)
        else:
            groups.append([tok])
    out = []
    for g in groups:
        head = g[0]
        if ":" in head:
            out.append(parse_spec(",".join(g)))
        elif len(g) > 1:
            raise SpecError(f"parameters without ':' after {head!r}")
        else:
            out.append(parse_spec(head))
    return out


# -- sums and samples ---------------------------------------------------------------


def convolve(d1: Density, d2: Density, grid: int = 2048, tail_cut: float = DEFAULT.tail_cut) -> GridDensity:
    """Density of x + y for independent x ~ d1, y ~ d2 on a uniform grid."""
    if grid < 512:
        raise ValueError("grid must be at least 512")
    lo1, hi1 = d1.window(tail_cut)
    lo2, hi2 = d2.window(tail_cut)
    w1, w2 = hi1 - lo1, hi2 - lo2
    h = max(w1, w2) / (grid - 1)
    # align the step with a finite-support window so its edges are nodes
    for d, w in ((d1, w1), (d2, w2)):
        lo, hi = d.support
        if math.isfinite(lo) and math.isfinite(hi):
            h = w / math.ceil(w / h - 1e-9)
            break
    n1 = int(math.floor(w1 / h + 1e-9)) + 1
    n2 = int(math.floor(w2 / h + 1e-9)) + 1
    t1 = lo1 + h * np.arange(n1)
    t2 = lo2 + h * np.arange(n2)
    f1 = d1.pdf(t1)
    f2 = d2.pdf(t2)
    f1[0] *= 0.5
    f1[-1] *= 0.5
    vals = kernels.convolve(f1, f2) * h
    lo = lo1 + lo2
    hi = lo + h * (vals.size - 1)
    return GridDensity(lo, hi, np.maximum(vals, 0.0), layout="nodes",
                       label=f"{d1.label}*{d2.label}")


def sample(d: Density, n: int, seed: int) -> np.ndarray:
    """n i.i.d. draws by inverse cdf of a seeded PCG64 uniform stream."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return d.sample(n, seed)
