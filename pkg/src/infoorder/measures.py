"""Scalar information, dispersion and shape measures of univariate densities.

Natural logarithms throughout.  The densities come from :mod:`infoorder.dist`;
grid densities are handled by their own quadrature weights.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

import numpy as np
from scipy import special

from . import kernels
from .dist import Density, GridDensity
from .quadrature import DEFAULT, QuadratureConfig, QuadratureError, integrate, maximize

__all__ = [
    "MeasureReport",
    "DivergenceError",
    "entropy",
    "entropy_power",
    "h_star",
    "h_mode",
    "fisher_info",
    "central_moments",
    "cumulants",
    "raw_cumulants",
    "sample_cumulants",
    "cumulants_from_moments",
    "sibson_negentropy",
    "quantile_measures",
    "vdw_q",
    "report",
]

TWO_PI_E = 2.0 * math.pi * math.e


class DivergenceError(ArithmeticError):
    """An integral that defines a measure does not converge."""


def _xlogx(t):
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(t > 0, t * np.log(np.where(t > 0, t, 1.0)), 0.0)


def entropy(d: Density, cfg: QuadratureConfig | None = None) -> float:
    """Differential entropy -E[log f(x)] in nats."""
    if isinstance(d, GridDensity):
        return -d.integrate_pdf(_xlogx, cfg)
    if hasattr(d, "entropy"):
        return d.entropy(cfg)
    cfg = cfg or DEFAULT
    lo, hi = d.window(cfg.tail_cut)

    def g(x):
        lf = d.logpdf(x)
        with np.errstate(invalid="ignore"):
            return np.where(np.isfinite(lf), -np.exp(lf) * lf, 0.0)

    return integrate(g, lo, hi, cfg, points=d.breakpoints)


def entropy_power(d: Density, cfg=None) -> float:
    return math.exp(2.0 * entropy(d, cfg))


def h_star(d: Density, cfg=None) -> float:
    """H* = E[f(x)] = integral of f squared."""
    return d.integrate_pdf(np.square, cfg)


def h_mode(d: Density, cfg: QuadratureConfig | None = None) -> float:
    """H** = sup f, located by a quantile-grid scan and golden refinement."""
    if isinstance(d, GridDensity):
        return float(d.values.max())
    if hasattr(d, "sup_pdf"):
        return d.sup_pdf(cfg)
    cfg = cfg or DEFAULT
    lo, hi = d.window(cfg.tail_cut)
    u = np.linspace(1e-6, 1 - 1e-6, 1025)
    nodes = np.concatenate([np.asarray(d.quantile(u), dtype=float), [lo, hi],
                            [k for k in d.kinks if lo < k < hi]])
    nodes = np.unique(nodes[np.isfinite(nodes)])
    vals = d.pdf(nodes)
    i = int(np.argmax(vals))
    a, b = nodes[max(i - 1, 0)], nodes[min(i + 1, nodes.size - 1)]
    _, best = maximize(d.pdf, a, b, grid=64, points=[k for k in d.kinks if a < k < b])
    return max(float(best), float(vals[i]))


def fisher_info(d: Density, cfg: QuadratureConfig | None = None) -> float:
    """Location Fisher information; +inf when f jumps at a support edge."""
    if d.edge_jump:
        return math.inf
    if isinstance(d, GridDensity):
        with np.errstate(divide="ignore", invalid="ignore"):
            fp = np.gradient(d.values, d.x)
            terms = np.where(d.values > 0, fp * fp / d.values, 0.0)
        return float(d.weights @ terms)
    cfg = cfg or DEFAULT
    lo, hi = d.window(cfg.tail_cut)

    def g(x):
        s = d.score(x)
        return s * s * d.pdf(x)

    return integrate(g, lo, hi, cfg, points=d.breakpoints)


def central_moments(d: Density, kmax=4, cfg=None):
    """Central moments mu_0..mu_kmax.

    Higher moments weight the far tails, so these integrals run over the
    full support (infinite ends mapped by substitution) rather than the
    tail-cut window.
    """
    if isinstance(d, GridDensity):
        m = d.mean
        return [1.0, 0.0] + [d.expect(lambda x, k=k: (x - m) ** k) for k in range(2, kmax + 1)]
    cfg = cfg or DEFAULT
    lo, hi = d.support
    m = d.mean
    return [1.0, 0.0] + [
        integrate(lambda x, k=k: (x - m) ** k * d.pdf(x), lo, hi, cfg, points=d.breakpoints)
        for k in range(2, kmax + 1)
    ]


def cumulants(d: Density, cfg=None):
    """Standardized (kappa3, kappa4) of (x - E x) / sd."""
    mu = central_moments(d, 4, cfg)
    return mu[3] / mu[2] ** 1.5, mu[4] / mu[2] ** 2 - 3.0


def raw_cumulants(d: Density, cfg=None):
    """Unstandardized (kappa3, kappa4); these add under independent sums."""
    mu = central_moments(d, 4, cfg)
    return mu[3], mu[4] - 3.0 * mu[2] ** 2


def cumulants_from_moments(m):
    """Cumulants kappa_0..kappa_K from raw moments m_0..m_K (m_0 = 1)."""
    K = len(m) - 1
    kappa = np.zeros(K + 1)
    for n in range(1, K + 1):
        kappa[n] = m[n] - sum(math.comb(n - 1, j - 1) * kappa[j] * m[n - j] for j in range(1, n))
    return kappa


def sample_cumulants(xs, kmax=4):
    """Standardized sample cumulants (kappa3, ..., kappa_kmax).

    Central moments divide by n; standardization uses the same (biased)
    sample standard deviation.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.size < 8:
        raise ValueError("need at least 8 observations")
    mu = kernels.central_moments(xs, kmax)
    scale = max(np.abs(xs).max(), 1.0)
    if not mu[2] > 1e-24 * scale * scale:
        raise ValueError("sample variance is zero")
    sd = math.sqrt(mu[2])
    std = mu / sd ** np.arange(kmax + 1)
    kappa = cumulants_from_moments(std)
    return tuple(float(k) for k in kappa[3:])


def sibson_negentropy(k3: float, k4: float) -> float:
    return (k3 * k3 + 0.25 * k4 * k4) / 12.0


def quantile_measures(d: Density, u: float, v: float):
    """(median, spread, quantile skewness, quantile kurtosis ratio)."""
    if not 0 < u < v < 0.5:
        raise ValueError("need 0 < u < v < 1/2")
    q = lambda p: float(d.quantile(p))  # noqa: E731
    med = q(0.5)
    qu, q1u, qv, q1v = q(u), q(1 - u), q(v), q(1 - v)
    spread = q1u - qu
    return med, spread, (qu + q1u - 2 * med) / spread, spread / (q1v - qv)


def vdw_q(d: Density, cfg: QuadratureConfig | None = None) -> float:
    """Q = E[f(F^-1(u)) / phi(Phi^-1(u))], u ~ U(0, 1).

    Computed after the substitution u = Phi(z), which turns the integrand into
    the bounded f(F^-1(Phi(z))) on |z| <= -Phi^-1(tail_cut).
    """
    cfg = cfg or DEFAULT
    zmax = -float(special.ndtri(cfg.tail_cut))

    def g(z):
        return d.pdf(d.quantile(special.ndtr(z)))

    kinks = []
    for k in d.kinks:
        zk = float(special.ndtri(d.cdf(k)))
        if -zmax < zk < zmax:
            kinks.append(zk)
    zt = -float(special.ndtri(1e-4))
    core = integrate(g, -zt, zt, cfg, points=[k for k in kinks if abs(k) < zt])
    tails = integrate(g, -zmax, -zt, cfg, points=[k for k in kinks if k < -zt]) + integrate(
        g, zt, zmax, cfg, points=[k for k in kinks if k > zt]
    )
    if tails > 0.01 * (core + tails):
        raise DivergenceError(
            f"Q integral diverges at the endpoints for {d.label}: "
            f"{tails:.3g} of the mass sits in u < 1e-4 or u > 1 - 1e-4"
        )
    return core + tails


@dataclass(frozen=True)
class MeasureReport:
    label: str
    entropy: float
    entropy_power: float
    h_star: float
    h_star_inv_sq: float
    h_mode: float
    fisher: float
    variance: float
    skew: float
    kurt: float
    var_epow: float
    wilcoxon_eff: float
    sign_eff: float
    vdw_eff: float
    var_fisher: float
    sibson_negentropy: float

    def to_dict(self):
        return asdict(self)

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]


def report(d: Density, cfg=None) -> MeasureReport:
    H = entropy(d, cfg)
    hs = h_star(d, cfg)
    hm = h_mode(d, cfg)
    J = fisher_info(d, cfg)
    var = d.variance
    k3, k4 = cumulants(d, cfg)
    try:
        q = vdw_q(d, cfg)
        vdw = q * q * var
    except (DivergenceError, QuadratureError):
        vdw = math.inf
    return MeasureReport(
        label=d.label,
        entropy=H,
        entropy_power=math.exp(2 * H),
        h_star=hs,
        h_star_inv_sq=hs**-2,
        h_mode=hm,
        fisher=J,
        variance=var,
        skew=k3,
        kurt=k4,
        var_epow=var * math.exp(-2 * H) * TWO_PI_E,
        wilcoxon_eff=12 * hs * hs * var,
        sign_eff=4 * hm * hm * var,
        vdw_eff=vdw,
        var_fisher=var * J,
        sibson_negentropy=sibson_negentropy(k3, k4),
    )
