"""Whitening, projection indices and deflationary projection pursuit.

Data matrices are n x p with one observation per row.  The pipeline is

    X --whiten--> Z --fixed_point_pursuit--> V1,   unmixing = V1' W

and recovered sources are ``(X - mean) @ unmixing.T``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .dist import Density, convolve, standardize
from .dist import affine as affine_density
from .measures import cumulants_from_moments, entropy_power, sample_cumulants

__all__ = [
    "ProjectionIndex",
    "WhiteningResult",
    "IcaResult",
    "ProjectionBoundReport",
    "sym_eig",
    "whiten",
    "index_value",
    "objective",
    "gradient_T",
    "fixed_point_pursuit",
    "projection_bound_check",
    "superadditive_check",
    "amari_index",
    "simulate_mixture",
    "run_pipeline",
    "read_matrix",
    "write_matrix",
]


# -- projection indices ----------------------------------------------------------------

_KINDS = ("kappa3_sq", "kappa4_sq", "kappa_k", "sibson", "cube", "quart")


@dataclass(frozen=True)
class ProjectionIndex:
    kind: str
    k: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown projection index {self.kind!r}")
        if self.kind == "kappa_k" and (self.k is None or self.k < 3):
            raise ValueError("kappa_k needs an order k >= 3")

    @classmethod
    def parse(cls, text: str) -> "ProjectionIndex":
        """Accepts kappa3, kappa4, kappaK (K >= 5), sibson, cube, quart and
        the long forms kappa3_sq, kappa4_sq, contrast_cube, contrast_quart."""
        t = text.strip().lower()
        t = t.removeprefix("contrast_").removesuffix("_sq")
        if t in ("cube", "quart", "sibson"):
            return cls(t)
        if t.startswith("kappa") and t[5:].isdigit():
            k = int(t[5:])
            if k == 3:
                return cls("kappa3_sq")
            if k == 4:
                return cls("kappa4_sq")
            return cls("kappa_k", k)
        raise ValueError(f"unknown projection index {text!r}")

    @property
    def name(self):
        return f"kappa{self.k}" if self.kind == "kappa_k" else self.kind

    @property
    def order(self):
        return {"kappa3_sq": 3, "cube": 3, "kappa4_sq": 4, "quart": 4, "sibson": 4}.get(self.kind, self.k)

    def threshold(self, n: int) -> float:
        """Twice the 95% point of the index on n Gaussian observations."""
        chi = 3.841458820694124  # chi-square(1) 95% point
        z = 1.959963984540054
        if self.kind == "kappa3_sq":
            t = chi * 6 / n
        elif self.kind == "kappa4_sq":
            t = chi * 24 / n
        elif self.kind == "sibson":
            t = chi * 2 / (4 * n)
        elif self.kind == "cube":
            t = z * math.sqrt(15 / n)
        elif self.kind == "quart":
            t = z * math.sqrt(96 / n)
        else:
            # |kappa_k|^(2/k) with var(kappa_k) ~ k!/n
            t = (z * math.sqrt(math.factorial(self.k) / n)) ** (2 / self.k)
        return 2 * t


def index_value(idx: ProjectionIndex, xs) -> float:
    """Index of a projected sample; cumulants are standardized sample cumulants."""
    xs = np.asarray(xs, dtype=float)
    if idx.kind == "cube":
        return abs(float(np.mean(xs**3)))
    if idx.kind == "quart":
        return abs(float(np.mean(xs**4)) - 3.0)
    kap = sample_cumulants(xs, max(idx.order, 4))
    k3, k4 = kap[0], kap[1]
    if idx.kind == "kappa3_sq":
        return k3 * k3
    if idx.kind == "kappa4_sq":
        return k4 * k4
    if idx.kind == "sibson":
        return (k3 * k3 + 0.25 * k4 * k4) / 12.0
    return abs(kap[idx.k - 3]) ** (2.0 / idx.k)


def _cumulants_with_grad(m, dm):
    """Cumulants from raw moments and their gradients (rows of dm)."""
    K = len(m) - 1
    kap = np.zeros(K + 1)
    dk = np.zeros_like(dm)
    for n in range(1, K + 1):
        kap[n] = m[n]
        dk[n] = dm[n]
        for j in range(1, n):
            c = math.comb(n - 1, j - 1)
            kap[n] -= c * kap[j] * m[n - j]
            dk[n] -= c * (dk[j] * m[n - j] + kap[j] * dm[n - j])
    return kap, dk


def _objective_and_grad(idx: ProjectionIndex, Z, v):
    K = idx.order
    m, g = kernels.projection_moments(Z, np.ascontiguousarray(v, dtype=float), K)
    dm = np.zeros((K + 1, Z.shape[1]))
    for j in range(1, K + 1):
        dm[j] = j * g[j - 1]
    if idx.kind == "cube":
        s = math.copysign(1.0, m[3])
        return abs(m[3]), s * dm[3]
    if idx.kind == "quart":
        s = math.copysign(1.0, m[4] - 3.0)
        return abs(m[4] - 3.0), s * dm[4]
    kap, dk = _cumulants_with_grad(m, dm)
    if idx.kind == "kappa3_sq":
        return kap[3] ** 2, 2 * kap[3] * dk[3]
    if idx.kind == "kappa4_sq":
        return kap[4] ** 2, 2 * kap[4] * dk[4]
    if idx.kind == "sibson":
        val = (kap[3] ** 2 + 0.25 * kap[4] ** 2) / 12.0
        return val, (2 * kap[3] * dk[3] + 0.5 * kap[4] * dk[4]) / 12.0
    k = idx.k
    a = abs(kap[k])
    if a == 0:
        return 0.0, np.zeros(Z.shape[1])
    return a ** (2 / k), (2 / k) * a ** (2 / k - 1) * math.copysign(1.0, kap[k]) * dk[k]


def objective(idx: ProjectionIndex, Z, v) -> float:
    """Index of v'z from raw (uncentred, unstandardized) moments of v'z.

    This is the function :func:`gradient_T` differentiates; on whitened data
    and unit v it agrees with :func:`index_value` up to O(1/n).
    """
    return _objective_and_grad(idx, np.asarray(Z, dtype=float), v)[0]


def gradient_T(idx: ProjectionIndex, Z, v) -> np.ndarray:
    """Sample gradient dD(v'z)/dv in closed form.

    On whitened data, kappa4_sq gives 8 k4 (mean(z y^3) - 3 m2 mean(z y)),
    i.e. 8 k4 (mean(z y^3) - 3 v) at population level.
    """
    return _objective_and_grad(idx, np.asarray(Z, dtype=float), v)[1]


def _fixed_point_direction(idx: ProjectionIndex, Z, v):
    T = gradient_T(idx, Z, v)
    if idx.kind == "quart":
        # E[z y^3] alone is a power iteration; subtracting 3v makes the map a
        # contraction while leaving the estimating equation unchanged
        m4 = float(np.mean((Z @ v) ** 4))
        T = T - math.copysign(12.0, m4 - 3.0) * v
    return T


# -- whitening --------------------------------------------------------------------------


def sym_eig(S, tol: float = 1e-12, max_sweeps: int = 100):
    """Cyclic Jacobi eigendecomposition of a symmetric positive-definite matrix.

    Returns (U, D) with eigenvalues descending and U orthonormal.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError("matrix must be square")
    p = S.shape[0]
    if p > 50:
        raise ValueError("sym_eig supports p <= 50")
    scale = max(1.0, float(np.max(np.abs(S))))
    if np.max(np.abs(S - S.T)) > 1e-10 * scale:
        raise ValueError("matrix is not symmetric")
    S = 0.5 * (S + S.T)
    D, U, _ = kernels.jacobi_eigh(S, tol * scale, max_sweeps)
    order = np.argsort(-D, kind="stable")
    D, U = D[order], U[:, order]
    if not D[-1] > 1e-12 * max(D[0], 1e-300):
        raise np.linalg.LinAlgError(f"covariance not full rank (smallest eigenvalue {D[-1]:.3g})")
    return U, D


@dataclass(frozen=True)
class WhiteningResult:
    mean: np.ndarray
    W: np.ndarray
    eigvals: np.ndarray
    Z: np.ndarray


def _check_data(X):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("data matrix must be 2-d")
    n, p = X.shape
    if p < 2 or n <= p:
        raise ValueError(f"need n > p >= 2, got n={n}, p={p}")
    if not np.all(np.isfinite(X)):
        raise ValueError("data matrix has non-finite entries")
    return X


def whiten(X) -> WhiteningResult:
    """Z = (X - mean) W' with W = U D^-1/2 U' from the sample covariance."""
    X = _check_data(X)
    mean = X.mean(axis=0)
    Xc = X - mean
    S = Xc.T @ Xc / (X.shape[0] - 1)
    U, D = sym_eig(S)
    W = (U / np.sqrt(D)) @ U.T
    W = 0.5 * (W + W.T)
    return WhiteningResult(mean, W, D, Xc @ W.T)


# -- projection pursuit ----------------------------------------------------------------


@dataclass
class IcaResult:
    index: str
    mean: np.ndarray
    W: np.ndarray
    V1: np.ndarray
    unmixing: np.ndarray
    component_index_values: list
    iterations: list
    converged: list
    gaussian_like: list = field(default_factory=list)
    amari: float | None = None

    def sources(self, X):
        return (np.asarray(X, dtype=float) - self.mean) @ self.unmixing.T

    def to_dict(self):
        out = {
            "index": self.index,
            "mean": self.mean.tolist(),
            "W": self.W.tolist(),
            "V1": self.V1.tolist(),
            "unmixing": self.unmixing.tolist(),
            "component_index_values": [float(v) for v in self.component_index_values],
            "iterations": [int(i) for i in self.iterations],
            "converged": [bool(c) for c in self.converged],
            "gaussian_like": [bool(g) for g in self.gaussian_like],
        }
        if self.amari is not None:
            out["amari"] = float(self.amari)
        return out

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)


def _unit(rng, p):
    v = rng.standard_normal(p)
    return v / np.linalg.norm(v)


def fixed_point_pursuit(Z, idx: ProjectionIndex, q: int, seed: int = 0, max_iter: int = 500,
                        tol: float = 1e-6, max_restarts: int = 10):
    """Deflationary fixed-point search for q directions maximizing the index.

    Returns (V1, index values, iteration counts, converged flags).
    """
    Z = np.ascontiguousarray(Z, dtype=float)
    p = Z.shape[1]
    if not 1 <= q <= p:
        raise ValueError("need 1 <= q <= p")
    if not tol > 0:
        raise ValueError("tol must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    V = np.zeros((p, q))
    values, iters, conv = [], [], []
    for j in range(q):
        prev = V[:, :j]

        def deflate(w):
            w = w - prev @ (prev.T @ w)
            return w - prev @ (prev.T @ w)  # second pass for orthogonality

        restarts = 0
        v = deflate(_unit(rng, p))
        v /= np.linalg.norm(v)
        done, it = False, 0
        while it < max_iter:
            it += 1
            w = deflate(_fixed_point_direction(idx, Z, v))
            nw = np.linalg.norm(w)
            if not nw > 1e-12:
                restarts += 1
                if restarts > max_restarts:
                    raise ArithmeticError(f"zero gradient for component {j + 1} after {max_restarts} restarts")
                v = deflate(_unit(rng, p))
                v /= np.linalg.norm(v)
                continue
            w /= nw
            if abs(float(w @ v)) > 1.0 - tol:
                v, done = w, True
                break
            v = w
        # pin the sign so results do not flip between runs
        if v[np.argmax(np.abs(v))] < 0:
            v = -v
        V[:, j] = v
        values.append(index_value(idx, Z @ v))
        iters.append(it)
        conv.append(done)
    return V, values, iters, conv


# -- projection bound check -------------------------------------------------------


@dataclass(frozen=True)
class ProjectionBoundReport:
    index: str
    n: int
    trials: int
    max_projection: float
    component_values: list
    axis_values: list
    slack: float
    passed: bool

    def to_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def _random_rotation(rng, p):
    Q, R = np.linalg.qr(rng.standard_normal((p, p)))
    return Q * np.sign(np.diag(R))


def projection_bound_check(sources, idx: ProjectionIndex, n: int, trials: int = 200, seed: int = 0) -> ProjectionBoundReport:
    """max over random unit v of D(v' x_st) against max_j D(z_j).

    Sources are standardized, rotated by a random orthogonal matrix and
    whitened again; the bound passes when the projection maximum exceeds the
    largest component value by at most 10 sqrt(24 / n).
    """
    S, _ = _draw_sources(sources, n, seed)
    ss = np.random.SeedSequence(seed).spawn(len(sources) + 2)
    rng_rot = np.random.Generator(np.random.PCG64(ss[-2]))
    rng_v = np.random.Generator(np.random.PCG64(ss[-1]))
    R = _random_rotation(rng_rot, S.shape[1])
    Z = whiten(S @ R.T).Z
    comp = [index_value(idx, S[:, j]) for j in range(S.shape[1])]
    axis = [index_value(idx, S @ e) for e in np.eye(S.shape[1])]
    best = -math.inf
    for _ in range(trials):
        best = max(best, index_value(idx, Z @ _unit(rng_v, S.shape[1])))
    slack = 10 * math.sqrt(24 / n)
    return ProjectionBoundReport(idx.name, n, trials, best, comp, axis, slack, bool(best <= max(comp) + slack))


def superadditive_check(sources, v, grid: int = 4096):
    """Population check of the min-bound for entropy power.

    Builds the density of v'z for independent standardized z_j by numerical
    convolution and returns (e^{2H(v'z)}, min_j e^{2H(z_j)}).
    """
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    comps = [standardize(d) for d in sources]
    parts = [affine_density(d, float(c), 0.0) for d, c in zip(comps, v) if c != 0]
    dens = parts[0]
    for d in parts[1:]:
        dens = convolve(dens, d, grid=grid)
    return entropy_power(dens), min(entropy_power(d) for d in comps)


# -- recovery metric and simulation -----------------------------------------------------


def amari_index(A_est, A_true) -> float:
    """Normalized Amari error of P = A_est A_true^-1, in [0, 1].

    Zero exactly when P is a scaled permutation matrix.
    """
    A_est = np.asarray(A_est, dtype=float)
    A_true = np.asarray(A_true, dtype=float)
    if A_est.shape != A_true.shape or A_est.ndim != 2 or A_est.shape[0] != A_est.shape[1]:
        raise ValueError("amari_index needs two square matrices of equal size")
    p = A_est.shape[0]
    if p < 2:
        raise ValueError("amari_index needs p >= 2")
    for A in (A_est, A_true):
        if np.linalg.cond(A) > 1e12:
            raise np.linalg.LinAlgError("singular matrix in amari_index")
    B = np.abs(A_est @ np.linalg.inv(A_true))
    rows = (B.sum(axis=1) / B.max(axis=1) - 1).sum()
    cols = (B.sum(axis=0) / B.max(axis=0) - 1).sum()
    return float((rows + cols) / (2 * p * (p - 1)))


def _draw_sources(sources, n, seed):
    if len(sources) < 2:
        raise ValueError("need at least two sources")
    ss = np.random.SeedSequence(seed).spawn(len(sources) + 2)
    cols = [standardize(d).sample(n, ss[j]) for j, d in enumerate(sources)]
    return np.column_stack(cols), ss


def simulate_mixture(sources, A="random", n: int = 100_000, seed: int = 0):
    """X = S M' with independent standardized source columns S.

    ``A`` may be a p x p matrix or "random", in which case M is a seeded
    Gaussian matrix redrawn until its condition number is at most 20.
    """
    S, ss = _draw_sources(sources, n, seed)
    p = S.shape[1]
    if isinstance(A, str):
        if A != "random":
            raise ValueError("A must be a matrix or 'random'")
        rng = np.random.Generator(np.random.PCG64(ss[p]))
        while True:
            M = rng.standard_normal((p, p))
            if np.linalg.cond(M) <= 20:
                break
    else:
        M = np.asarray(A, dtype=float)
        if M.shape != (p, p):
            raise ValueError(f"mixing matrix must be {p} x {p}")
        if np.linalg.cond(M) > 1e12:
            raise np.linalg.LinAlgError("requested mixing matrix is singular")
    return S @ M.T, M, S


def run_pipeline(X, idx: ProjectionIndex, q: int | None = None, seed: int = 0, max_iter: int = 500,
                 tol: float = 1e-6, mixing=None) -> IcaResult:
    """whiten -> fixed_point_pursuit -> (optionally) Amari index against ``mixing``."""
    X = _check_data(X)
    wr = whiten(X)
    p = X.shape[1]
    q = p if q is None else q
    V, vals, iters, conv = fixed_point_pursuit(wr.Z, idx, q, seed, max_iter, tol)
    unmixing = V.T @ wr.W
    thr = idx.threshold(X.shape[0])
    res = IcaResult(idx.name, wr.mean, wr.W, V, unmixing, vals, iters, conv,
                    gaussian_like=[v < thr for v in vals])
    if mixing is not None and q == p:
        res.amari = amari_index(unmixing, np.linalg.inv(mixing))
    return res


# -- CSV IO -------------------------------------------------------------------------


def read_matrix(path) -> np.ndarray:
    """Headerless CSV, one observation per row."""
    X = np.loadtxt(path, delimiter=",", ndmin=2)
    return _check_data(X)


def write_matrix(path, X):
    np.savetxt(path, np.asarray(X, dtype=float), delimiter=",", fmt="%.17g")
