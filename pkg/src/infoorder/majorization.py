"""Majorization of discrete distributions and doubly stochastic smoothing."""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "prob_vector",
    "doubly_stochastic",
    "majorizes",
    "smooth",
    "discrete_measures",
    "mixture_order_check",
    "random_doubly_stochastic",
    "parse_pvec",
]

_TOL = 1e-12


def prob_vector(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("probability vector must be a non-empty 1-d array")
    if np.any(p < 0) or np.any(p > 1):
        raise ValueError("probabilities must lie in [0, 1]")
    if abs(p.sum() - 1.0) > _TOL * max(1, p.size):
        raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
    return p


def doubly_stochastic(L) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ValueError("doubly stochastic matrix must be square")
    if np.any(L < 0):
        raise ValueError("doubly stochastic matrix has negative entries")
    tol = _TOL * max(1, L.shape[0])
    if np.any(np.abs(L.sum(axis=1) - 1) > tol) or np.any(np.abs(L.sum(axis=0) - 1) > tol):
        raise ValueError("row and column sums must all equal 1")
    return L


def parse_pvec(text: str) -> np.ndarray:
    """'0.5,0.25,0.25' -> validated probability vector."""
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise ValueError(f"bad probability vector {text!r}: {e}") from None
    return prob_vector(vals)


def majorizes(p, q) -> bool:
    """True when p is majorized by q (q is the more concentrated vector).

    Ascending-sorted prefix sums of p must dominate those of q.
    """
    p, q = prob_vector(p), prob_vector(q)
    if p.size != q.size:
        raise ValueError("majorization needs vectors of equal length")
    sp = np.cumsum(np.sort(p))
    sq = np.cumsum(np.sort(q))
    return bool(np.all(sp >= sq - _TOL))


def smooth(q, L):
    """p = q L; the result is always majorized by q."""
    q, L = prob_vector(q), doubly_stochastic(L)
    if L.shape[0] != q.size:
        raise ValueError("matrix and vector dimensions differ")
    p = q @ L
    p = np.clip(p, 0.0, 1.0)
    assert majorizes(p, q), "smoothing produced a vector not majorized by its input"
    return p


def discrete_measures(p):
    """(H, H*, H**) = (-sum p log p, sum p^2, max p), natural log."""
    p = np.asarray(p, dtype=float)
    nz = p[p > 0]
    H = float(-(nz * np.log(nz)).sum())
    return H + 0.0, float(p @ p), float(p.max())


def mixture_order_check(p, q, lam: float) -> bool:
    """p < lam p + (1 - lam) q < q for p majorized by q."""
    if not 0 <= lam <= 1:
        raise ValueError("lambda must lie in [0, 1]")
    p, q = prob_vector(p), prob_vector(q)
    mix = lam * p + (1 - lam) * q
    mix = mix / mix.sum()
    return majorizes(p, mix) and majorizes(mix, q)


def random_doubly_stochastic(k: int, rng: np.random.Generator, max_terms: int = 5) -> np.ndarray:
    """Random convex combination of at most ``max_terms`` permutation matrices."""
    m = int(rng.integers(1, max_terms + 1))
    w = rng.dirichlet(np.ones(m))
    L = np.zeros((k, k))
    eye = np.eye(k)
    for wi in w:
        L += wi * eye[rng.permutation(k)]
    return L


def bits(H: float) -> float:
    return H / math.log(2.0)
