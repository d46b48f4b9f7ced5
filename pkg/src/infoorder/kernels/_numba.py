"""numba-compiled versions of the kernels in ``_numpy``; same signatures."""

import numpy as np
from numba import njit


@njit(cache=True)
def _central_moments(x, kmax):
    n = x.shape[0]
    mu = 0.0
    for i in range(n):
        mu += x[i]
    mu /= n
    out = np.zeros(kmax + 1)
    for i in range(n):
        d = x[i] - mu
        p = 1.0
        for k in range(1, kmax + 1):
            p *= d
            out[k] += p
    out /= n
    out[0] = 1.0
    return out


def central_moments(x, kmax):
    return _central_moments(np.ascontiguousarray(x, dtype=np.float64), int(kmax))


@njit(cache=True, fastmath=True)
def _projection_moments(Z, v, kmax):
    n, p = Z.shape
    Zt = np.ascontiguousarray(Z.T)
    y = np.zeros(n)
    for c in range(p):
        for r in range(n):
            y[r] += Zt[c, r] * v[c]
    m = np.zeros(kmax + 1)
    g = np.zeros((kmax, p))
    yp = np.ones(n)
    for j in range(kmax):
        for c in range(p):
            acc = 0.0
            for r in range(n):
                acc += Zt[c, r] * yp[r]
            g[j, c] = acc / n
        acc = 0.0
        for r in range(n):
            yp[r] *= y[r]
            acc += yp[r]
        m[j + 1] = acc / n
    m[0] = 1.0
    return m, g


def projection_moments(Z, v, kmax):
    return _projection_moments(
        np.ascontiguousarray(Z, dtype=np.float64),
        np.ascontiguousarray(v, dtype=np.float64),
        int(kmax),
    )


@njit(cache=True)
def _offdiag(A):
    p = A.shape[0]
    s = 0.0
    for i in range(p):
        for j in range(p):
            if i != j:
                s += A[i, j] * A[i, j]
    return np.sqrt(s)


@njit(cache=True)
def _jacobi(A, tol, max_sweeps):
    p = A.shape[0]
    U = np.eye(p)
    for sweep in range(max_sweeps):
        if _offdiag(A) < tol:
            return U, sweep, True
        for i in range(p - 1):
            for j in range(i + 1, p):
                aij = A[i, j]
                if aij == 0.0:
                    continue
                theta = (A[j, j] - A[i, i]) / (2.0 * aij)
                if theta == 0.0:
                    t = 1.0
                elif abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(p):
                    aki = A[k, i]
                    akj = A[k, j]
                    A[k, i] = c * aki - s * akj
                    A[k, j] = s * aki + c * akj
                for k in range(p):
                    aik = A[i, k]
                    ajk = A[j, k]
                    A[i, k] = c * aik - s * ajk
                    A[j, k] = s * aik + c * ajk
                for k in range(p):
                    uki = U[k, i]
                    ukj = U[k, j]
                    U[k, i] = c * uki - s * ukj
                    U[k, j] = s * uki + c * ukj
    return U, max_sweeps, _offdiag(A) < tol


def jacobi_eigh(S, tol, max_sweeps):
    A = np.array(S, dtype=np.float64)
    U, sweeps, ok = _jacobi(A, float(tol), int(max_sweeps))
    if not ok:
        raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return np.diag(A).copy(), U, sweeps


@njit(cache=True, fastmath=True)
def _convolve(a, b):
    na, nb = a.shape[0], b.shape[0]
    br = b[::-1].copy()
    out = np.zeros(na + nb - 1)
    for k in range(na + nb - 1):
        lo = max(0, k - nb + 1)
        hi = min(na, k + 1)
        off = nb - 1 - k
        out[k] = np.dot(a[lo:hi], br[off + lo:off + hi])
    return out


def convolve(a, b):
    return _convolve(np.ascontiguousarray(a, dtype=np.float64), np.ascontiguousarray(b, dtype=np.float64))
