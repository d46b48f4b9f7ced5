"""Pure-numpy implementations of the hot kernels."""

import numpy as np


def central_moments(x, kmax):
    x = np.asarray(x, dtype=np.float64)
    d = x - x.mean()
    out = np.empty(kmax + 1)
    out[0] = 1.0
    p = np.ones_like(d)
    for k in range(1, kmax + 1):
        p = p * d
        out[k] = p.mean()
    return out


def projection_moments(Z, v, kmax):
    """Raw moments of y = Z v and the cross moments mean(z * y**j).

    Returns ``m`` of shape (kmax + 1,) with m[j] = mean(y**j) and ``g`` of
    shape (kmax, p) with g[j] = mean(z * y**j).
    """
    Z = np.asarray(Z, dtype=np.float64)
    y = Z @ v
    n, p = Z.shape
    m = np.empty(kmax + 1)
    g = np.empty((kmax, p))
    m[0] = 1.0
    yp = np.ones(n)
    for j in range(kmax):
        g[j] = yp @ Z / n
        yp = yp * y
        m[j + 1] = yp.mean()
    return m, g


def _offdiag(A):
    off = A - np.diag(np.diag(A))
    return np.sqrt(np.sum(off * off))


def jacobi_eigh(S, tol, max_sweeps):
    """Cyclic Jacobi eigendecomposition; rotations applied as vector ops."""
    A = np.array(S, dtype=np.float64)
    p = A.shape[0]
    U = np.eye(p)
    for sweep in range(max_sweeps):
        off = _offdiag(A)
        if off < tol:
            return np.diag(A).copy(), U, sweep
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
                ci, cj = A[:, i].copy(), A[:, j].copy()
                A[:, i] = c * ci - s * cj
                A[:, j] = s * ci + c * cj
                ri, rj = A[i, :].copy(), A[j, :].copy()
                A[i, :] = c * ri - s * rj
                A[j, :] = s * ri + c * rj
                ui, uj = U[:, i].copy(), U[:, j].copy()
                U[:, i] = c * ui - s * uj
                U[:, j] = s * ui + c * uj
    off = _offdiag(A)
    if off < tol:
        return np.diag(A).copy(), U, max_sweeps
    raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps (off={off:.3e})")


def convolve(a, b):
    return np.convolve(np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64))
