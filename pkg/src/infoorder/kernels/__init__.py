"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

The numba backend is used when numba imports cleanly, unless the
environment variable ``INFOORDER_DISABLE_NUMBA`` is set to a truthy value
("1", "true", "yes").  Both backends expose the same four functions:

    central_moments(x, kmax)          -> moments mu_0..mu_kmax about the mean
    projection_moments(Z, v, kmax)    -> (mean(y**j), mean(z * y**j)), y = Z v
    jacobi_eigh(S, tol, max_sweeps)   -> (diag, U, sweeps), unsorted
    convolve(a, b)                    -> full discrete convolution
"""

import os

from . import _numpy as numpy_backend

_FLAG = os.environ.get("INFOORDER_DISABLE_NUMBA", "").strip().lower()

try:
    from . import _numba as numba_backend
except ImportError:  # pragma: no cover - numba missing
    numba_backend = None

if numba_backend is not None and _FLAG not in ("1", "true", "yes"):
    backend = numba_backend
    BACKEND = "numba"
else:
    backend = numpy_backend
    BACKEND = "numpy"

central_moments = backend.central_moments
projection_moments = backend.projection_moments
jacobi_eigh = backend.jacobi_eigh
convolve = backend.convolve

__all__ = [
    "BACKEND",
    "central_moments",
    "projection_moments",
    "jacobi_eigh",
    "convolve",
    "numpy_backend",
    "numba_backend",
]
