"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--n 100000]

Both backends are imported directly, so INFOORDER_DISABLE_NUMBA has no
effect here.  The first numba call (compilation) is excluded from timing.
"""

import argparse
import timeit

import numpy as np

from infoorder.kernels import numba_backend, numpy_backend


def cases(n, rng):
    x = rng.standard_normal(n)
    Z = rng.standard_normal((n, 3))
    v = np.array([0.6, 0.0, 0.8])
    A = rng.standard_normal((12, 12))
    S = A @ A.T
    a = rng.random(4096)
    b = rng.random(4096)
    return {
        "central_moments": lambda m: m.central_moments(x, 8),
        "projection_moments": lambda m: m.projection_moments(Z, v, 7),
        "jacobi_eigh": lambda m: m.jacobi_eigh(S, 1e-14, 100),
        "convolve": lambda m: m.convolve(a, b),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, default=100_000)
    args = ap.parse_args()
    if numba_backend is None:
        raise SystemExit("numba is not importable; nothing to compare")

    rng = np.random.default_rng(0)
    print(f"{'kernel':<20}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, call in cases(args.n, rng).items():
        call(numba_backend)  # compile
        t_np = min(timeit.repeat(lambda: call(numpy_backend), number=1, repeat=args.repeat))
        t_nb = min(timeit.repeat(lambda: call(numba_backend), number=1, repeat=args.repeat))
        print(f"{name:<20}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
