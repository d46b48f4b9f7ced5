import math

import numpy as np
import pytest

from infoorder.quadrature import (
    QuadratureConfig,
    QuadratureError,
    RootError,
    derivative,
    find_root,
    integrate,
    invert_monotone,
    maximize,
)


@pytest.mark.parametrize("k", range(0, 8))
def test_polynomials_exact(k):
    assert integrate(lambda x: x**k, 0.0, 2.0) == pytest.approx(2.0 ** (k + 1) / (k + 1), rel=1e-13)


def test_gaussian_over_real_line():
    val = integrate(lambda x: np.exp(-0.5 * x * x), -math.inf, math.inf)
    assert val == pytest.approx(math.sqrt(2 * math.pi), rel=1e-10)


@pytest.mark.parametrize("a,b,expected", [(0.0, math.inf, 1.0), (-math.inf, 0.0, 1.0)])
def test_half_infinite(a, b, expected):
    assert integrate(lambda x: np.exp(-np.abs(x)), a, b) == pytest.approx(expected, rel=1e-10)


def test_reversed_limits_flip_sign():
    assert integrate(np.sin, math.pi, 0.0) == pytest.approx(-2.0, rel=1e-12)


def test_kink_breakpoint():
    val = integrate(lambda x: np.abs(x - 0.3), 0.0, 1.0, points=[0.3])
    assert val == pytest.approx(0.5 * (0.3**2 + 0.7**2), rel=1e-13)


def test_jump_breakpoint():
    val = integrate(lambda x: np.where(x < 1 / 3, 1.0, 5.0), 0.0, 1.0, points=[1 / 3])
    assert val == pytest.approx(1 / 3 + 5 * 2 / 3, rel=1e-13)


def test_density_window_truncation():
    from infoorder.dist import Normal

    d = Normal(0, 1)
    val = integrate(d.pdf, -math.inf, math.inf, density=d)
    assert val == pytest.approx(1.0, abs=1e-11)


def test_singularity_raises_with_worst_interval():
    cfg = QuadratureConfig(max_depth=12)
    with pytest.raises(QuadratureError) as exc:
        integrate(lambda x: 1.0 / x, 0.0, 1.0, cfg)
    lo, hi = exc.value.interval
    assert lo == 0.0 and hi < 1e-3


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=0)
    with pytest.raises(ValueError):
        QuadratureConfig(tail_cut=0.1)
    with pytest.raises(ValueError):
        QuadratureConfig(max_depth=3)


def test_find_root():
    assert find_root(lambda x: x * x - 2, 0, 2) == pytest.approx(math.sqrt(2), abs=1e-12)


def test_find_root_not_bracketed():
    with pytest.raises(RootError):
        find_root(lambda x: x * x + 1, -1, 1)


def test_invert_monotone_vectorized():
    t = np.array([0.1, 0.5, 0.9])
    x = invert_monotone(lambda x: x**3, t, 0.0, 1.0)
    np.testing.assert_allclose(x**3, t, rtol=1e-10)


def test_maximize_smooth():
    x, v = maximize(lambda x: -((x - 0.7) ** 2) + 3, 0.0, 2.0)
    assert x == pytest.approx(0.7, abs=1e-6)
    assert v == pytest.approx(3.0, abs=1e-12)


def test_maximize_respects_jump():
    g = lambda x: np.where(x < 0.5, x, x - 1.0)  # noqa: E731
    x, v = maximize(g, 0.0, 1.0, points=[0.5])
    assert v == pytest.approx(0.5, abs=1e-9)


def test_maximize_small_grid_rejected():
    with pytest.raises(ValueError):
        maximize(np.sin, 0, 1, grid=10)


def test_derivative():
    assert derivative(np.sin, 0.3) == pytest.approx(math.cos(0.3), abs=1e-9)
    with pytest.raises(ValueError):
        derivative(np.sin, 0.3, h=0)
