import io
import math

import numpy as np
import pytest

import oracles
from infoorder import dist
from infoorder.dist import GridDensity, SpecError, parse_spec, parse_spec_list

CATALOG = ["norm", "laplace", "lognorm", "unif", "exp"]


@pytest.mark.parametrize("name", CATALOG + ["gmm"])
def test_normalized(name):
    d = dist.make_density(name)
    assert d.expect(lambda x: np.ones_like(x)) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("name", CATALOG)
def test_against_scipy(name):
    d = dist.make_density(name)
    ref = oracles.scipy_dist(name)
    u = np.array([1e-6, 0.01, 0.3, 0.5, 0.77, 0.999])
    x = ref.ppf(u)
    np.testing.assert_allclose(d.quantile(u), x, rtol=1e-10)
    np.testing.assert_allclose(d.cdf(x), u, rtol=1e-10)
    np.testing.assert_allclose(d.pdf(x), ref.pdf(x), rtol=1e-10)
    assert d.mean == pytest.approx(ref.mean(), rel=1e-12)
    assert d.variance == pytest.approx(ref.var(), rel=1e-12)


def test_gmm_moments():
    d = dist.make_density("gmm")
    g = oracles.GmmOracle(0, 4, 1, 2, 0.4)
    assert d.mean == pytest.approx(g.mean(), rel=1e-14)
    assert d.variance == pytest.approx(g.var(), rel=1e-14)
    xs = np.linspace(-5, 10, 31)
    np.testing.assert_allclose(d.pdf(xs), [g.pdf(x) for x in xs], rtol=1e-12)
    u = np.array([0.001, 0.4, 0.95])
    np.testing.assert_allclose(d.cdf(d.quantile(u)), u, atol=1e-14)


def test_gmm_score_matches_finite_difference():
    d = dist.make_density("gmm")
    x = np.array([-2.0, 0.5, 3.0, 7.0])
    h = 1e-6
    np.testing.assert_allclose(d.score(x), (d.logpdf(x + h) - d.logpdf(x - h)) / (2 * h), rtol=1e-6)


def test_gmm_validation():
    with pytest.raises(SpecError):
        dist.GmmSpec(0, 1, 1, 1, 1.5)
    with pytest.raises(SpecError):
        dist.GmmSpec(0, 1, 0, 1, 0.5)


def test_gmm_endpoint_weight_is_normal():
    d = dist.Gmm(dist.GmmSpec(0, 2, 1, 1, 0.0))
    x = np.linspace(-3, 5, 9)
    np.testing.assert_allclose(d.pdf(x), dist.Normal(2, 1).pdf(x), rtol=1e-14)


def test_affine_keeps_closed_forms():
    assert isinstance(dist.affine(dist.Normal(1, 2), 3, 4), dist.Normal)
    assert isinstance(dist.affine(dist.Uniform(0, 1), 2, 1), dist.Uniform)
    a = dist.affine(dist.LogNormal(), -2, 1)
    assert isinstance(a, dist.Affine)
    assert dist.affine(a, 0.5, 0.0).base is a.base
    assert a.mean == pytest.approx(-2 * math.exp(0.5) + 1)
    assert a.variance == pytest.approx(4 * (math.e - 1) * math.e)
    x = np.array([-5.0, -1.0, 0.5])
    np.testing.assert_allclose(a.pdf(x), dist.LogNormal().pdf((x - 1) / -2) / 2)


def test_affine_rejects_zero_scale():
    with pytest.raises(ValueError):
        dist.affine(dist.Normal(), 0.0)


def test_standardize():
    s = dist.standardize(dist.make_density("gmm"))
    assert s.mean == pytest.approx(0.0, abs=1e-12)
    assert s.variance == pytest.approx(1.0, rel=1e-12)


def test_swap_preserves_mass_and_cdf():
    d = dist.swap_transform(dist.Normal(), -1.0, 0.5, 0.7)
    assert d.expect(lambda x: np.ones_like(x)) == pytest.approx(1.0, abs=1e-10)
    x = np.array([-3.0, -0.8, -0.1, 0.7, 1.1, 4.0])
    lo = d.window()[0]
    from infoorder.quadrature import integrate

    ref = [integrate(d.pdf, lo, xi, points=d.kinks) for xi in x]
    np.testing.assert_allclose(d.cdf(x), ref, atol=1e-10)


def test_swap_values_exchanged():
    base = dist.Normal()
    d = dist.swap_transform(base, -1.0, 0.5, 0.7)
    assert d.pdf(-0.9) == pytest.approx(base.pdf(0.6))
    assert d.pdf(0.6) == pytest.approx(base.pdf(-0.9))
    assert d.pdf(3.0) == base.pdf(3.0)


def test_swap_overlap_rejected():
    with pytest.raises(ValueError):
        dist.swap_transform(dist.Normal(), 0.0, 0.5, 1.0)
    with pytest.raises(ValueError):
        dist.swap_transform(dist.Normal(), 0.0, 2.0, -1.0)


def test_spec_parsing():
    d = parse_spec("gmm:0,4,1,2,0.4")
    assert d.spec.w == 0.4 and d.spec_text == "gmm:0,4,1,2,0.4"
    assert isinstance(parse_spec("normal"), dist.Normal)
    ds = parse_spec_list("unif:0,1,laplace:1,norm")
    assert [type(x).__name__ for x in ds] == ["Uniform", "Laplace", "Normal"]


@pytest.mark.parametrize("bad", ["foo:1", "norm:0,x", "norm:0,1,2", "laplace:-1", "unif:1,0"])
def test_spec_errors(bad):
    with pytest.raises((SpecError, ValueError)):
        parse_spec(bad)


def test_spec_list_errors():
    with pytest.raises(SpecError):
        parse_spec_list("1,unif")
    with pytest.raises(SpecError):
        parse_spec_list("unif:0,1,,laplace")


def test_grid_density_validation():
    with pytest.raises(ValueError):
        GridDensity(0, 1, np.ones(10))
    with pytest.raises(ValueError):
        GridDensity(0, 1, -np.ones(200))
    with pytest.raises(ValueError):
        GridDensity(0, 1, np.ones(200), layout="bogus")


def test_grid_density_basics():
    g = GridDensity(0, 1, np.ones(256) * 3.0, layout="cells")
    assert g.mass == pytest.approx(3.0)
    assert g.integrate_pdf(lambda t: t) == pytest.approx(1.0)
    assert g.quantile(0.25) == pytest.approx(0.25)
    assert g.cdf(0.6) == pytest.approx(0.6)
    assert g.edge_jump
    buf = io.StringIO()
    g.to_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "u,value" and len(lines) == 257


def test_convolution_of_normals():
    c = dist.convolve(dist.Normal(0, 1), dist.Normal(1, 1))
    ref = dist.Normal(1, math.sqrt(2))
    np.testing.assert_allclose(c.values, ref.pdf(c.x), atol=1e-9)
    # between nodes the error is that of linear interpolation, h^2 |f''| / 8
    xs = np.linspace(-4, 6, 21)
    np.testing.assert_allclose(c.pdf(xs), ref.pdf(xs), atol=2e-6)
    assert c.mean == pytest.approx(1.0, abs=1e-8)
    assert c.variance == pytest.approx(2.0, rel=1e-6)


def test_convolution_of_uniforms_is_triangle():
    c = dist.convolve(dist.Uniform(0, 1), dist.Uniform(0, 1), grid=4096)
    xs = np.array([0.25, 0.5, 1.0, 1.5, 1.75])
    np.testing.assert_allclose(c.pdf(xs), 1 - np.abs(xs - 1), atol=2e-3)


def test_sampling_is_deterministic_and_open():
    u = dist.uniform_stream(10_000, 7)
    assert np.all((u > 0) & (u < 1))
    a = dist.sample(dist.Laplace(1), 5000, 11)
    b = dist.sample(dist.Laplace(1), 5000, 11)
    np.testing.assert_array_equal(a, b)
    assert abs(a.mean()) < 4 * math.sqrt(2 / 5000)
    with pytest.raises(ValueError):
        dist.sample(dist.Normal(), 0, 1)
