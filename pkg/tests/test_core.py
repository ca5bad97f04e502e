"""Grids, quadrature, primitives and spectra."""

import math

import numpy as np
import pytest

from halfinv.core import (CoefficientSequence, GridSpec, Primitive,
                          SampledFunction, SpectralSequence, integrate,
                          l2_norm, simpson_weights, trapezoid_weights)
from halfinv.errors import ConfigError, PoleReached


def test_grid_nodes_and_step():
    g = GridSpec(5, 0.0, 1.0)
    np.testing.assert_allclose(g.nodes, [0.0, 0.25, 0.5, 0.75, 1.0])
    assert g.step == 0.25
    np.testing.assert_allclose(g.half_nodes(), np.linspace(0.0, 1.0, 9))
    r = g.refine()
    assert r.n_points == 9 and r.a == g.a and r.b == g.b
    assert g == GridSpec(5) and g != GridSpec(7)


def test_grid_validation():
    with pytest.raises(ConfigError):
        GridSpec(4)
    with pytest.raises(ConfigError):
        GridSpec(3)
    with pytest.raises(ConfigError):
        GridSpec(5, 1.0, 1.0)


def test_simpson_cubic_exact():
    # composite Simpson integrates cubics exactly
    g = GridSpec(9, 0.0, 1.0)
    x = g.nodes
    f = SampledFunction(g, 3.0 * x ** 3 - 2.0 * x ** 2 + x - 1.0)
    exact = 3.0 / 4 - 2.0 / 3 + 1.0 / 2 - 1.0
    assert abs(integrate(f) - exact) <= 1e-12 * abs(exact)


def test_integrate_examples():
    g = GridSpec(257)
    assert integrate(SampledFunction(g, np.ones(257))) == pytest.approx(1.0, abs=1e-14)
    assert integrate(SampledFunction(g, g.nodes)) == pytest.approx(0.5, abs=1e-14)
    f = SampledFunction(g, np.cos(np.pi * g.nodes) ** 2)
    assert abs(integrate(f) - 0.5) <= 1e-10


def test_l2_norm_example():
    g = GridSpec(257)
    f = SampledFunction(g, math.sqrt(2.0) * np.cos(np.pi * g.nodes))
    assert abs(l2_norm(f) - 1.0) <= 1e-10


def test_weights_sums():
    g = GridSpec(33, 0.0, 0.5)
    assert simpson_weights(g).sum() == pytest.approx(0.5, abs=1e-14)
    assert trapezoid_weights(g).sum() == pytest.approx(0.5, abs=1e-14)


def test_sampled_eval_interpolates():
    g = GridSpec(5, 0.0, 1.0)
    f = SampledFunction(g, np.array([0.0, 1.0, 0.0, -1.0, 0.0]))
    assert f.eval(0.25) == 1.0
    assert f.eval(0.125) == 0.5
    # outside the domain the boundary value is held
    assert f.eval(-1.0) == 0.0 and f.eval(2.0) == 0.0
    with pytest.raises(ConfigError):
        SampledFunction(g, np.zeros(4))


def test_primitive_zero_and_sampled():
    g = GridSpec(9)
    z = Primitive.zero()
    assert np.all(z.eval(g.nodes) == 0.0)
    s = Primitive.sampled(SampledFunction(g, g.nodes ** 2))
    assert s.eval(0.5) == pytest.approx(0.25, abs=1e-12)


def test_primitive_antiderivative():
    # q(x) = 2x is piecewise linear, so the cumulative trapezoid rule is
    # exact: sigma(x) = x**2 at every node
    g = GridSpec(17)
    q = SampledFunction(g, 2.0 * g.nodes)
    sig = Primitive.antiderivative_of(q)
    np.testing.assert_allclose(sig.eval(g.nodes), g.nodes ** 2, atol=1e-15)
    assert sig.kind == "antiderivative" and sig.q is q


def test_primitive_example_gamma():
    p = Primitive.example_gamma(0.5)
    x = np.linspace(0.0, 1.0, 11)
    np.testing.assert_allclose(p.eval(x), 2.0 * 0.5 / (1.0 - 0.5 * x) - 0.5,
                               rtol=1e-15)
    assert isinstance(p.eval(0.25), float)
    with pytest.raises(ConfigError):
        Primitive.example_gamma(2.0)
    with pytest.raises(ConfigError):
        Primitive.example_gamma(-0.1)


def test_primitive_gamma_pole():
    with pytest.raises(PoleReached):
        Primitive.example_gamma(1.0).eval(1.0)
    with pytest.raises(PoleReached):
        Primitive.example_gamma(1.5).eval(np.linspace(0.0, 1.0, 9))


def test_spectral_lambda_at():
    lam = SpectralSequence.exact_pi([0.0])
    assert lam.lambda_at(1000) == 1000 * math.pi
    lam = SpectralSequence.exact_pi([0.1, 3.3])
    assert lam.lambda_at(1) == 3.3
    lam = SpectralSequence.coulomb([0.0], 0.5)
    assert lam.lambda_at(100) == pytest.approx(100 * math.pi + 0.005, abs=1e-14)
    assert lam.mu_at(100) == pytest.approx(0.005, abs=1e-14)


def test_spectral_harmonic_and_lambdas():
    lam = SpectralSequence.harmonic()
    np.testing.assert_allclose(lam.lambdas(4), math.pi * np.arange(4))


def test_spectral_validation():
    with pytest.raises(ConfigError):
        SpectralSequence([3.0, 1.0])          # not increasing
    with pytest.raises(ConfigError):
        SpectralSequence([-0.2, 3.0])         # negative bottom
    with pytest.raises(ConfigError):
        SpectralSequence([0.0, 6.4])          # head does not meet the tail
    with pytest.raises(ConfigError):
        SpectralSequence([0.0], "cauchy")     # unknown tail model
    with pytest.raises(ConfigError):
        SpectralSequence.coulomb([0.0], 3.2)  # c must stay below pi


def test_mu_l2_closed_form():
    lam = SpectralSequence.coulomb([0.1, math.pi + 0.2], 0.3)
    # tail starts at n = 2: sum 1/n^2 over n >= 2 is pi^2/6 - 1
    ref = math.sqrt(0.1 ** 2 + 0.2 ** 2
                    + 0.3 ** 2 * (math.pi ** 2 / 6.0 - 1.0))
    assert lam.mu_l2() == pytest.approx(ref, abs=1e-12)
    assert SpectralSequence.harmonic().mu_l2() == 0.0


def test_coefficient_sequence():
    c = CoefficientSequence([0.5, 0.9], tail=1.0)
    assert c.at(0) == 0.5 and c.at(1) == 0.9 and c.at(7) == 1.0
    assert len(c) == 2
