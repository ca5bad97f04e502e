"""Shooting, characteristic function, eigenvalues, norming constants."""

import math

import numpy as np
import pytest
from scipy.optimize import brentq

from halfinv import forward, oracle
from halfinv.core import (GridSpec, Primitive, SampledFunction,
                          simpson_weights)
from halfinv.errors import (BracketFailure, ConfigError, NotAnEigenvalue,
                            NumericalError)

BC0 = forward.BoundaryParam.robin(0.0)
BCG = forward.BoundaryParam.robin(-0.5)  # h for the gamma = 1/2 family
BCD = forward.BoundaryParam.dirichlet()


def test_boundary_param():
    assert forward.BoundaryParam.robin(-0.5).h == -0.5
    assert forward.BoundaryParam.dirichlet().kind == "dirichlet"
    with pytest.raises(ConfigError):
        forward.BoundaryParam("neumann")


def test_shoot_free():
    g = GridSpec(257)
    t = forward.shoot(Primitive.zero(), math.pi, g)
    assert np.max(np.abs(t.u - np.cos(math.pi * g.nodes))) <= 1e-8
    assert np.max(np.abs(t.v + math.pi * np.sin(math.pi * g.nodes))) <= 1e-8
    assert t.u[0] == 1.0 and t.v[0] == 0.0


def test_shoot_free_lambda_zero():
    g = GridSpec(129)
    t = forward.shoot(Primitive.zero(), 0.0, g)
    np.testing.assert_allclose(t.u, 1.0, atol=1e-14)
    np.testing.assert_allclose(t.v, 0.0, atol=1e-14)


def test_shoot_gamma_closed_form():
    gam, lam = 0.5, 2.7
    g = GridSpec(257)
    t = forward.shoot(Primitive.example_gamma(gam), lam, g)
    ref = oracle.shoot_solution_gamma(gam, lam, g.nodes)
    err = np.max(np.abs(t.u - ref))
    assert err <= 1e-6
    # and the error drops about 16x on the refined grid
    t2 = forward.shoot(Primitive.example_gamma(gam), lam, g.refine())
    err2 = np.max(np.abs(t2.u - oracle.shoot_solution_gamma(gam, lam, g.refine().nodes)))
    assert err2 <= err / 8.0 + 1e-14


def test_characteristic_free_robin():
    g = GridSpec(2049)
    for n in range(5):
        assert abs(forward.characteristic(Primitive.zero(), BC0, math.pi * n, g)) <= 1e-8


def test_characteristic_gamma():
    g = GridSpec(513)
    sig = Primitive.example_gamma(0.5)
    for n in range(4):
        assert abs(forward.characteristic(sig, BCG, math.pi * n, g)) <= 1e-6


def test_characteristic_free_dirichlet():
    g = GridSpec(257)
    assert abs(forward.characteristic(Primitive.zero(), BCD, math.pi / 2, g)) <= 1e-8


def test_eigenvalues_free():
    g = GridSpec(1025)
    lams = forward.eigenvalues(Primitive.zero(), BC0, 5, g)
    assert np.max(np.abs(lams - math.pi * np.arange(5))) <= 1e-8


def test_eigenvalues_gamma():
    g = GridSpec(513)
    lams = forward.eigenvalues(Primitive.example_gamma(0.5), BCG, 5, g)
    assert np.max(np.abs(lams - math.pi * np.arange(5))) <= 1e-6


def test_eigenvalues_free_dirichlet():
    g = GridSpec(1025)
    lams = forward.eigenvalues(Primitive.zero(), BCD, 3, g)
    assert np.max(np.abs(lams - math.pi * (np.arange(3) + 0.5))) <= 1e-8


def test_eigenvalues_constant_q_shifted():
    # q = 1 with h = 0 has a negative bottom eigenvalue, so the solvable
    # variant shifts the potential: q -> q + 1 with h -> h - 1 keeps the
    # eigenfunctions and moves every z up by exactly 1
    g = GridSpec(1025)
    sig = Primitive.antiderivative_of(SampledFunction(g, np.full(1025, 2.0)))
    bc = forward.BoundaryParam.robin(-1.0)
    lams = forward.eigenvalues(sig, bc, 6, g)

    # transcendental oracle: z0 = 2 - k^2 with k tanh k = 1, and
    # z_n = 2 + w^2 with w tan w = -1 on the n-th branch
    k0 = brentq(lambda k: k * math.tanh(k) - 1.0, 0.5, 2.0, xtol=1e-14)
    zs = [2.0 - k0 * k0]
    for n in range(1, 6):
        w = brentq(lambda w: w * math.sin(w) + math.cos(w),
                   math.pi * (n - 0.5) + 1e-9, math.pi * (n + 0.5) - 1e-9,
                   xtol=1e-14)
        zs.append(2.0 + w * w)
    assert np.max(np.abs(lams - np.sqrt(zs))) <= 1e-7

    # brute-force oracle: sign scan of the characteristic at step 1e-3,
    # then bisection inside each bracket
    lgrid = np.arange(1e-6, 6.1 * math.pi, 1e-3)
    dv = forward.characteristic(sig, bc, lgrid, g)
    idx = np.nonzero(np.sign(dv[:-1]) * np.sign(dv[1:]) < 0)[0]
    roots = [brentq(lambda L: forward.characteristic(sig, bc, L, g),
                    lgrid[i], lgrid[i + 1], xtol=1e-13) for i in idx[:6]]
    assert len(roots) == 6
    assert np.max(np.abs(lams - np.array(roots))) <= 1e-8


def test_eigenvalues_negative_bottom_raises():
    g = GridSpec(513)
    sig = Primitive.antiderivative_of(SampledFunction(g, np.ones(513)))
    with pytest.raises(NumericalError):
        forward.eigenvalues(sig, BC0, 3, g)


def test_eigenvalues_bracket_failure():
    # a potential this large pushes every eigenvalue far from its seed
    g = GridSpec(513)
    sig = Primitive.antiderivative_of(SampledFunction(g, np.full(513, 200.0)))
    with pytest.raises(BracketFailure):
        forward.eigenvalues(sig, BCD, 3, g)


def test_eigenvalues_count_validation():
    with pytest.raises(ConfigError):
        forward.eigenvalues(Primitive.zero(), BC0, 0, GridSpec(129))


def test_norming_free():
    g = GridSpec(513)
    lams = forward.eigenvalues(Primitive.zero(), BC0, 5, g)
    al = forward.norming_constants(Primitive.zero(), BC0, lams, g)
    assert np.max(np.abs(al - np.array([0.5, 1, 1, 1, 1]))) <= 1e-8


def test_norming_gamma_quadrature_oracle():
    gam = 0.5
    g = GridSpec(1025)
    sig = Primitive.example_gamma(gam)
    lams = forward.eigenvalues(sig, BCG, 5, g)
    al = forward.norming_constants(sig, BCG, lams, g)
    # independent: alpha_n = 1 / int_0^1 (sqrt2 w_n)^2 with the printed
    # closed-form eigenfunctions, on a finer quadrature grid
    gq = GridSpec(4097)
    w = simpson_weights(gq)
    for n in range(5):
        wn = oracle.eigenfunction_gamma(gam, n, gq.nodes)
        ref = 1.0 / (2.0 * float(w @ (wn * wn)))
        assert abs(al[n] - ref) <= 1e-8
    assert abs(al[0] - (1.0 - gam) / 2.0) <= 1e-10


def test_norming_positive():
    rng = np.random.RandomState(3)
    g = GridSpec(513)
    vals = 0.4 * np.cos(2 * np.pi * g.nodes) + rng.uniform(-0.1, 0.1)
    sig = Primitive.sampled(SampledFunction(g, vals))
    bc = forward.BoundaryParam.robin(-0.6)
    lams = forward.eigenvalues(sig, bc, 4, g)
    al = forward.norming_constants(sig, bc, lams, g)
    assert np.all(al > 0.0)


def test_norming_rejects_non_eigenvalue():
    g = GridSpec(257)
    with pytest.raises(NotAnEigenvalue):
        forward.norming_constants(Primitive.zero(), BC0, [1.0], g)


def test_orthogonality_and_diagonal_normalization():
    gam = 0.5
    g = GridSpec(1025)
    sig = Primitive.example_gamma(gam)
    lams = forward.eigenvalues(sig, BCG, 5, g)
    al = forward.norming_constants(sig, BCG, lams, g)
    w = simpson_weights(g)
    U = [math.sqrt(2.0) * forward.shoot(sig, lams[n], g).u for n in range(5)]
    for i in range(5):
        # (w_k, w_k) * alpha_k = 1
        assert abs(al[i] * float(w @ (U[i] * U[i])) - 1.0) <= 1e-5
        for j in range(i):
            ip = abs(float(w @ (U[i] * U[j])))
            ni = math.sqrt(float(w @ (U[i] * U[i])))
            nj = math.sqrt(float(w @ (U[j] * U[j])))
            assert ip <= 1e-5 * ni * nj


def test_mesh_refinement_order_sampled():
    # sampled sigma is piecewise linear between nodes, so the data itself
    # carries an O(h^2) perturbation and halving the step can only be
    # counted on for ~4x on the low modes (the integrator's own 4th-order
    # rate shows on exact-eval sigma, see the example-family tests)
    bcd = BCD

    def eig(ng):
        gg = GridSpec(ng)
        vals = 0.3 * np.sin(2 * np.pi * gg.nodes) + 0.1 * gg.nodes
        return forward.eigenvalues(Primitive.sampled(SampledFunction(gg, vals)),
                                   bcd, 6, gg)

    e129, e257, ref = eig(129), eig(257), eig(4097)
    c, f = np.abs(e129 - ref), np.abs(e257 - ref)
    assert np.all(f <= c + 1e-10)
    big = c > 1e-8
    assert big.any()
    assert np.all(c[big] / f[big] >= 3.0)


def test_mesh_refinement_order_dirichlet_exact_sigma():
    # exact-eval sigma under the other boundary condition: full 4th order
    sig = Primitive.example_gamma(0.5)
    e129 = forward.eigenvalues(sig, BCD, 6, GridSpec(129))
    e257 = forward.eigenvalues(sig, BCD, 6, GridSpec(257))
    ref = forward.eigenvalues(sig, BCD, 6, GridSpec(4097))
    c, f = np.abs(e129 - ref), np.abs(e257 - ref)
    big = c > 1e-9
    assert big.any()
    assert np.all(c[big] / f[big] >= 12.0)
