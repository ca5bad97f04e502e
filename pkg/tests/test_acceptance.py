"""Acceptance gate: the nine shipping criteria, one pass/fail line each.

Run with -s to see the lines; every check also asserts, so a red criterion
fails the suite.
"""

import math
import time

import numpy as np
import pytest

from halfinv import basis, forward, glm, oracle, transform
from halfinv.core import (GridSpec, Primitive, SampledFunction,
                          SpectralSequence, l2_norm)

from helpers import rand_trig

HARM = SpectralSequence.harmonic()


def _line(num, ok, detail):
    print("criterion %d: %s (%s)" % (num, "PASS" if ok else "FAIL", detail))
    return ok


@pytest.fixture(scope="module")
def recon_gamma():
    t0 = time.perf_counter()
    res = glm.reconstruct(Primitive.example_gamma(0.5), HARM, {"grid": 257})
    return res, time.perf_counter() - t0


@pytest.fixture(scope="module")
def recon_zero():
    res = glm.reconstruct(Primitive.zero(), HARM, {"grid": 257})
    return res


def test_criterion_1_gamma_roundtrip(recon_gamma):
    res, elapsed = recon_gamma
    x = res.sigma.grid.nodes
    sig_err = float(np.max(np.abs(res.sigma.values - oracle.sigma_gamma(0.5, x))))
    h_err = abs(res.h + 0.5)
    bc = forward.BoundaryParam.robin(res.h)
    eig = forward.eigenvalues(res.sigma, bc, 11, res.sigma.grid.refine())
    # n = 0 compares in z = lambda^2: lambda(z) has a vertical tangent at
    # z = 0, so the z error (quadratic in the data error) is the honest
    # accuracy statement there
    lam_err = float(np.max(np.abs(eig[1:] - math.pi * np.arange(1, 11))))
    z0 = float(eig[0] ** 2)
    ok = (sig_err <= 1e-3 and h_err <= 1e-3 and lam_err <= 1e-4
          and z0 <= 1e-4 and elapsed <= 10.0)
    _line(1, ok, "sigma_err=%.3g h_err=%.3g lam_err=%.3g z0=%.3g t=%.2fs"
          % (sig_err, h_err, lam_err, z0, elapsed))
    assert sig_err <= 1e-3
    assert h_err <= 1e-3
    assert lam_err <= 1e-4
    assert z0 <= 1e-4
    assert elapsed <= 10.0


def test_criterion_2_solvability_sweep():
    half = GridSpec(129, 0.0, 0.5)
    worst = 0.0
    ok = True
    for k in range(8):
        gam = 0.1 + 0.2 * k
        sig = Primitive.example_gamma(gam)
        kern = transform.collocation_kernel(sig, half)
        rep = basis.membership_check(transform.phi0(sig, kern), HARM)
        worst = max(worst, abs(rep.alpha.at(0) - (1.0 - gam) / 2.0))
        ok = ok and abs(rep.alpha.at(0) - (1.0 - gam) / 2.0) <= 1e-2
        ok = ok and rep.solvable == (gam < 1.0)
    _line(2, ok, "max alpha0 err=%.3g over gamma=0.1..1.5" % worst)
    assert ok


def test_criterion_3_unperturbed(recon_zero):
    half = GridSpec(257, 0.0, 0.5)
    kern = transform.collocation_kernel(Primitive.zero(), half)
    ph = transform.phi0(Primitive.zero(), kern)
    phi_err = float(np.max(np.abs(ph.values)))
    sig_err = float(np.max(np.abs(recon_zero.sigma.values)))
    h_err = abs(recon_zero.h)
    ok = phi_err <= 1e-6 and sig_err <= 1e-5 and h_err <= 1e-6
    _line(3, ok, "phi0=%.3g sigma=%.3g h=%.3g" % (phi_err, sig_err, h_err))
    assert phi_err <= 1e-6
    assert sig_err <= 1e-5
    assert h_err <= 1e-6


def test_criterion_4_phi0_norm_bound():
    rng = np.random.RandomState(100)
    half = GridSpec(129, 0.0, 0.5)
    worst = 0.0
    for _ in range(100):
        q0 = rand_trig(rng, half, 0.5)
        kern = transform.goursat_kernel(q0, half)
        ph = transform.phi0(Primitive.antiderivative_of(q0), kern)
        worst = max(worst, l2_norm(ph))
    ok = worst <= 0.25 + 1e-3
    _line(4, ok, "max ||phi0|| = %.4g over 100 draws, bound 0.251" % worst)
    assert ok


def test_criterion_5_local_solvability():
    rng = np.random.RandomState(200)
    half = GridSpec(129, 0.0, 0.5)
    corridor = 2.0 * math.sqrt(2.0) / 3.0 + 1e-3
    all_solv = True
    worst = 0.0
    for _ in range(50):
        q0 = rand_trig(rng, half, 0.5)
        m = int(rng.randint(2, 6))
        mu = rng.uniform(-0.05, 0.05, m)
        mu[0] = rng.uniform(0.0, 0.05)
        lam = SpectralSequence(np.pi * np.arange(m) + mu, "coulomb",
                               float(rng.uniform(-0.15, 0.15)))
        assert lam.mu_l2() <= 0.25
        sig = Primitive.antiderivative_of(q0)
        kern = transform.goursat_kernel(q0, half)
        rep = basis.membership_check(transform.phi0(sig, kern), lam)
        all_solv = all_solv and rep.solvable
        worst = max(worst, float(np.max(np.abs(rep.alpha.head[1:] - 1.0))))
    ok = all_solv and worst <= corridor
    _line(5, ok, "all solvable=%s, max|alpha_n-1|=%.4g, corridor %.4g"
          % (all_solv, worst, corridor))
    assert ok


def test_criterion_6_trig_defect():
    rng = np.random.RandomState(300)
    a = rng.uniform(-10.0, 10.0, 10**4)
    b = rng.uniform(-10.0, 10.0, 10**4)
    d = oracle.trig_defect(a, b)
    bound = b * b / math.sqrt(3.0) + 1e-12
    violations = int(np.sum(d > bound))
    ok = violations == 0
    _line(6, ok, "%d violations in 10^4 draws, max slack=%.3g"
          % (violations, float(np.max(d - bound))))
    assert ok


def test_criterion_7_cross_method():
    rng = np.random.RandomState(400)
    half = GridSpec(129, 0.0, 0.5)
    ii, jj = np.tril_indices(129)
    worst = 0.0
    for _ in range(10):
        q0 = rand_trig(rng, half, 1.0)
        kg = transform.goursat_kernel(q0, half)
        kc = transform.collocation_kernel(Primitive.antiderivative_of(q0), half)
        worst = max(worst, float(np.max(np.abs(kg.values[ii, jj]
                                               - kc.values[ii, jj]))))
    ok = worst <= 1e-3
    _line(7, ok, "max kernel disagreement %.3g over 10 draws" % worst)
    assert ok


def test_criterion_8_glm_consistency(recon_gamma, recon_zero):
    res_g, _ = recon_gamma
    ok = True
    details = []
    for tag, res in (("gamma", res_g), ("zero", recon_zero)):
        d = res.diagnostics
        ok = ok and d["glm_residual"] <= 1e-6
        ok = ok and d["positivity_margin"] > 0.0
        ok = ok and d["h_spread"] <= 1e-4
        details.append("%s: res=%.2g margin=%.2g spread=%.2g"
                       % (tag, d["glm_residual"], d["positivity_margin"],
                          d["h_spread"]))
        assert d["glm_residual"] <= 1e-6
        assert d["positivity_margin"] > 0.0
        assert d["h_spread"] <= 1e-4
    for tag, sig0 in (("gamma", Primitive.example_gamma(0.5)),
                      ("zero", Primitive.zero())):
        res65 = glm.reconstruct(sig0, HARM, {"grid": 65})
        defect = glm.factorization_defect(res65.kernel, res65.phi)
        ok = ok and defect <= 1e-4
        details.append("%s fact@65=%.2g" % (tag, defect))
        assert defect <= 1e-4
    _line(8, ok, "; ".join(details))


def test_criterion_9_forward_order():
    sig = Primitive.example_gamma(0.5)
    bc = forward.BoundaryParam.robin(-0.5)
    e257 = forward.eigenvalues(sig, bc, 6, GridSpec(257))
    e513 = forward.eigenvalues(sig, bc, 6, GridSpec(513))
    target = math.pi * np.arange(6)
    c, f = np.abs(e257 - target), np.abs(e513 - target)
    ratios = c[1:] / f[1:]
    # n = 0 is found essentially exactly on both grids; require it not to
    # worsen and check the 4th-order ratio on n = 1..5
    ok = bool(np.all(ratios >= 12.0) and f[0] <= c[0] + 1e-12)
    _line(9, ok, "ratios n=1..5: %s; err0 %.2g -> %.2g"
          % (np.array2string(ratios, precision=1), c[0], f[0]))
    assert ok
