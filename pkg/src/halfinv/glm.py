"""Reconstruction engine: extend phi to (0,2), check that I + F_phi is
positive, solve the Gelfand-Levitan-Marchenko equation row by row, and read
off sigma on (0,1) and the boundary constant h.

The pipeline lives in reconstruct(); every stage is also usable on its own.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import basis, forward, transform
from .core import GridSpec, SampledFunction, trapezoid_weights
from .errors import (BoundaryDegenerate, ConfigError, SingularSystem,
                     Unsolvable)


class PhiExtension:
    """phi on [0,2] as samples plus the exact series value at 0."""

    def __init__(self, samples, phi_at_zero):
        self.samples = samples
        self.phi_at_zero = float(phi_at_zero)

    def eval(self, x):
        return self.samples.eval(x)


class ReconstructionResult:
    """sigma on (0,1), h, and the diagnostics of the run.

    kernel, phi and report are kept for inspection; diagnostics is a plain
    dict (glm_residual, positivity_margin, h_spread, expansion_residual,
    min_alpha, optionally roundtrip_spectrum_error).
    """

    def __init__(self, sigma, h, diagnostics, kernel=None, phi=None,
                 report=None):
        self.sigma = sigma
        self.h = float(h)
        self.diagnostics = diagnostics
        self.kernel = kernel
        self.phi = phi
        self.report = report


def extend_phi(report, lam, grid):
    """phi = psi_Lambda + Sigma beta_n cos(lambda_n x) + 1/2 on [0,2].

    Identical to summing alpha_n cos(lambda_n x) - cos(pi n x) over the
    truncation head and continuing tail terms with alpha = 1, since
    beta = alpha - 1 vanishes beyond the head by the data model.
    phi_at_zero is the series value Sigma beta_n + 1/2, not an interpolant.
    """
    if not report.solvable:
        raise Unsolvable("phi0 is not in the admissible class; the head "
                         "alphas are not all positive", report=report)
    psi = basis.psi_lambda(lam, grid)
    b = report.beta.head
    lams = lam.lambdas(b.size)
    vals = psi.values + b @ np.cos(np.outer(lams, grid.nodes)) + 0.5
    return PhiExtension(SampledFunction(grid, vals), b.sum() + 0.5)


def f_phi(phi, x, t):
    """f_phi(x,t) = phi(x+t) + phi(|x-t|) for x,t in [0,1]."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    out = phi.samples.eval(x + t) + phi.samples.eval(np.abs(x - t))
    return float(out) if out.ndim == 0 else out


def _f_matrix(phi, grid):
    x = grid.nodes
    return (phi.samples.eval(np.add.outer(x, x))
            + phi.samples.eval(np.abs(np.subtract.outer(x, x))))


def positivity_check(phi, grid):
    """Smallest eigenvalue of I + F_phi discretized on grid.

    Trapezoid Nystrom matrix symmetrized as I + W^1/2 F W^1/2; a margin
    <= 0 is a legitimate return value meaning not factorizable.
    """
    F = _f_matrix(phi, grid)
    r = np.sqrt(trapezoid_weights(grid))
    A = np.eye(grid.n_points) + F * np.outer(r, r)
    return float(np.linalg.eigvalsh(A)[0])


def glm_solve(phi, grid, threads=1):
    """Solve k(x,t) + f(x,t) + int_0^x k(x,s) f(s,t) ds = 0 per row.

    Nystrom with trapezoid weights on the t-nodes up to x; the x = 0 row
    degenerates to k(0,0) = -f(0,0) = -2 phi(0) and is filled directly.
    """
    n = grid.n_points
    h = grid.step
    F = _f_matrix(phi, grid)
    values = np.zeros((n, n))
    values[0, 0] = -2.0 * phi.phi_at_zero

    def fill(i):
        w = np.full(i + 1, h)
        w[0] = 0.5 * h
        w[-1] = 0.5 * h
        Fi = F[: i + 1, : i + 1]
        A = np.eye(i + 1) + Fi * w[None, :]
        try:
            values[i, : i + 1] = np.linalg.solve(A, -Fi[:, i])
        except np.linalg.LinAlgError:
            raise SingularSystem(
                "GLM row %d is numerically singular; the positivity margin "
                "must be essentially zero" % i)

    rows = range(1, n)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            list(ex.map(fill, rows))
    else:
        for i in rows:
            fill(i)
    return transform.KernelTriangle(grid, values)


def glm_residual(kern, phi):
    """Largest discrete GLM residual, relative to 1 + |f| at each pair."""
    grid = kern.grid
    n = grid.n_points
    h = grid.step
    F = _f_matrix(phi, grid)
    worst = 0.0
    for i in range(1, n):
        w = np.full(i + 1, h)
        w[0] = 0.5 * h
        w[-1] = 0.5 * h
        row = kern.values[i, : i + 1]
        res = row + F[i, : i + 1] + (w * row) @ F[: i + 1, : i + 1]
        worst = max(worst, float(np.max(np.abs(res)
                                        / (1.0 + np.abs(F[i, : i + 1])))))
    return worst


def factorization_defect(kern, phi):
    """Entrywise defect of (I+F)(I+K^T)(I+K) = I in the weighted frame.

    K is the Volterra Nystrom matrix of k with its diagonal halved (the
    jump across t = x enters by its mean value); weights trapezoid,
    symmetrized by W^1/2 on both sides.  The identity holds in L2, so the
    defect measures pure discretization error, about h^2 entrywise.
    """
    grid = kern.grid
    n = grid.n_points
    F = _f_matrix(phi, grid)
    r = np.sqrt(trapezoid_weights(grid))
    Kmat = np.tril(kern.values).copy()
    Kmat[np.arange(n), np.arange(n)] *= 0.5
    Ft = F * np.outer(r, r)
    Kt = Kmat * np.outer(r, r)
    I = np.eye(n)
    E = (I + Ft) @ (I + Kt.T) @ (I + Kt) - I
    return float(np.abs(E).max())


def sigma_from_kernel(kern, phi):
    """sigma(x) = 2 k(x,x) + 2 phi(0) on the kernel grid."""
    return SampledFunction(kern.grid,
                           2.0 * kern.diagonal() + 2.0 * phi.phi_at_zero)


def recover_h(sigma, lam, grid):
    """h = v(1)/u(1) of the shot solution at lambda_0..lambda_2.

    All three quotients must agree for consistent data; the mean and the
    max pairwise spread are returned.
    """
    hs = []
    for nn in range(3):
        traj = forward.shoot(sigma, lam.lambda_at(nn), grid)
        u1 = traj.u[-1]
        if abs(u1) < 1e-10:
            raise BoundaryDegenerate(
                "shot solution vanishes at x = 1 for lambda_%d; h is not "
                "determined by this eigenvalue" % nn)
        hs.append(traj.v[-1] / u1)
    hs = np.asarray(hs)
    return float(hs.mean()), float(hs.max() - hs.min())


_DEFAULTS = {
    "grid": 257,
    "truncation": None,
    "kernel_method": "auto",
    "threads": 1,
    "roundtrip": False,
}


def reconstruct(sigma0, lam, config=None):
    """Half-inverse reconstruction from sigma0 on (0,1/2) and the spectrum.

    Stages: transformation kernel on (0,1/2) -> phi0 -> membership gate ->
    phi on (0,2) -> positivity gate -> GLM -> sigma and h.  Fails fast
    with Unsolvable at either gate; config keys (all optional): grid
    (nodes on [0,1], default 257), truncation, kernel_method
    (auto|goursat|collocation), threads, roundtrip.
    """
    cfg = dict(_DEFAULTS)
    if config:
        unknown = set(config) - set(cfg)
        if unknown:
            raise ConfigError("unknown reconstruct options: %s"
                              % ", ".join(sorted(unknown)))
        cfg.update(config)
    n = int(cfg["grid"])
    if n < 3 or n % 2 == 0:
        raise ConfigError("grid must be an odd node count >= 3, got %d" % n)
    threads = int(cfg["threads"]) or 1

    # same node count on [0,1/2]: phi0 then lands exactly on the [0,1] grid
    half = GridSpec(n, 0.0, 0.5)
    method = cfg["kernel_method"]
    if method == "auto":
        method = "goursat" if sigma0.kind == "antiderivative" else "collocation"
    if method == "goursat":
        if sigma0.kind != "antiderivative" or sigma0.q is None:
            raise ConfigError("goursat needs sigma0 given as an "
                              "antiderivative of a sampled q0")
        kern0 = transform.goursat_kernel(sigma0.q, half)
    elif method == "collocation":
        kern0 = transform.collocation_kernel(sigma0, half, threads=threads)
    else:
        raise ConfigError("kernel_method must be auto, goursat or "
                          "collocation, got %r" % method)
    phi0_func = transform.phi0(sigma0, kern0)

    report = basis.membership_check(phi0_func, lam, cfg["truncation"])
    if not report.solvable:
        raise Unsolvable(
            "phi0 is not in the admissible class (min alpha = %.6g)"
            % report.min_alpha, report=report)

    grid = GridSpec(n, 0.0, 1.0)
    grid2 = GridSpec(2 * n - 1, 0.0, 2.0)
    phi = extend_phi(report, lam, grid2)
    margin = positivity_check(phi, grid)
    if margin <= 1e-8:
        raise Unsolvable(
            "I + F_phi is not numerically positive (margin %.3e); the "
            "membership and positivity gates disagree only within "
            "discretization error" % margin, report=report, margin=margin)

    kern = glm_solve(phi, grid, threads=threads)
    sigma = sigma_from_kernel(kern, phi)
    h, spread = recover_h(sigma, lam, grid.refine())

    diagnostics = {
        "glm_residual": glm_residual(kern, phi),
        "positivity_margin": margin,
        "h_spread": spread,
        "expansion_residual": report.expansion_residual,
        "min_alpha": report.min_alpha,
    }
    if cfg["roundtrip"]:
        bc = forward.BoundaryParam.robin(h)
        count = lam.head.size
        eig = forward.eigenvalues(sigma, bc, count, grid.refine())
        diagnostics["roundtrip_spectrum_error"] = float(
            np.max(np.abs(eig - lam.lambdas(count))))
    return ReconstructionResult(sigma, h, diagnostics,
                                kernel=kern, phi=phi, report=report)
